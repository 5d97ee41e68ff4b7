#include "flowlines/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "flowlines/errors.hpp"
#include "flowlines/fourier.hpp"
#include "flowlines/numerics.hpp"

namespace flowlines::spectra {
namespace {

Complex ik_power(int k, int order) {
    Complex f{1.0, 0.0};
    const Complex ik{0.0, static_cast<double>(k)};
    for (int i = 0; i < order; ++i) f *= ik;
    return f;
}

// Stencil rows for diff_psi on a grid of n_psi intervals with unit spacing.
struct PsiStencils {
    int order;
    int width;                                  // 5 or 6 one-sided nodes
    std::array<double, 5> centre;               // nodes j-2..j+2
    std::array<std::array<double, 6>, 2> near;  // rows 0 and 1, nodes 0..width-1
};

const PsiStencils& stencils(int order) {
    static const std::array<PsiStencils, 2> cache = [] {
        std::array<PsiStencils, 2> s{};
        for (int o = 1; o <= 2; ++o) {
            PsiStencils& st = s[static_cast<std::size_t>(o - 1)];
            st.order = o;
            st.width = o == 1 ? 5 : 6;
            const std::array<double, 5> centred{-2, -1, 0, 1, 2};
            const auto wc = numerics::fd_weights(0.0, centred, o);
            std::copy(wc.begin(), wc.end(), st.centre.begin());
            std::array<double, 6> nodes{0, 1, 2, 3, 4, 5};
            for (int row = 0; row < 2; ++row) {
                const auto w = numerics::fd_weights(row, std::span(nodes).first(st.width), o);
                st.near[row].fill(0.0);
                std::copy(w.begin(), w.end(), st.near[row].begin());
            }
        }
        return s;
    }();
    return cache[static_cast<std::size_t>(order - 1)];
}

double weight_kq(int k, int q) {
    if (k == 0) return q == 0 ? 1.0 : 0.0;
    return std::pow(static_cast<double>(k) * k, q);
}

double l2_squared(std::span<const Complex> values, double h) {
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i]);
    return numerics::integrate(sq, h);
}

}  // namespace

AnalyticLine fourier_analyze(std::span<const Complex> samples, int K) {
    return AnalyticLine(K, fourier::analyze(samples, K));
}

AnalyticLine fourier_analyze(std::span<const double> samples, int K) {
    std::vector<Complex> c(samples.begin(), samples.end());
    return fourier_analyze(c, K);
}

std::vector<Complex> synthesize(const AnalyticLine& a, int n_x) {
    return fourier::synthesize(a.coeffs(), n_x);
}

std::vector<double> synthesize_real(const AnalyticLine& a, int n_x) {
    const auto c = synthesize(a, n_x);
    std::vector<double> out(c.size());
    std::transform(c.begin(), c.end(), out.begin(), [](Complex z) { return z.real(); });
    return out;
}

Complex evaluate(const AnalyticLine& a, Complex z) {
    Complex sum{};
    const Complex i{0.0, 1.0};
    for (int k = -a.order(); k <= a.order(); ++k) sum += a[k] * std::exp(i * static_cast<double>(k) * z);
    return sum;
}

FlowFamily sample_family(const std::function<double(double, double)>& fn, int K, int n_psi) {
    FlowFamily a(K, n_psi);
    const int n_x = fourier::padded_size(K);
    const auto x = fourier::grid(n_x);
    std::vector<Complex> row(static_cast<std::size_t>(n_x));
    for (int j = 0; j <= n_psi; ++j) {
        for (int i = 0; i < n_x; ++i) row[static_cast<std::size_t>(i)] = fn(x[static_cast<std::size_t>(i)], a.psi(j));
        const auto c = fourier::analyze(row, K);
        for (int k = -K; k <= K; ++k) a(k, j) = c[static_cast<std::size_t>(k + K)];
    }
    return a;
}

AnalyticLine sample_line(const std::function<double(double)>& fn, int K) {
    const int n_x = fourier::padded_size(K);
    const auto x = fourier::grid(n_x);
    std::vector<Complex> row(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) row[static_cast<std::size_t>(i)] = fn(x[static_cast<std::size_t>(i)]);
    return fourier_analyze(row, K);
}

std::vector<std::vector<Complex>> synthesize_family(const FlowFamily& a, int n_x) {
    std::vector<std::vector<Complex>> out(static_cast<std::size_t>(a.rows()));
    for (int j = 0; j <= a.n_psi(); ++j) out[static_cast<std::size_t>(j)] = synthesize(restrict_line(a, j), n_x);
    return out;
}

FlowFamily diff_x(const FlowFamily& a, int order) {
    if (order < 1) throw DomainError("derivative order must be at least 1");
    FlowFamily out = a;
    for (int k = -a.order(); k <= a.order(); ++k) {
        const Complex f = ik_power(k, order);
        for (auto& c : out.mode(k)) c *= f;
    }
    return out;
}

AnalyticLine diff_x(const AnalyticLine& a, int order) {
    if (order < 1) throw DomainError("derivative order must be at least 1");
    AnalyticLine out = a;
    for (int k = -a.order(); k <= a.order(); ++k) out[k] *= ik_power(k, order);
    return out;
}

void diff_psi_mode(std::span<const Complex> in, std::span<Complex> out, int order) {
    const int n = static_cast<int>(in.size()) - 1;
    if (n < 5) throw ResolutionError("psi differentiation needs n_psi >= 5, got " + std::to_string(n));
    if (order != 1 && order != 2) throw CapabilityError("psi derivative order must be 1 or 2");

    const PsiStencils& st = stencils(order);
    const double scale = std::pow(static_cast<double>(n), order);  // 1 / h^order
    // Mirrored stencils at the top rows: first derivative flips sign.
    const double mirror = order == 1 ? -1.0 : 1.0;

    for (int row = 0; row < 2; ++row) {
        Complex lo{}, hi{};
        for (int i = 0; i < st.width; ++i) {
            lo += st.near[row][i] * in[static_cast<std::size_t>(i)];
            hi += st.near[row][i] * in[static_cast<std::size_t>(n - i)];
        }
        out[static_cast<std::size_t>(row)] = lo * scale;
        out[static_cast<std::size_t>(n - row)] = mirror * hi * scale;
    }
    for (int j = 2; j <= n - 2; ++j) {
        Complex s{};
        for (int i = 0; i < 5; ++i) s += st.centre[i] * in[static_cast<std::size_t>(j - 2 + i)];
        out[static_cast<std::size_t>(j)] = s * scale;
    }
}

FlowFamily diff_psi(const FlowFamily& a, int order) {
    if (a.n_psi() < 5) throw ResolutionError("psi differentiation needs n_psi >= 5");
    FlowFamily out(a.order(), a.n_psi());
    for (int k = -a.order(); k <= a.order(); ++k) diff_psi_mode(a.mode(k), out.mode(k), order);
    return out;
}

double x_norm(const AnalyticLine& a, double sigma, double order) {
    double sum = 0.0;
    for (int k = -a.order(); k <= a.order(); ++k) {
        const double kk = static_cast<double>(k) * k;
        sum += std::pow(1.0 + kk, order) * std::exp(2.0 * sigma * std::abs(k)) * std::norm(a[k]);
    }
    return std::sqrt(sum);
}

double x_norm(const AnalyticLine& a, const SpaceParams& p) { return x_norm(a, p.sigma(), p.m()); }

double y_norm(const FlowFamily& a, double sigma, int m) {
    if (m < 0) throw DomainError("Sobolev order must be nonnegative");
    if (m > kMaxNormOrder) {
        throw CapabilityError("y_norm supports m <= " + std::to_string(kMaxNormOrder) + ", got " +
                              std::to_string(m));
    }
    if (m > 0 && a.n_psi() < 5) throw ResolutionError("y_norm with m > 0 needs n_psi >= 5");

    const double h = a.h();
    const auto rows = static_cast<std::size_t>(a.rows());
    std::array<std::vector<Complex>, kMaxNormOrder + 1> d;
    for (auto& v : d) v.resize(rows);

    double sum = 0.0;
    for (int k = -a.order(); k <= a.order(); ++k) {
        const auto mode = a.mode(k);
        std::copy(mode.begin(), mode.end(), d[0].begin());
        if (m >= 1) diff_psi_mode(d[0], d[1], 1);
        if (m >= 2) diff_psi_mode(d[0], d[2], 2);
        if (m >= 3) diff_psi_mode(d[2], d[3], 1);
        if (m >= 4) diff_psi_mode(d[2], d[4], 2);

        const double ew = std::exp(2.0 * sigma * std::abs(k));
        for (int p = 0; p <= m; ++p) {
            double wq = 0.0;
            for (int q = 0; q <= m - p; ++q) wq += weight_kq(k, q);
            if (wq == 0.0) continue;
            sum += wq * ew * l2_squared(d[static_cast<std::size_t>(p)], h);
        }
    }
    return std::sqrt(sum);
}

double y_norm(const FlowFamily& a, const SpaceParams& p) { return y_norm(a, p.sigma(), p.m()); }

double boundary_norm(const AnalyticLine& a, double sigma, int m) {
    if (m < 0) throw DomainError("Sobolev order must be nonnegative");
    const int n_x = fourier::padded_size(a.order());
    double total = 0.0;
    for (const double t : {sigma, -sigma}) {
        // Continuation a(x + it) sampled on the real grid, then the H^m norm
        // from grid L2 norms of x-derivatives: (1+k^2)^m = sum_j C(m,j) k^{2j}.
        const AnalyticLine line = evaluate_on_strip(a, t, std::abs(t));
        double binom = 1.0;
        for (int j = 0; j <= m; ++j) {
            const AnalyticLine dj = j == 0 ? line : diff_x(line, j);
            const auto v = synthesize(dj, n_x);
            double mean = 0.0;
            for (const auto& z : v) mean += std::norm(z);
            mean /= n_x;
            total += binom * mean;
            binom = binom * (m - j) / (j + 1);
        }
    }
    return std::sqrt(total);
}

AnalyticLine evaluate_on_strip(const AnalyticLine& a, double t, double sigma) {
    if (std::abs(t) > sigma) {
        throw DomainError("|t| = " + std::to_string(std::abs(t)) + " exceeds strip half-width " +
                          std::to_string(sigma));
    }
    AnalyticLine out = a;
    for (int k = -a.order(); k <= a.order(); ++k) out[k] *= std::exp(-static_cast<double>(k) * t);
    return out;
}

StripEstimate strip_estimate(const AnalyticLine& a) {
    StripEstimate est;
    bool any_nonzero = false;
    int usable_stored = 0;
    for (int k = -a.order(); k <= a.order(); ++k) {
        const double mag = std::abs(a[k]);
        if (mag != 0.0) any_nonzero = true;
        if (k != 0 && mag > kStripFloor) ++usable_stored;
    }
    if (!any_nonzero) return est;  // undefined
    if (usable_stored < kStripMinModes) {
        est.kind = StripEstimate::Kind::entire;
        est.value = std::numeric_limits<double>::infinity();
        return est;
    }

    std::vector<double> n, logmag;
    for (int k = 1; k <= a.order(); ++k) {
        const double mag = std::max(std::abs(a[k]), std::abs(a[-k]));
        if (mag > kStripFloor) {
            n.push_back(k);
            logmag.push_back(std::log(mag));
        }
    }
    // Tail: upper half of the usable wavenumbers, at least six of them.
    std::size_t start = n.size() / 2;
    if (n.size() - start < 6) start = n.size() > 6 ? n.size() - 6 : 0;

    // Least squares for log|a_n| = c0 + c1 n + c2 log n, centred columns.
    const std::size_t cnt = n.size() - start;
    double mn = 0.0, ml = 0.0, my = 0.0;
    for (std::size_t i = start; i < n.size(); ++i) {
        mn += n[i];
        ml += std::log(n[i]);
        my += logmag[i];
    }
    mn /= cnt;
    ml /= cnt;
    my /= cnt;
    double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
    for (std::size_t i = start; i < n.size(); ++i) {
        const double u = n[i] - mn, v = std::log(n[i]) - ml, y = logmag[i] - my;
        s11 += u * u;
        s12 += u * v;
        s22 += v * v;
        s1y += u * y;
        s2y += v * y;
    }
    const double det = s11 * s22 - s12 * s12;
    double slope;
    if (cnt >= 4 && det > 1e-12 * s11 * s22) {
        slope = (s1y * s22 - s2y * s12) / det;
    } else {
        slope = s1y / s11;
    }
    est.kind = StripEstimate::Kind::finite;
    est.value = -slope;
    est.modes_used = static_cast<int>(cnt);
    return est;
}

AnalyticLine restrict_line(const FlowFamily& a, int j) {
    if (j < 0 || j > a.n_psi()) {
        throw DomainError("psi index " + std::to_string(j) + " outside 0.." + std::to_string(a.n_psi()));
    }
    AnalyticLine line(a.order());
    for (int k = -a.order(); k <= a.order(); ++k) line[k] = a(k, j);
    return line;
}

FlowFamily broadcast(const AnalyticLine& a, int n_psi) {
    FlowFamily out(a.order(), n_psi);
    for (int k = -a.order(); k <= a.order(); ++k) {
        for (auto& c : out.mode(k)) c = a[k];
    }
    return out;
}

FlowFamily embed_profile(std::span<const double> values, int K) {
    FlowFamily out(K, static_cast<int>(values.size()) - 1);
    auto m0 = out.mode(0);
    for (std::size_t j = 0; j < values.size(); ++j) m0[j] = values[j];
    return out;
}

FlowFamily shift_x(const FlowFamily& a, double x0) {
    FlowFamily out = a;
    for (int k = -a.order(); k <= a.order(); ++k) {
        const Complex f = std::polar(1.0, k * x0);
        for (auto& c : out.mode(k)) c *= f;
    }
    return out;
}

AnalyticLine shift_x(const AnalyticLine& a, double x0) {
    AnalyticLine out = a;
    for (int k = -a.order(); k <= a.order(); ++k) out[k] *= std::polar(1.0, k * x0);
    return out;
}

FlowFamily reflect_x(const FlowFamily& a) {
    FlowFamily out(a.order(), a.n_psi());
    for (int k = -a.order(); k <= a.order(); ++k) {
        const auto src = a.mode(-k);
        std::copy(src.begin(), src.end(), out.mode(k).begin());
    }
    return out;
}

AnalyticLine reflect_x(const AnalyticLine& a) {
    AnalyticLine out(a.order());
    for (int k = -a.order(); k <= a.order(); ++k) out[k] = a[-k];
    return out;
}

FlowFamily reflect_psi(const FlowFamily& a) {
    FlowFamily out(a.order(), a.n_psi());
    for (int k = -a.order(); k <= a.order(); ++k) {
        const auto src = a.mode(k);
        std::reverse_copy(src.begin(), src.end(), out.mode(k).begin());
    }
    return out;
}

double max_abs_diff(const FlowFamily& a, const FlowFamily& b) {
    if (!a.same_shape(b)) throw ResolutionError("family resolutions differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

double max_abs_diff(const AnalyticLine& a, const AnalyticLine& b) {
    if (a.order() != b.order()) throw ResolutionError("line orders differ");
    double m = 0.0;
    for (int k = -a.order(); k <= a.order(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double max_abs_grid_diff(const FlowFamily& a, const FlowFamily& b) {
    const FlowFamily d = a - b;
    const int n_x = fourier::padded_size(a.order());
    double m = 0.0;
    for (int j = 0; j <= d.n_psi(); ++j) {
        for (const auto& z : synthesize(restrict_line(d, j), n_x)) m = std::max(m, std::abs(z));
    }
    return m;
}

}  // namespace flowlines::spectra

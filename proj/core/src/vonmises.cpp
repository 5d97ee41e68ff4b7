#include "flowlines/vonmises.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "flowlines/errors.hpp"
#include "flowlines/fourier.hpp"
#include "flowlines/numerics.hpp"
#include "flowlines/spectra.hpp"

namespace flowlines::vonmises {
namespace {

// The five derivative fields entering Phi, each synthesized row by row.
struct Derivatives {
    FlowFamily ax, axx, ap, axp, app;

    explicit Derivatives(const FlowFamily& a)
        : ax(spectra::diff_x(a, 1)),
          axx(spectra::diff_x(a, 2)),
          ap(spectra::diff_psi(a, 1)),
          axp(spectra::diff_x(ap, 1)),
          app(spectra::diff_psi(a, 2)) {}
};

std::vector<Complex> row_values(const FlowFamily& a, int j, int n_x) {
    std::vector<Complex> c(static_cast<std::size_t>(a.modes()));
    for (int k = -a.order(); k <= a.order(); ++k) c[static_cast<std::size_t>(k + a.order())] = a(k, j);
    return fourier::synthesize(c, n_x);
}

[[noreturn]] void throw_ellipticity(double min_a_psi, double floor) {
    std::ostringstream msg;
    msg << "a_psi drops to " << min_a_psi << ", below the ellipticity floor " << floor
        << " (stagnation point nearby)";
    throw EllipticityError(msg.str(), min_a_psi);
}

}  // namespace

FlowFamily phi(const FlowFamily& a, double ellipticity_floor) {
    const int K = a.order();
    const int n_x = fourier::padded_size(K);
    const Derivatives d(a);

    FlowFamily out(K, a.n_psi());
    std::vector<Complex> vals(static_cast<std::size_t>(n_x));
    double min_a_psi = std::numeric_limits<double>::infinity();

    for (int j = 0; j <= a.n_psi(); ++j) {
        const auto ax = row_values(d.ax, j, n_x);
        const auto axx = row_values(d.axx, j, n_x);
        const auto ap = row_values(d.ap, j, n_x);
        const auto axp = row_values(d.axp, j, n_x);
        const auto app = row_values(d.app, j, n_x);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            min_a_psi = std::min(min_a_psi, ap[i].real());
            const Complex inv = 1.0 / ap[i];
            const Complex inv2 = inv * inv;
            vals[i] = -inv * axx[i] + 2.0 * ax[i] * inv2 * axp[i] -
                      (1.0 + ax[i] * ax[i]) * inv2 * inv * app[i];
        }
        const auto c = fourier::analyze(vals, K);
        for (int k = -K; k <= K; ++k) out(k, j) = c[static_cast<std::size_t>(k + K)];
    }
    if (min_a_psi < ellipticity_floor) throw_ellipticity(min_a_psi, ellipticity_floor);
    return out;
}

VelocityField velocity(const FlowFamily& a, double ellipticity_floor) {
    const int n_x = fourier::padded_size(a.order());
    const FlowFamily ax = spectra::diff_x(a, 1);
    const FlowFamily ap = spectra::diff_psi(a, 1);

    VelocityField v;
    v.n_x = n_x;
    v.n_psi = a.n_psi();
    v.x = fourier::grid(n_x);
    v.psi.resize(static_cast<std::size_t>(a.rows()));
    v.u1.resize(static_cast<std::size_t>(n_x * a.rows()));
    v.u2.resize(v.u1.size());

    double min_a_psi = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= a.n_psi(); ++j) {
        v.psi[static_cast<std::size_t>(j)] = a.psi(j);
        const auto axr = row_values(ax, j, n_x);
        const auto apr = row_values(ap, j, n_x);
        for (int i = 0; i < n_x; ++i) {
            const double s = apr[static_cast<std::size_t>(i)].real();
            min_a_psi = std::min(min_a_psi, s);
            const auto idx = static_cast<std::size_t>(j * n_x + i);
            v.u1[idx] = 1.0 / s;
            v.u2[idx] = axr[static_cast<std::size_t>(i)].real() / s;
        }
    }
    if (min_a_psi < ellipticity_floor) throw_ellipticity(min_a_psi, ellipticity_floor);
    return v;
}

EllipticityReport ellipticity(const FlowFamily& a) {
    const int n_x = fourier::padded_size(a.order());
    const FlowFamily ax = spectra::diff_x(a, 1);
    const FlowFamily ap = spectra::diff_psi(a, 1);

    EllipticityReport rep;
    rep.min_a_psi = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= a.n_psi(); ++j) {
        const auto axr = row_values(ax, j, n_x);
        const auto apr = row_values(ap, j, n_x);
        for (int i = 0; i < n_x; ++i) {
            const double s = apr[static_cast<std::size_t>(i)].real();
            const double x = axr[static_cast<std::size_t>(i)].real();
            rep.min_a_psi = std::min(rep.min_a_psi, s);
            if (s == 0.0) continue;
            const double A = -1.0 / s;
            const double B = x / (s * s);
            const double C = -(1.0 + x * x) / (s * s * s);
            const double s4 = (s * s) * (s * s);
            rep.max_identity_error = std::max(rep.max_identity_error, std::abs((A * C - B * B) * s4 - 1.0));
        }
    }
    return rep;
}

double linearization_check(const FlowFamily& v, double h) {
    if (!(h > 0.0)) throw DomainError("linearization step must be positive");
    FlowFamily base(v.order(), v.n_psi());
    for (int j = 0; j <= v.n_psi(); ++j) base(0, j) = v.psi(j);

    FlowFamily perturbed = base;
    for (std::size_t i = 0; i < perturbed.data().size(); ++i) perturbed.data()[i] += h * v.data()[i];

    // Phi(psi) vanishes identically; keep it in the difference quotient anyway
    // so rounding in the base evaluation is accounted for.
    FlowFamily defect = phi(perturbed, 0.0) - phi(base, 0.0);
    defect *= 1.0 / h;
    defect += spectra::diff_x(v, 2);
    defect += spectra::diff_psi(v, 2);

    const int n_x = fourier::padded_size(v.order());
    double worst = 0.0;
    for (int j = 1; j < v.n_psi(); ++j) {
        for (const auto& z : row_values(defect, j, n_x)) worst = std::max(worst, std::abs(z));
    }
    return worst;
}

FlowFamily streamfunction_to_flowlines(const StreamFunction& psi_star, const AnalyticLine& f,
                                       const AnalyticLine& g, int n_psi) {
    if (f.order() != g.order()) throw ResolutionError("boundary lines have different orders");
    const int K = f.order();
    const int n_x = fourier::padded_size(K);
    const auto x = fourier::grid(n_x);
    const auto fv = spectra::synthesize_real(f, n_x);
    const auto gv = spectra::synthesize_real(g, n_x);

    constexpr int kMonotoneSamples = 64;
    constexpr double kLevelSlack = 1e-9;

    FlowFamily out(K, n_psi);
    std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(n_psi + 1),
                                           std::vector<Complex>(static_cast<std::size_t>(n_x)));

    for (int i = 0; i < n_x; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        const double lo = fv[static_cast<std::size_t>(i)];
        const double hi = gv[static_cast<std::size_t>(i)];
        if (!(hi > lo)) throw DomainError("channel walls touch or cross at x = " + std::to_string(xi));

        auto section = [&](double y) { return psi_star(xi, y); };
        double prev = section(lo);
        for (int s = 1; s <= kMonotoneSamples; ++s) {
            const double cur = section(lo + (hi - lo) * s / kMonotoneSamples);
            if (!(cur > prev)) {
                throw StagnationError("stream function is not increasing across the channel at x = " +
                                      std::to_string(xi));
            }
            prev = cur;
        }
        const double psi_lo = section(lo);
        const double psi_hi = section(hi);

        for (int j = 0; j <= n_psi; ++j) {
            const double level = out.psi(j);
            if (level < psi_lo - kLevelSlack || level > psi_hi + kLevelSlack) {
                throw DomainError("level psi = " + std::to_string(level) +
                                  " is not attained between the walls at x = " + std::to_string(xi));
            }
            double y;
            if (level <= psi_lo) {
                y = lo;
            } else if (level >= psi_hi) {
                y = hi;
            } else {
                y = numerics::solve_increasing(section, {}, level, lo, hi);
            }
            rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = y;
        }
    }
    for (int j = 0; j <= n_psi; ++j) {
        const auto c = fourier::analyze(rows[static_cast<std::size_t>(j)], K);
        for (int k = -K; k <= K; ++k) out(k, j) = c[static_cast<std::size_t>(k + K)];
    }
    return out;
}

AnalyticLine level_line(const StreamFunction& psi_star, double level, double y_lo, double y_hi,
                        int K) {
    const int n_x = fourier::padded_size(K);
    const auto x = fourier::grid(n_x);
    std::vector<Complex> vals(static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_x; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        vals[static_cast<std::size_t>(i)] =
            numerics::solve_increasing([&](double y) { return psi_star(xi, y); }, {}, level, y_lo, y_hi);
    }
    return spectra::fourier_analyze(vals, K);
}

}  // namespace flowlines::vonmises

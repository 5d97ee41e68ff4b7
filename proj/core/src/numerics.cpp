#include "flowlines/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flowlines/errors.hpp"

namespace flowlines::numerics {

std::vector<double> fd_weights(double z, std::span<const double> nodes, int order) {
    const int n = static_cast<int>(nodes.size());
    if (order < 0 || order >= n) {
        throw ResolutionError("need more than " + std::to_string(order) + " nodes, got " +
                              std::to_string(n));
    }
    // c[j][k]: weight of node j for the k-th derivative.
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(order + 1)));
    double c1 = 1.0;
    double c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[static_cast<std::size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = c[j][order];
    return w;
}

std::vector<double> quadrature_weights(int n, double h, bool odd_block_at_end) {
    std::vector<double> w(static_cast<std::size_t>(n + 1), 0.0);
    if (n == 0) return w;
    if (n == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    auto simpson = [&](int from, int intervals) {
        for (int i = 0; i < intervals; i += 2) {
            w[static_cast<std::size_t>(from + i)] += h / 3.0;
            w[static_cast<std::size_t>(from + i + 1)] += 4.0 * h / 3.0;
            w[static_cast<std::size_t>(from + i + 2)] += h / 3.0;
        }
    };
    auto three_eighths = [&](int from) {
        const double s = 3.0 * h / 8.0;
        w[static_cast<std::size_t>(from)] += s;
        w[static_cast<std::size_t>(from + 1)] += 3.0 * s;
        w[static_cast<std::size_t>(from + 2)] += 3.0 * s;
        w[static_cast<std::size_t>(from + 3)] += s;
    };
    if (n % 2 == 0) {
        simpson(0, n);
    } else if (odd_block_at_end) {
        simpson(0, n - 3);
        three_eighths(n - 3);
    } else {
        three_eighths(0);
        simpson(3, n - 3);
    }
    return w;
}

double integrate(std::span<const double> values, double h) {
    if (values.empty()) return 0.0;
    const auto w = quadrature_weights(static_cast<int>(values.size()) - 1, h);
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
    return sum;
}

CubicStencil cubic_stencil(double t, double h, int n_intervals) {
    if (n_intervals < 3) throw ResolutionError("cubic interpolation needs at least 4 nodes");
    const double s = t / h;
    const int j = std::clamp(static_cast<int>(std::floor(s)), 0, n_intervals - 1);
    const int base = std::clamp(j - 1, 0, n_intervals - 3);
    const double u = s - base;  // local coordinate, nodes at 0,1,2,3

    CubicStencil st{};
    st.base = base;
    const double d0 = u, d1 = u - 1.0, d2 = u - 2.0, d3 = u - 3.0;
    st.w[0] = -d1 * d2 * d3 / 6.0;
    st.w[1] = d0 * d2 * d3 / 2.0;
    st.w[2] = -d0 * d1 * d3 / 2.0;
    st.w[3] = d0 * d1 * d2 / 6.0;
    st.dw[0] = -(d2 * d3 + d1 * d3 + d1 * d2) / (6.0 * h);
    st.dw[1] = (d2 * d3 + d0 * d3 + d0 * d2) / (2.0 * h);
    st.dw[2] = -(d1 * d3 + d0 * d3 + d0 * d1) / (2.0 * h);
    st.dw[3] = (d1 * d2 + d0 * d2 + d0 * d1) / (6.0 * h);
    return st;
}

double interpolate_cubic(std::span<const double> values, double h, double t) {
    return interpolate_cubic_d(values, h, t).value;
}

CubicSample interpolate_cubic_d(std::span<const double> values, double h, double t) {
    const auto st = cubic_stencil(t, h, static_cast<int>(values.size()) - 1);
    CubicSample out{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        const double v = values[static_cast<std::size_t>(st.base + i)];
        out.value += st.w[i] * v;
        out.derivative += st.dw[i] * v;
    }
    return out;
}

double solve_increasing(const std::function<double(double)>& fn,
                        const std::function<double(double)>& dfn, double target, double lo,
                        double hi, const RootOptions& options) {
    double r_lo = fn(lo) - target;
    double r_hi = fn(hi) - target;
    if (r_lo == 0.0) return lo;
    if (r_hi == 0.0) return hi;
    if (r_lo > 0.0 || r_hi < 0.0) {
        throw DomainError("target value is not bracketed by the search interval");
    }

    // Residuals at the bracket ends, kept to recognise a root sitting on one.
    auto shrink = [&](double y, double r) {
        if (r < 0.0) {
            lo = y;
            r_lo = r;
        } else {
            hi = y;
            r_hi = r;
        }
    };

    int iter = 0;
    while (hi - lo > options.bracket_width && iter < options.max_iter) {
        const double mid = 0.5 * (lo + hi);
        const double r = fn(mid) - target;
        if (r == 0.0) return mid;
        shrink(mid, r);
        ++iter;
    }

    auto derivative = [&](double y) {
        if (dfn) return dfn(y);
        const double step = 1e-6 * std::max(1.0, std::abs(y));
        return (fn(y + step) - fn(y - step)) / (2.0 * step);
    };
    const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(target));

    double y = 0.5 * (lo + hi);
    bool polished = false;
    for (; iter < options.max_iter; ++iter) {
        const double r = fn(y) - target;
        if (r == 0.0) return y;
        shrink(y, r);
        const double d = derivative(y);
        double next = (d > 0.0) ? y - r / d : 0.5 * (lo + hi);
        // y itself is now a bracket end, so a step that rounds to zero must
        // stop here rather than fall back to bisection.
        if (next == y) return y;
        if (!(next > lo && next < hi)) {
            // Newton points past an end whose residual is already at rounding
            // level: that end is the root.
            if (next <= lo && std::abs(r_lo) <= rounding) return lo;
            if (next >= hi && std::abs(r_hi) <= rounding) return hi;
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - y);
        y = next;
        if (step <= options.tol) {
            // One extra Newton step after the tolerance is met brings the
            // iterate to rounding level.
            if (polished) break;
            polished = true;
        }
    }
    return y;
}

}  // namespace flowlines::numerics

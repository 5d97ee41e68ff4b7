#pragma once

#include <functional>
#include <span>
#include <vector>

namespace flowlines::numerics {

/// Finite-difference weights (Fornberg) for the derivative of the given order
/// at z, using the nodes in `nodes`.
std::vector<double> fd_weights(double z, std::span<const double> nodes, int order);

/// Composite Simpson weights for n uniform intervals of width h. An odd
/// interval count closes with a 3/8 block, placed at the end unless
/// `odd_block_at_end` is false. n == 1 falls back to the trapezoid rule.
std::vector<double> quadrature_weights(int n, double h, bool odd_block_at_end = true);

/// Composite Simpson (with 3/8 closure) over uniformly spaced samples.
double integrate(std::span<const double> values, double h);

/// Cubic (4-point) Lagrange interpolation on the uniform grid t_j = j * h,
/// j = 0..values.size()-1. The stencil for t in [t_j, t_{j+1}] is j-1..j+2,
/// shifted inward at the ends.
struct CubicSample {
    double value;
    double derivative;
};
struct CubicStencil {
    int base;
    double w[4];
    double dw[4];
};
CubicStencil cubic_stencil(double t, double h, int n_intervals);
double interpolate_cubic(std::span<const double> values, double h, double t);
CubicSample interpolate_cubic_d(std::span<const double> values, double h, double t);

struct RootOptions {
    double bracket_width = 1e-3;
    double tol = 1e-12;
    int max_iter = 60;
};

/// Root of fn(y) = target for increasing fn on [lo, hi]: bisection until the
/// bracket is narrower than `bracket_width`, then safeguarded Newton. When
/// `dfn` is empty the derivative is taken by central differences.
double solve_increasing(const std::function<double(double)>& fn,
                        const std::function<double(double)>& dfn, double target, double lo,
                        double hi, const RootOptions& options = {});

}  // namespace flowlines::numerics

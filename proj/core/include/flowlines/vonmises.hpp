#pragma once

#include <functional>
#include <vector>

#include "flowlines/types.hpp"

/// Flow-line (von Mises) formulation: the family y = a(x, psi) of level lines
/// of the stream function, the quasilinear vorticity operator acting on it,
/// and the conversion from a physical stream function psi*(x, y).
namespace flowlines::vonmises {

inline constexpr double kDefaultEllipticityFloor = 0.1;

/// Velocity (1, a_x) / a_psi on the padded x-grid, laid out [j * n_x + i].
struct VelocityField {
    int n_x = 0;
    int n_psi = 0;
    std::vector<double> x;
    std::vector<double> psi;
    std::vector<double> u1;
    std::vector<double> u2;

    double u1_at(int i, int j) const { return u1[static_cast<std::size_t>(j * n_x + i)]; }
    double u2_at(int i, int j) const { return u2[static_cast<std::size_t>(j * n_x + i)]; }
};

struct EllipticityReport {
    double min_a_psi = 0.0;
    /// max |(AC - B^2) a_psi^4 - 1| over grid points with a_psi != 0.
    double max_identity_error = 0.0;
};

/// Phi(a) = -a_xx / a_psi + 2 a_x a_xpsi / a_psi^2 - (1 + a_x^2) a_psipsi / a_psi^3,
/// evaluated pointwise on the padded grid and truncated back to K modes.
/// Throws EllipticityError when Re a_psi < floor anywhere on the grid.
FlowFamily phi(const FlowFamily& a, double ellipticity_floor = kDefaultEllipticityFloor);

VelocityField velocity(const FlowFamily& a, double ellipticity_floor = kDefaultEllipticityFloor);

/// Never throws; reports the smallest a_psi and the deviation from the
/// identity AC - B^2 = 1 / a_psi^4.
EllipticityReport ellipticity(const FlowFamily& a);

/// max over interior rows and the padded x-grid of
/// |(Phi(psi + h v) - Phi(psi)) / h + Laplacian(v)|.
double linearization_check(const FlowFamily& v, double h);

using StreamFunction = std::function<double(double x, double y)>;

/// For every grid x and psi_j, the height y in [f(x), g(x)] with
/// psi*(x, y) = psi_j, then Fourier-analyzed in x.
/// Throws StagnationError if psi* is not increasing across the channel and
/// DomainError if a level is not attained between the walls.
FlowFamily streamfunction_to_flowlines(const StreamFunction& psi_star, const AnalyticLine& f,
                                       const AnalyticLine& g, int n_psi);

/// The level set psi*(x, y) = level as a line y = c(x), searching y in
/// [y_lo, y_hi] at every grid point.
AnalyticLine level_line(const StreamFunction& psi_star, double level, double y_lo, double y_hi,
                        int K);

}  // namespace flowlines::vonmises

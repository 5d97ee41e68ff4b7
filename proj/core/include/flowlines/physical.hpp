#pragma once

#include <vector>

#include "flowlines/types.hpp"

/// Back from flow-line coordinates to the physical channel: the stream
/// function psi(x, y) on a rectangular grid, its finite-difference vorticity,
/// and a stationarity check that shares nothing with the spectral solver.
namespace flowlines::physical {

/// Samples on x_i = 2 pi i / nx (i < nx) and y_l = y_grid[l] (l <= ny), laid
/// out [l * nx + i]. Points outside f(x_i) <= y <= g(x_i) hold NaN.
struct PhysicalField {
    int nx = 0;
    int ny = 0;  // number of y intervals
    double hx = 0.0;
    double hy = 0.0;
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    std::vector<double> lower;  // f(x_i)
    std::vector<double> upper;  // g(x_i)
    std::vector<char> inside;
    std::vector<double> psi;
    std::vector<double> omega;  // 5-point Laplacian of psi; NaN off the stencil
    std::vector<double> u1;     // 1 / a_psi at the sample
    std::vector<double> u2;     // a_x / a_psi at the sample

    std::size_t index(int i, int l) const {
        return static_cast<std::size_t>(l) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
};

struct StationarityReport {
    double max_pde_residual = 0.0;
    double max_vorticity_drift = 0.0;
    double divergence_max = 0.0;
    int n_points = 0;  // verification points (2 cells clear of the walls)
};

/// psi with a(x, psi) = y, by root finding on the cubic interpolant of the
/// column a(x, psi_j). Throws StagnationError when the column is not
/// increasing and DomainError when y lies outside the channel.
double stream_function_at(const FlowFamily& a, double x, double y);

/// ny is the number of y intervals over [min f, max g]; nx is chosen so that
/// hx is close to hy (and at least 2K + 1).
PhysicalField reconstruct_streamfunction(const FlowFamily& a, const AnalyticLine& f,
                                         const AnalyticLine& g, int ny);

inline constexpr int kMinVerifyNy = 32;

inline constexpr int kDriftLevels = 32;

/// Residual |Lap psi - F(psi)| and |div u| over points at least two cells
/// from either wall; the drift is the largest standard deviation of omega
/// along the levels psi = q / (kDriftLevels + 1), located in each column by
/// linear interpolation.
StationarityReport verify_stationarity(const PhysicalField& field, const VorticityProfile& F);

struct TracePoint {
    double t;
    double x;
    double y;
};

/// Particle released at (x0, a(x0, psi0)): x' = 1 / a_psi(x, psi0) by RK4 with
/// `steps` steps over [0, duration]; y = a(x, psi0) along the way.
std::vector<TracePoint> trace_particle(const FlowFamily& a, double x0, double psi0, double duration,
                                       int steps);

}  // namespace flowlines::physical

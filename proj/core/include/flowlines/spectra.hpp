#pragma once

#include <functional>
#include <span>
#include <vector>

#include "flowlines/types.hpp"

/// Discrete functions on the circle and on the periodic strip T x [0,1]:
/// transforms, derivatives, the weighted Fourier norms of analytic lines and
/// partially-analytic families, complex-strip evaluation and strip estimates.
namespace flowlines::spectra {

inline constexpr int kDefaultK = 64;
inline constexpr int kDefaultNpsi = 128;
inline constexpr int kMaxNormOrder = 4;
inline constexpr double kStripFloor = 1e-14;
inline constexpr int kStripMinModes = 8;

AnalyticLine fourier_analyze(std::span<const Complex> samples, int K);
AnalyticLine fourier_analyze(std::span<const double> samples, int K);

std::vector<Complex> synthesize(const AnalyticLine& a, int n_x);
std::vector<double> synthesize_real(const AnalyticLine& a, int n_x);

/// Direct evaluation of the truncated series at one (possibly complex) point.
Complex evaluate(const AnalyticLine& a, Complex z);

/// Samples fn on the padded grid x_i (n_x = 2(2K+1)) for every psi_j and
/// transforms each row.
FlowFamily sample_family(const std::function<double(double x, double psi)>& fn, int K,
                         int n_psi);
AnalyticLine sample_line(const std::function<double(double x)>& fn, int K);

/// Synthesized values, laid out [j][i] (row per psi_j, n_x columns).
std::vector<std::vector<Complex>> synthesize_family(const FlowFamily& a, int n_x);

/// Multiplication by (ik)^order.
FlowFamily diff_x(const FlowFamily& a, int order);
AnalyticLine diff_x(const AnalyticLine& a, int order);

/// Fourth-order finite differences in psi (order 1 or 2). Interior rows use
/// centred 5-point stencils; rows 0, 1, N-1, N use one-sided stencils of 5
/// (first derivative) or 6 (second derivative) points.
FlowFamily diff_psi(const FlowFamily& a, int order);
void diff_psi_mode(std::span<const Complex> in, std::span<Complex> out, int order);

/// Weighted coefficient sum sqrt(sum_k (1+k^2)^order e^{2 sigma |k|} |a_k|^2).
/// The order may be fractional; sigma may be zero.
double x_norm(const AnalyticLine& a, double sigma, double order);
double x_norm(const AnalyticLine& a, const SpaceParams& p);

/// sqrt(sum_{p+q<=m} sum_k k^{2q} e^{2 sigma |k|} ||D^p a_k||^2_{L2[0,1]}) with
/// 0^0 = 1, L2 norms by composite Simpson. Supports m <= 4.
double y_norm(const FlowFamily& a, double sigma, int m);
double y_norm(const FlowFamily& a, const SpaceParams& p);

/// sqrt(||a(. + i sigma)||^2_{H^m} + ||a(. - i sigma)||^2_{H^m}) computed from
/// grid values on the two boundary lines of the strip. Cross-check for x_norm.
double boundary_norm(const AnalyticLine& a, double sigma, int m);

/// Restriction of the continuation to Im z = t: a_k -> a_k e^{-kt}.
AnalyticLine evaluate_on_strip(const AnalyticLine& a, double t, double sigma);

/// Decay rate of |a_k|: least-squares fit of log|a_n| = c - s n - beta log n
/// over the usable tail (|a_n| > 1e-14, n the wavenumber magnitude). Fewer than
/// 8 usable nonzero-wavenumber coefficients reports an entire function; an
/// all-zero line reports undefined.
StripEstimate strip_estimate(const AnalyticLine& a);

/// The k-indexed slice a_k(psi_j).
AnalyticLine restrict_line(const FlowFamily& a, int j);

/// Embeds a line as a psi-independent family.
FlowFamily broadcast(const AnalyticLine& a, int n_psi);

/// The psi-only function F(psi) as the k = 0 mode of a family of order K.
FlowFamily embed_profile(std::span<const double> values, int K);

/// Translates every line by x0: a_k -> a_k e^{ik x0}.
FlowFamily shift_x(const FlowFamily& a, double x0);
AnalyticLine shift_x(const AnalyticLine& a, double x0);

/// x -> -x: a_k -> a_{-k}.
FlowFamily reflect_x(const FlowFamily& a);
AnalyticLine reflect_x(const AnalyticLine& a);

/// psi -> 1 - psi.
FlowFamily reflect_psi(const FlowFamily& a);

/// Largest coefficient magnitude difference.
double max_abs_diff(const FlowFamily& a, const FlowFamily& b);
double max_abs_diff(const AnalyticLine& a, const AnalyticLine& b);

/// Largest pointwise difference of synthesized values on the padded grid.
double max_abs_grid_diff(const FlowFamily& a, const FlowFamily& b);

}  // namespace flowlines::spectra

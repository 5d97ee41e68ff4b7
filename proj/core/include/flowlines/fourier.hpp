#pragma once

#include <span>
#include <vector>

#include "flowlines/types.hpp"

namespace flowlines::fourier {

/// Coefficients c_k = (1/N) sum_n s_n e^{-ikx_n}, x_n = 2 pi n / N, for
/// k = -K..K, returned in the order -K..K. Requires N >= 2K + 1.
std::vector<Complex> analyze(std::span<const Complex> samples, int K);

/// Values of sum_k c_k e^{ikx_n} on the N-point uniform grid; coeffs holds
/// 2K + 1 entries ordered -K..K. Requires N >= 2K + 1.
std::vector<Complex> synthesize(std::span<const Complex> coeffs, int n);

/// Grid used for nonlinear products: twice the minimal 2K + 1 points.
constexpr int padded_size(int K) noexcept { return 2 * (2 * K + 1); }

/// x_n = 2 pi n / n_x.
std::vector<double> grid(int n_x);

}  // namespace flowlines::fourier

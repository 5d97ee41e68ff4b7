#pragma once

#include <memory>
#include <span>
#include <vector>

#include "flowlines/types.hpp"

/// Dirichlet problem for the Poisson equation on the periodic strip,
///   a_xx + a_psipsi = f,  a(x, 0) = b(x),  a(x, 1) = c(x),
/// solved mode by mode: a_k'' - k^2 a_k = f_k with a_k(0) = b_k, a_k(1) = c_k.
namespace flowlines::laplace {

/// One mode problem on the uniform psi grid.
struct ModeBVP {
    int k = 0;
    std::vector<Complex> f_hat;
    Complex b_hat{};
    Complex c_hat{};
};

/// Green's-function solver for every |k| <= K on an n_psi grid. The
/// quadrature matrices (kernel times weights, one per |k|) are built once.
///
/// Row j of the matrix integrates G_k(psi_j, t) f(t) over [0, psi_j] and
/// [psi_j, 1] separately so the kink of the kernel sits on a node. Each piece
/// uses composite Simpson; an odd interval count closes with a 3/8 block next
/// to the kink, and a single-interval piece uses the 4-point cubic rule with
/// the piece's analytic kernel branch continued past the kink. The layout is
/// symmetric under psi -> 1 - psi.
class PoissonSolver {
public:
    PoissonSolver(int K, int n_psi);

    int order() const noexcept { return K_; }
    int n_psi() const noexcept { return n_psi_; }

    std::vector<Complex> solve_mode(int k, std::span<const Complex> f_hat, Complex b_hat,
                                    Complex c_hat) const;

    FlowFamily solve(const FlowFamily& rhs, const AnalyticLine& b, const AnalyticLine& c) const;

private:
    std::span<const double> matrix(int k) const;

    int K_;
    int n_psi_;
    std::vector<double> green_;   // (K+1) blocks of (n_psi+1)^2
    std::vector<double> lift_lo_;  // (K+1) x (n_psi+1): coefficient of b_k
    std::vector<double> lift_hi_;  // coefficient of c_k
};

/// Exact inverse of apply_laplacian on rows 1..N-1 with Dirichlet rows 0 and
/// N: spectral a_xx plus the fourth-order psi stencils of spectra::diff_psi.
/// This is the discrete counterpart of -Phi' at the parallel flow, so a chord
/// step built on it leaves no stencil mismatch for the iteration to amplify.
/// One dense LU per |k|, inverted once.
class DiscretePoissonSolver {
public:
    DiscretePoissonSolver(int K, int n_psi);

    int order() const noexcept { return K_; }
    int n_psi() const noexcept { return n_psi_; }

    std::vector<Complex> solve_mode(int k, std::span<const Complex> f_hat, Complex b_hat,
                                    Complex c_hat) const;

    FlowFamily solve(const FlowFamily& rhs, const AnalyticLine& b, const AnalyticLine& c) const;

private:
    int K_;
    int n_psi_;
    std::vector<double> inverse_;  // (K+1) blocks of (n_psi-1)^2, interior rows only
    std::vector<double> lift_lo_;  // (K+1) x (n_psi-1)
    std::vector<double> lift_hi_;
};

/// Shared instance for (K, n_psi); the most recent few are kept.
std::shared_ptr<const DiscretePoissonSolver> discrete_solver(int K, int n_psi);

/// k = 0: a_0(psi) = int_0^psi int_0^eta f + (c - b - int_0^1 int_0^eta f) psi + b.
std::vector<Complex> solve_mode0(std::span<const Complex> f_hat, Complex b_hat, Complex c_hat);

/// k != 0: homogeneous sinh solution plus the Green's-function integral.
std::vector<Complex> solve_mode(int k, std::span<const Complex> f_hat, Complex b_hat,
                                Complex c_hat);

std::vector<Complex> solve(const ModeBVP& problem);

FlowFamily solve_poisson(const FlowFamily& rhs, const AnalyticLine& b, const AnalyticLine& c);

/// a_xx spectrally plus a_psipsi by fourth-order finite differences.
FlowFamily apply_laplacian(const FlowFamily& a);

/// sinh(k psi) / sinh(k) in exponent-normalized form (even in k; psi for k=0).
double sinh_ratio(int k, double psi);

/// G_k(psi, t) in exponent-normalized form; G_0(psi, t) = min(psi,t) (max(psi,t) - 1).
double green(int k, double psi, double t);

}  // namespace flowlines::laplace

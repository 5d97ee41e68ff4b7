#include "flowlines/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

#include <Eigen/Dense>

#include "flowlines/errors.hpp"
#include "flowlines/numerics.hpp"
#include "flowlines/spectra.hpp"

namespace flowlines::laplace {
namespace {

// 1 - e^{-x} without cancellation for small x.
double one_minus_exp(double x) { return -std::expm1(-x); }

// Kernel branch valid for t <= psi, continued analytically beyond psi.
double lower_branch(int k, double psi, double t) {
    if (k == 0) return t * (psi - 1.0);
    const double q = std::abs(static_cast<double>(k));
    return -std::exp(-q * (psi - t)) * one_minus_exp(2.0 * q * t) * one_minus_exp(2.0 * q * (1.0 - psi)) /
           (2.0 * q * one_minus_exp(2.0 * q));
}

// Kernel branch valid for t >= psi.
double upper_branch(int k, double psi, double t) {
    if (k == 0) return psi * (t - 1.0);
    const double q = std::abs(static_cast<double>(k));
    return -std::exp(-q * (t - psi)) * one_minus_exp(2.0 * q * psi) * one_minus_exp(2.0 * q * (1.0 - t)) /
           (2.0 * q * one_minus_exp(2.0 * q));
}

// 4-point rule for a single interval [t0, t1] from nodes t0..t3.
constexpr double kEdgeRule[4] = {9.0 / 24.0, 19.0 / 24.0, -5.0 / 24.0, 1.0 / 24.0};

// Fills the (n+1)^2 quadrature matrix of G_k: row j maps f samples to
// int_0^1 G_k(psi_j, t) f(t) dt. Rows 0 and n stay zero.
void build_green_matrix(int k, int n, std::span<double> m) {
    const double h = 1.0 / n;
    const auto node = [n](int i) { return static_cast<double>(i) / n; };
    const auto at = [&](int j, int i) -> double& {
        return m[static_cast<std::size_t>(j) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(i)];
    };
    std::fill(m.begin(), m.end(), 0.0);

    for (int j = 1; j < n; ++j) {
        const double psi = node(j);
        // [0, psi_j]
        if (j == 1) {
            for (int i = 0; i < 4; ++i) at(j, i) += h * kEdgeRule[i] * lower_branch(k, psi, node(i));
        } else {
            const auto w = numerics::quadrature_weights(j, h, true);
            for (int i = 0; i <= j; ++i) at(j, i) += w[static_cast<std::size_t>(i)] * lower_branch(k, psi, node(i));
        }
        // [psi_j, 1]
        const int up = n - j;
        if (up == 1) {
            for (int i = 0; i < 4; ++i) at(j, n - i) += h * kEdgeRule[i] * upper_branch(k, psi, node(n - i));
        } else {
            const auto w = numerics::quadrature_weights(up, h, false);
            for (int i = 0; i <= up; ++i) at(j, j + i) += w[static_cast<std::size_t>(i)] * upper_branch(k, psi, node(j + i));
        }
    }
}

void require_grid(int n_psi) {
    if (n_psi < 3) throw ResolutionError("Poisson solver needs n_psi >= 3, got " + std::to_string(n_psi));
}

std::vector<Complex> apply_mode(std::span<const double> green, std::span<const double> lift_lo,
                                std::span<const double> lift_hi, std::span<const Complex> f_hat,
                                Complex b_hat, Complex c_hat) {
    const auto rows = f_hat.size();
    const int n = static_cast<int>(rows) - 1;
    std::vector<Complex> out(rows);
    for (std::size_t j = 1; j + 1 < rows; ++j) {
        Complex s = b_hat * lift_lo[j] + c_hat * lift_hi[j];
        const double* row = green.data() + j * rows;
        for (std::size_t i = 0; i < rows; ++i) s += row[i] * f_hat[i];
        out[j] = s;
    }
    out[0] = b_hat;
    out[static_cast<std::size_t>(n)] = c_hat;
    return out;
}

}  // namespace

double sinh_ratio(int k, double psi) {
    if (k == 0) return psi;
    const double q = std::abs(static_cast<double>(k));
    return std::exp(q * (psi - 1.0)) * one_minus_exp(2.0 * q * psi) / one_minus_exp(2.0 * q);
}

double green(int k, double psi, double t) {
    return t <= psi ? lower_branch(k, psi, t) : upper_branch(k, psi, t);
}

PoissonSolver::PoissonSolver(int K, int n_psi) : K_(K), n_psi_(n_psi) {
    require_grid(n_psi);
    const auto rows = static_cast<std::size_t>(n_psi + 1);
    green_.resize(static_cast<std::size_t>(K + 1) * rows * rows);
    lift_lo_.resize(static_cast<std::size_t>(K + 1) * rows);
    lift_hi_.resize(lift_lo_.size());
    for (int k = 0; k <= K; ++k) {
        build_green_matrix(k, n_psi, std::span(green_).subspan(static_cast<std::size_t>(k) * rows * rows, rows * rows));
        for (int j = 0; j <= n_psi; ++j) {
            const double psi = static_cast<double>(j) / n_psi;
            lift_lo_[static_cast<std::size_t>(k) * rows + static_cast<std::size_t>(j)] = sinh_ratio(k, 1.0 - psi);
            lift_hi_[static_cast<std::size_t>(k) * rows + static_cast<std::size_t>(j)] = sinh_ratio(k, psi);
        }
    }
}

std::span<const double> PoissonSolver::matrix(int k) const {
    const auto rows = static_cast<std::size_t>(n_psi_ + 1);
    return std::span(green_).subspan(static_cast<std::size_t>(std::abs(k)) * rows * rows, rows * rows);
}

std::vector<Complex> PoissonSolver::solve_mode(int k, std::span<const Complex> f_hat, Complex b_hat,
                                               Complex c_hat) const {
    if (std::abs(k) > K_) throw ResolutionError("mode " + std::to_string(k) + " beyond solver order");
    if (f_hat.size() != static_cast<std::size_t>(n_psi_ + 1)) throw ResolutionError("mode grid mismatch");
    const auto rows = static_cast<std::size_t>(n_psi_ + 1);
    const auto off = static_cast<std::size_t>(std::abs(k)) * rows;
    return apply_mode(matrix(k), std::span(lift_lo_).subspan(off, rows), std::span(lift_hi_).subspan(off, rows),
                      f_hat, b_hat, c_hat);
}

FlowFamily PoissonSolver::solve(const FlowFamily& rhs, const AnalyticLine& b, const AnalyticLine& c) const {
    if (rhs.order() != K_ || rhs.n_psi() != n_psi_ || b.order() != K_ || c.order() != K_) {
        throw ResolutionError("Poisson data resolution (K = " + std::to_string(rhs.order()) +
                              ", n_psi = " + std::to_string(rhs.n_psi()) + ") does not match the solver (K = " +
                              std::to_string(K_) + ", n_psi = " + std::to_string(n_psi_) + ")");
    }
    FlowFamily out(K_, n_psi_);
    for (int k = -K_; k <= K_; ++k) {
        const auto mode = solve_mode(k, rhs.mode(k), b[k], c[k]);
        std::copy(mode.begin(), mode.end(), out.mode(k).begin());
    }
    return out;
}

DiscretePoissonSolver::DiscretePoissonSolver(int K, int n_psi) : K_(K), n_psi_(n_psi) {
    if (n_psi < 5) throw ResolutionError("discrete Poisson solver needs n_psi >= 5, got " + std::to_string(n_psi));
    const int n = n_psi;
    const int m = n - 1;

    // Columns of the psi second-derivative matrix, read off unit vectors.
    Eigen::MatrixXd d2(n + 1, n + 1);
    std::vector<Complex> unit(static_cast<std::size_t>(n + 1)), col(static_cast<std::size_t>(n + 1));
    for (int c = 0; c <= n; ++c) {
        std::fill(unit.begin(), unit.end(), Complex{});
        unit[static_cast<std::size_t>(c)] = 1.0;
        spectra::diff_psi_mode(unit, col, 2);
        for (int r = 0; r <= n; ++r) d2(r, c) = col[static_cast<std::size_t>(r)].real();
    }

    const auto block = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    inverse_.resize(static_cast<std::size_t>(K + 1) * block);
    lift_lo_.resize(static_cast<std::size_t>(K + 1) * static_cast<std::size_t>(m));
    lift_hi_.resize(lift_lo_.size());
    for (int k = 0; k <= K; ++k) {
        Eigen::MatrixXd op = d2.block(1, 1, m, m);
        op.diagonal().array() -= static_cast<double>(k) * k;
        const Eigen::MatrixXd inv = op.partialPivLu().inverse();
        const Eigen::VectorXd lo = -inv * d2.block(1, 0, m, 1);
        const Eigen::VectorXd hi = -inv * d2.block(1, n, m, 1);
        // Row-major copy so each output row is contiguous.
        double* dst = inverse_.data() + static_cast<std::size_t>(k) * block;
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) dst[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)] = inv(r, c);
        for (int r = 0; r < m; ++r) {
            lift_lo_[static_cast<std::size_t>(k) * static_cast<std::size_t>(m) + static_cast<std::size_t>(r)] = lo(r);
            lift_hi_[static_cast<std::size_t>(k) * static_cast<std::size_t>(m) + static_cast<std::size_t>(r)] = hi(r);
        }
    }
}

std::vector<Complex> DiscretePoissonSolver::solve_mode(int k, std::span<const Complex> f_hat, Complex b_hat,
                                                       Complex c_hat) const {
    if (std::abs(k) > K_) throw ResolutionError("mode " + std::to_string(k) + " beyond solver order");
    if (f_hat.size() != static_cast<std::size_t>(n_psi_ + 1)) throw ResolutionError("mode grid mismatch");
    const auto m = static_cast<std::size_t>(n_psi_ - 1);
    const auto q = static_cast<std::size_t>(std::abs(k));
    const double* inv = inverse_.data() + q * m * m;
    const double* lo = lift_lo_.data() + q * m;
    const double* hi = lift_hi_.data() + q * m;
    std::vector<Complex> out(f_hat.size());
    for (std::size_t r = 0; r < m; ++r) {
        Complex s = b_hat * lo[r] + c_hat * hi[r];
        const double* row = inv + r * m;
        for (std::size_t c = 0; c < m; ++c) s += row[c] * f_hat[c + 1];
        out[r + 1] = s;
    }
    out.front() = b_hat;
    out.back() = c_hat;
    return out;
}

FlowFamily DiscretePoissonSolver::solve(const FlowFamily& rhs, const AnalyticLine& b, const AnalyticLine& c) const {
    if (rhs.order() != K_ || rhs.n_psi() != n_psi_ || b.order() != K_ || c.order() != K_) {
        throw ResolutionError("Poisson data resolution (K = " + std::to_string(rhs.order()) +
                              ", n_psi = " + std::to_string(rhs.n_psi()) + ") does not match the solver (K = " +
                              std::to_string(K_) + ", n_psi = " + std::to_string(n_psi_) + ")");
    }
    FlowFamily out(K_, n_psi_);
    for (int k = -K_; k <= K_; ++k) {
        const auto mode = solve_mode(k, rhs.mode(k), b[k], c[k]);
        std::copy(mode.begin(), mode.end(), out.mode(k).begin());
    }
    return out;
}

std::shared_ptr<const DiscretePoissonSolver> discrete_solver(int K, int n_psi) {
    static std::mutex mutex;
    static std::vector<std::shared_ptr<const DiscretePoissonSolver>> cache;
    constexpr std::size_t kKeep = 4;
    std::lock_guard lock(mutex);
    for (auto it = cache.begin(); it != cache.end(); ++it) {
        if ((*it)->order() == K && (*it)->n_psi() == n_psi) {
            auto hit = *it;
            cache.erase(it);
            cache.push_back(hit);
            return hit;
        }
    }
    auto made = std::make_shared<const DiscretePoissonSolver>(K, n_psi);
    cache.push_back(made);
    if (cache.size() > kKeep) cache.erase(cache.begin());
    return made;
}

std::vector<Complex> solve_mode0(std::span<const Complex> f_hat, Complex b_hat, Complex c_hat) {
    const int n = static_cast<int>(f_hat.size()) - 1;
    require_grid(n);
    const double h = 1.0 / n;

    // Running integrals over [0, t_i] by composite Simpson on i intervals.
    auto cumulative = [&](std::span<const Complex> g) {
        std::vector<Complex> out(g.size());
        for (int i = 1; i <= n; ++i) {
            Complex s{};
            if (i == 1) {
                for (int l = 0; l < 4; ++l) s += h * kEdgeRule[l] * g[static_cast<std::size_t>(l)];
            } else {
                const auto w = numerics::quadrature_weights(i, h);
                for (int l = 0; l <= i; ++l) s += w[static_cast<std::size_t>(l)] * g[static_cast<std::size_t>(l)];
            }
            out[static_cast<std::size_t>(i)] = s;
        }
        return out;
    };

    const auto inner = cumulative(f_hat);
    const auto outer = cumulative(inner);
    const Complex slope = c_hat - b_hat - outer[static_cast<std::size_t>(n)];

    std::vector<Complex> a(f_hat.size());
    for (int j = 0; j <= n; ++j) {
        const double psi = static_cast<double>(j) * h;
        a[static_cast<std::size_t>(j)] = outer[static_cast<std::size_t>(j)] + slope * psi + b_hat;
    }
    a[0] = b_hat;
    a[static_cast<std::size_t>(n)] = c_hat;
    return a;
}

std::vector<Complex> solve_mode(int k, std::span<const Complex> f_hat, Complex b_hat, Complex c_hat) {
    if (k == 0) throw DomainError("solve_mode handles k != 0; use solve_mode0");
    const int n = static_cast<int>(f_hat.size()) - 1;
    require_grid(n);
    const auto rows = static_cast<std::size_t>(n + 1);
    std::vector<double> g(rows * rows), lo(rows), hi(rows);
    build_green_matrix(k, n, g);
    for (int j = 0; j <= n; ++j) {
        const double psi = static_cast<double>(j) / n;
        lo[static_cast<std::size_t>(j)] = sinh_ratio(k, 1.0 - psi);
        hi[static_cast<std::size_t>(j)] = sinh_ratio(k, psi);
    }
    return apply_mode(g, lo, hi, f_hat, b_hat, c_hat);
}

std::vector<Complex> solve(const ModeBVP& problem) {
    return problem.k == 0 ? solve_mode0(problem.f_hat, problem.b_hat, problem.c_hat)
                          : solve_mode(problem.k, problem.f_hat, problem.b_hat, problem.c_hat);
}

FlowFamily solve_poisson(const FlowFamily& rhs, const AnalyticLine& b, const AnalyticLine& c) {
    return PoissonSolver(rhs.order(), rhs.n_psi()).solve(rhs, b, c);
}

FlowFamily apply_laplacian(const FlowFamily& a) {
    if (a.n_psi() < 5) throw ResolutionError("Laplacian needs n_psi >= 5");
    return spectra::diff_x(a, 2) + spectra::diff_psi(a, 2);
}

}  // namespace flowlines::laplace

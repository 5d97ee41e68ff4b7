#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace flowlines {

using Complex = std::complex<double>;

/// Strip half-width sigma and Sobolev order m of the analytic-line and
/// partially-analytic spaces.
class SpaceParams {
public:
    SpaceParams(double sigma, int m);

    double sigma() const noexcept { return sigma_; }
    int m() const noexcept { return m_; }

private:
    double sigma_;
    int m_;
};

/// A function on the circle stored as Fourier coefficients a_k, k = -K..K.
class AnalyticLine {
public:
    AnalyticLine() = default;
    explicit AnalyticLine(int K);
    AnalyticLine(int K, std::vector<Complex> coeffs);

    static AnalyticLine constant(Complex value, int K);

    int order() const noexcept { return K_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Complex operator[](int k) const { return coeffs_[static_cast<std::size_t>(k + K_)]; }
    Complex& operator[](int k) { return coeffs_[static_cast<std::size_t>(k + K_)]; }

    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    /// Zero-pads or truncates to order K.
    AnalyticLine resized(int K) const;

    /// True when a_{-k} = conj(a_k) within tol for all k.
    bool is_real(double tol = 1e-12) const;

    AnalyticLine& operator+=(const AnalyticLine& other);
    AnalyticLine& operator-=(const AnalyticLine& other);
    AnalyticLine& operator*=(Complex s);

private:
    int K_ = 0;
    std::vector<Complex> coeffs_{Complex{}};
};

AnalyticLine operator+(AnalyticLine a, const AnalyticLine& b);
AnalyticLine operator-(AnalyticLine a, const AnalyticLine& b);
AnalyticLine operator*(Complex s, AnalyticLine a);

/// The family a(x, psi) = sum_k a_k(psi) e^{ikx}, sampled on the uniform grid
/// psi_j = j / n_psi, j = 0..n_psi. Storage is row-major in (k, j), so each
/// mode k is a contiguous run of n_psi + 1 values.
class FlowFamily {
public:
    FlowFamily() = default;
    FlowFamily(int K, int n_psi);
    FlowFamily(int K, int n_psi, std::vector<Complex> coeffs);

    int order() const noexcept { return K_; }
    int n_psi() const noexcept { return n_psi_; }
    int rows() const noexcept { return n_psi_ + 1; }
    int modes() const noexcept { return 2 * K_ + 1; }
    double psi(int j) const noexcept { return static_cast<double>(j) / n_psi_; }
    double h() const noexcept { return 1.0 / n_psi_; }

    Complex operator()(int k, int j) const { return coeffs_[index(k, j)]; }
    Complex& operator()(int k, int j) { return coeffs_[index(k, j)]; }

    std::span<const Complex> mode(int k) const;
    std::span<Complex> mode(int k);

    std::span<const Complex> data() const noexcept { return coeffs_; }
    std::span<Complex> data() noexcept { return coeffs_; }

    bool same_shape(const FlowFamily& other) const noexcept {
        return K_ == other.K_ && n_psi_ == other.n_psi_;
    }

    FlowFamily& operator+=(const FlowFamily& other);
    FlowFamily& operator-=(const FlowFamily& other);
    FlowFamily& operator*=(Complex s);

private:
    std::size_t index(int k, int j) const noexcept {
        return static_cast<std::size_t>(k + K_) * static_cast<std::size_t>(n_psi_ + 1) +
               static_cast<std::size_t>(j);
    }

    int K_ = 0;
    int n_psi_ = 0;
    std::vector<Complex> coeffs_;
};

FlowFamily operator+(FlowFamily a, const FlowFamily& b);
FlowFamily operator-(FlowFamily a, const FlowFamily& b);
FlowFamily operator*(Complex s, FlowFamily a);

/// Vorticity F(psi) sampled on the psi grid of a companion FlowFamily.
struct VorticityProfile {
    std::vector<double> values;
    int m = 2;

    int n_psi() const noexcept { return static_cast<int>(values.size()) - 1; }

    /// 4-point Lagrange interpolation on the uniform grid.
    double operator()(double psi) const;

    static VorticityProfile zero(int n_psi, int m = 2);
};

/// Estimated half-width of the analyticity strip from coefficient decay.
struct StripEstimate {
    enum class Kind { finite, entire, undefined };

    Kind kind = Kind::undefined;
    double value = std::numeric_limits<double>::quiet_NaN();
    int modes_used = 0;

    bool finite() const noexcept { return kind == Kind::finite; }
};

}  // namespace flowlines

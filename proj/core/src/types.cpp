#include "flowlines/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowlines/errors.hpp"
#include "flowlines/numerics.hpp"

namespace flowlines {

SpaceParams::SpaceParams(double sigma, int m) : sigma_(sigma), m_(m) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("strip half-width sigma must be positive, got " + std::to_string(sigma));
    }
    if (m < 0) throw DomainError("Sobolev order m must be nonnegative, got " + std::to_string(m));
}

AnalyticLine::AnalyticLine(int K) : K_(K), coeffs_(static_cast<std::size_t>(2 * K + 1)) {
    if (K < 0) throw DomainError("truncation order must be nonnegative");
}

AnalyticLine::AnalyticLine(int K, std::vector<Complex> coeffs) : K_(K), coeffs_(std::move(coeffs)) {
    if (K < 0 || coeffs_.size() != static_cast<std::size_t>(2 * K + 1)) {
        throw ResolutionError("line of order " + std::to_string(K) + " needs " +
                              std::to_string(2 * K + 1) + " coefficients, got " +
                              std::to_string(coeffs_.size()));
    }
}

AnalyticLine AnalyticLine::constant(Complex value, int K) {
    AnalyticLine a(K);
    a[0] = value;
    return a;
}

AnalyticLine AnalyticLine::resized(int K) const {
    AnalyticLine out(K);
    const int lim = std::min(K, K_);
    for (int k = -lim; k <= lim; ++k) out[k] = (*this)[k];
    return out;
}

bool AnalyticLine::is_real(double tol) const {
    for (int k = 0; k <= K_; ++k) {
        if (std::abs((*this)[-k] - std::conj((*this)[k])) > tol) return false;
    }
    return true;
}

AnalyticLine& AnalyticLine::operator+=(const AnalyticLine& other) {
    if (other.K_ != K_) throw ResolutionError("line orders differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

AnalyticLine& AnalyticLine::operator-=(const AnalyticLine& other) {
    if (other.K_ != K_) throw ResolutionError("line orders differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

AnalyticLine& AnalyticLine::operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

AnalyticLine operator+(AnalyticLine a, const AnalyticLine& b) { return a += b; }
AnalyticLine operator-(AnalyticLine a, const AnalyticLine& b) { return a -= b; }
AnalyticLine operator*(Complex s, AnalyticLine a) { return a *= s; }

FlowFamily::FlowFamily(int K, int n_psi)
    : K_(K), n_psi_(n_psi),
      coeffs_(static_cast<std::size_t>(2 * K + 1) * static_cast<std::size_t>(n_psi + 1)) {
    if (K < 0 || n_psi < 1) {
        throw ResolutionError("family needs K >= 0 and n_psi >= 1");
    }
}

FlowFamily::FlowFamily(int K, int n_psi, std::vector<Complex> coeffs)
    : K_(K), n_psi_(n_psi), coeffs_(std::move(coeffs)) {
    if (K < 0 || n_psi < 1 ||
        coeffs_.size() != static_cast<std::size_t>(2 * K + 1) * static_cast<std::size_t>(n_psi + 1)) {
        throw ResolutionError("coefficient array does not match K = " + std::to_string(K) +
                              ", n_psi = " + std::to_string(n_psi));
    }
}

std::span<const Complex> FlowFamily::mode(int k) const {
    return std::span<const Complex>(coeffs_).subspan(index(k, 0), static_cast<std::size_t>(rows()));
}

std::span<Complex> FlowFamily::mode(int k) {
    return std::span<Complex>(coeffs_).subspan(index(k, 0), static_cast<std::size_t>(rows()));
}

FlowFamily& FlowFamily::operator+=(const FlowFamily& other) {
    if (!same_shape(other)) throw ResolutionError("family resolutions differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

FlowFamily& FlowFamily::operator-=(const FlowFamily& other) {
    if (!same_shape(other)) throw ResolutionError("family resolutions differ");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

FlowFamily& FlowFamily::operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

FlowFamily operator+(FlowFamily a, const FlowFamily& b) { return a += b; }
FlowFamily operator-(FlowFamily a, const FlowFamily& b) { return a -= b; }
FlowFamily operator*(Complex s, FlowFamily a) { return a *= s; }

double VorticityProfile::operator()(double psi) const {
    if (values.size() == 1) return values.front();
    if (values.size() < 4) {
        // Too few samples for a cubic: linear interpolation.
        const double h = 1.0 / n_psi();
        const int j = std::clamp(static_cast<int>(psi / h), 0, n_psi() - 1);
        const double u = psi / h - j;
        return (1.0 - u) * values[static_cast<std::size_t>(j)] + u * values[static_cast<std::size_t>(j + 1)];
    }
    return numerics::interpolate_cubic(values, 1.0 / n_psi(), psi);
}

VorticityProfile VorticityProfile::zero(int n_psi, int m) {
    return VorticityProfile{std::vector<double>(static_cast<std::size_t>(n_psi + 1), 0.0), m};
}

}  // namespace flowlines

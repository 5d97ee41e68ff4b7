#include "flowlines/presets.hpp"

#include <cmath>
#include <string>

#include "flowlines/errors.hpp"

namespace flowlines::presets {
namespace {

newton::ChannelProblem base(Resolution r, SpaceParams space) {
    newton::ChannelProblem p;
    p.K = r.K;
    p.n_psi = r.n_psi;
    p.space = space;
    p.lower = AnalyticLine::constant(0.0, r.K);
    p.upper = AnalyticLine::constant(1.0, r.K);
    p.vorticity = VorticityProfile::zero(r.n_psi, space.m());
    return p;
}

// psi* is increasing in y on [0, 2] and crosses 1 there while eps < 0.3.
constexpr double kHarmonicEpsMax = 0.3;

void check_harmonic_eps(double eps) {
    if (!(std::abs(eps) < kHarmonicEpsMax)) {
        throw DomainError("harmonic preset needs |eps| < 0.3, got " + std::to_string(eps));
    }
}

}  // namespace

newton::ChannelProblem parallel(Resolution r, SpaceParams space) { return base(r, space); }

double shear_vorticity(double eps, double psi) {
    const double s = 1.0 + 2.0 * eps * psi;
    return -2.0 * eps / (s * s * s);
}

newton::ChannelProblem shear(double eps, Resolution r, SpaceParams space) {
    if (!(1.0 + 2.0 * eps > 0.0)) throw DomainError("shear preset needs 1 + 2 eps > 0");
    auto p = base(r, space);
    p.upper = AnalyticLine::constant(1.0 + eps, r.K);
    for (int j = 0; j <= r.n_psi; ++j) {
        p.vorticity.values[static_cast<std::size_t>(j)] = shear_vorticity(eps, static_cast<double>(j) / r.n_psi);
    }
    return p;
}

FlowFamily shear_solution(double eps, Resolution r) {
    FlowFamily a(r.K, r.n_psi);
    for (int j = 0; j <= r.n_psi; ++j) {
        const double psi = a.psi(j);
        a(0, j) = psi + eps * psi * psi;
    }
    return a;
}

vonmises::StreamFunction harmonic_streamfunction(double eps) {
    const double s1 = std::sinh(1.0);
    return [eps, s1](double x, double y) { return y + eps * std::sin(x) * std::sinh(y) / s1; };
}

newton::ChannelProblem harmonic(double eps, Resolution r, SpaceParams space) {
    check_harmonic_eps(eps);
    auto p = base(r, space);
    p.upper = vonmises::level_line(harmonic_streamfunction(eps), 1.0, 0.0, 2.0, r.K);
    return p;
}

FlowFamily harmonic_oracle(double eps, Resolution r) {
    check_harmonic_eps(eps);
    const auto psi_star = harmonic_streamfunction(eps);
    return vonmises::streamfunction_to_flowlines(psi_star, AnalyticLine::constant(0.0, r.K),
                                                 vonmises::level_line(psi_star, 1.0, 0.0, 2.0, r.K), r.n_psi);
}

}  // namespace flowlines::presets

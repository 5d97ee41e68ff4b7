#pragma once

#include "flowlines/newton.hpp"
#include "flowlines/vonmises.hpp"

/// Channel problems with known solutions.
namespace flowlines::presets {

struct Resolution {
    int K = 64;
    int n_psi = 128;
};

/// f = 0, g = 1, F = 0; solution a = psi.
newton::ChannelProblem parallel(Resolution r = {}, SpaceParams space = {0.1, 2});

/// f = 0, g = 1 + eps, F(psi) = -2 eps / (1 + 2 eps psi)^3; solution
/// a = psi + eps psi^2.
newton::ChannelProblem shear(double eps, Resolution r = {}, SpaceParams space = {0.1, 2});
double shear_vorticity(double eps, double psi);
FlowFamily shear_solution(double eps, Resolution r = {});

/// Stream function psi*(x, y) = y + eps sin(x) sinh(y) / sinh(1).
vonmises::StreamFunction harmonic_streamfunction(double eps);

/// f = 0, g the level line psi* = 1, F = 0.
newton::ChannelProblem harmonic(double eps, Resolution r = {}, SpaceParams space = {0.1, 2});

/// Flow lines of psi* found by root finding.
FlowFamily harmonic_oracle(double eps, Resolution r = {});

}  // namespace flowlines::presets

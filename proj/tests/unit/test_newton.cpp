#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "flowlines/errors.hpp"
#include "flowlines/newton.hpp"
#include "flowlines/presets.hpp"
#include "flowlines/spectra.hpp"
#include "oracles.hpp"

using namespace flowlines;

namespace {

constexpr presets::Resolution kSmall{32, 64};

double max_ratio_after(const newton::SolveReport& r, std::size_t from) {
    double worst = 0.0;
    const auto& h = r.residual_history;
    for (std::size_t i = from; i + 1 < h.size(); ++i) {
        if (h[i + 1].combined() < 1e-9) break;
        worst = std::max(worst, h[i + 1].combined() / h[i].combined());
    }
    return worst;
}

FlowFamily psi_family(int K, int n) {
    return spectra::sample_family([](double, double s) { return s; }, K, n);
}

}  // namespace

TEST(EvaluateT, VanishesOnExactSolutions) {
    const auto par = presets::parallel(kSmall);
    const auto t0 = newton::evaluate_T(par, psi_family(32, 64));
    EXPECT_LE(newton::residual_norms(par, t0).combined(), 1e-10);

    const auto sh = presets::shear(0.05, kSmall);
    const auto t1 = newton::evaluate_T(sh, presets::shear_solution(0.05, kSmall));
    EXPECT_LE(spectra::max_abs_diff(t1.interior, FlowFamily(32, 64)), 1e-10);
    EXPECT_LE(spectra::max_abs_diff(t1.lower, AnalyticLine(32)), 1e-15);
    EXPECT_LE(spectra::max_abs_diff(t1.upper, AnalyticLine(32)), 1e-14);
}

TEST(EvaluateT, ComponentsOnPerturbedFamily) {
    const auto p = presets::shear(0.05, kSmall);
    const auto a = spectra::sample_family([](double x, double s) { return s + 0.01 * std::cos(x) + 0.02 * s * s; }, 32, 64);
    const auto t = newton::evaluate_T(p, a);
    const auto expect = vonmises::phi(a) - spectra::embed_profile(p.vorticity.values, 32);
    EXPECT_LE(spectra::max_abs_diff(t.interior, expect), 1e-12);
    EXPECT_NEAR(t.lower[1].real(), 0.005, 1e-15);
    EXPECT_NEAR(t.upper[0].real(), 0.02 - 0.05, 1e-15);
}

TEST(ChordStep, ParallelFlowIsFixed) {
    const auto p = presets::parallel(kSmall);
    const auto a = psi_family(32, 64);
    EXPECT_LE(spectra::max_abs_diff(newton::chord_step(p, a), a), 1e-13);
}

TEST(ChordStep, ConstantVorticity) {
    auto p = presets::parallel(kSmall);
    const double c = 0.01;
    p.vorticity.values.assign(65, c);
    const auto a = psi_family(32, 64);
    const auto d = newton::chord_step(p, a) - a;
    for (int j = 0; j <= 64; ++j) {
        const double s = j / 64.0;
        EXPECT_NEAR(d(0, j).real(), c * (s - s * s) / 2.0, 1e-12);
    }
}

TEST(ChordStep, NearlyLinearProblemConvergesInThreeSteps) {
    auto p = presets::parallel();
    p.upper[1] = p.upper[-1] = 0.0005;
    const auto r = newton::solve_stationary(p);
    ASSERT_GE(r.report.residual_history.size(), 4u);
    EXPECT_LE(r.report.residual_history[3].combined(), 1e-10);
    EXPECT_TRUE(r.report.converged);
}

TEST(Solve, ParallelFlow) {
    const auto r = newton::solve_stationary(presets::parallel());
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1);
    EXPECT_LE(r.report.residual_history.back().combined(), 1e-10);
    EXPECT_LE(spectra::max_abs_diff(r.solution, psi_family(64, 128)), 1e-12);
}

TEST(Solve, ShearMatchesClosedForm) {
    const auto r = newton::solve_stationary(presets::shear(0.05));
    ASSERT_TRUE(r.report.converged);
    EXPECT_LE(spectra::max_abs_grid_diff(r.solution, presets::shear_solution(0.05)), 1e-8);
    EXPECT_TRUE(r.report.within_radius);
    EXPECT_LE(max_ratio_after(r.report, 1), 0.5);
}

TEST(Solve, HarmonicMatchesRootFindingOracle) {
    const auto r = newton::solve_stationary(presets::harmonic(0.05));
    ASSERT_TRUE(r.report.converged);
    EXPECT_LE(spectra::max_abs_grid_diff(r.solution, presets::harmonic_oracle(0.05)), 1e-6);
    EXPECT_LE(max_ratio_after(r.report, 1), 0.5);
}

TEST(Solve, ExactSolutionIsAFixedPoint) {
    const auto exact = presets::shear_solution(0.05);
    const auto r = newton::solve_stationary(presets::shear(0.05), exact);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1);
    EXPECT_LE(r.report.step_history.front(), 1e-10);
    EXPECT_LE(spectra::max_abs_diff(r.solution, exact), 1e-12);
}

TEST(Solve, ContractionWeakensWithAmplitude) {
    double prev = 0.0;
    for (double eps : {0.02, 0.05, 0.1}) {
        const auto r = newton::solve_stationary(presets::shear(eps, kSmall));
        ASSERT_TRUE(r.report.converged) << eps;
        const double ratio = max_ratio_after(r.report, 1);
        EXPECT_GT(ratio, prev) << eps;
        prev = ratio;
    }
}

TEST(Solve, IterationCapReportsNonConvergence) {
    auto p = presets::harmonic(0.05, kSmall);
    p.options.max_iter = 3;
    const auto r = newton::solve_stationary(p);
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 3);
    p.options.max_iter = 0;
    EXPECT_FALSE(newton::solve_stationary(p).report.converged);
}

TEST(Solve, EllipticityBreakdownCarriesIterate) {
    const auto p = presets::parallel(kSmall);
    const auto bad = spectra::sample_family([](double, double s) { return s - 0.475 * s * s; }, 32, 64);
    try {
        newton::solve_stationary(p, bad);
        FAIL() << "expected EllipticityError";
    } catch (const EllipticityError& e) {
        EXPECT_NEAR(e.min_a_psi(), 0.05, 1e-10);
        ASSERT_TRUE(e.last_iterate());
        EXPECT_EQ(spectra::max_abs_diff(*e.last_iterate(), bad), 0.0);
    }
}

TEST(Solve, TranslationEquivariance) {
    const auto p = presets::harmonic(0.05, kSmall);
    auto q = p;
    q.lower = spectra::shift_x(p.lower, 0.9);
    q.upper = spectra::shift_x(p.upper, 0.9);
    const auto a = newton::solve_stationary(p).solution;
    const auto b = newton::solve_stationary(q).solution;
    EXPECT_LE(spectra::max_abs_diff(b, spectra::shift_x(a, 0.9)), 1e-10);
}

TEST(Solve, ReflectionEquivariance) {
    const auto p = presets::harmonic(0.05, kSmall);
    auto q = p;
    q.lower = spectra::reflect_x(p.lower);
    q.upper = spectra::reflect_x(p.upper);
    const auto a = newton::solve_stationary(p).solution;
    const auto b = newton::solve_stationary(q).solution;
    EXPECT_LE(spectra::max_abs_diff(b, spectra::reflect_x(a)), 1e-10);
}

TEST(Solve, StripWidthPreserved) {
    const auto p = presets::harmonic(0.05);
    const auto r = newton::solve_stationary(p);
    ASSERT_TRUE(r.report.converged);
    const auto g = spectra::strip_estimate(p.upper);
    ASSERT_TRUE(g.finite());
    for (int j = 1; j <= 128; ++j) {
        const auto& e = r.report.strip_estimates[j];
        ASSERT_TRUE(e.finite()) << j;
        EXPECT_GE(e.value, 0.9 * g.value) << j;
    }
    ASSERT_TRUE(r.report.strip_min.has_value());
}

TEST(Continuation, SingleStageEqualsDirectSolve) {
    const auto p = presets::shear(0.05, kSmall);
    const auto a = newton::solve_stationary(p);
    const auto b = newton::continuation_solve(p, 1);
    EXPECT_EQ(spectra::max_abs_diff(a.solution, b.solution), 0.0);
    EXPECT_EQ(a.report.iterations, b.report.iterations);
}

TEST(Continuation, LargeShearEveryStageConverges) {
    auto p = presets::shear(0.3);
    p.options.max_iter = 120;
    const auto r = newton::continuation_solve(p, 6);
    ASSERT_EQ(r.report.stages.size(), 6u);
    for (std::size_t i = 0; i < r.report.stages.size(); ++i) {
        EXPECT_TRUE(r.report.stages[i].converged) << "stage " << i;
    }
    EXPECT_TRUE(r.report.converged);
    EXPECT_LE(spectra::max_abs_grid_diff(r.solution, presets::shear_solution(0.3)), 1e-7);
    EXPECT_DOUBLE_EQ(r.report.last_successful_t.value(), 1.0);
}

TEST(Continuation, FailingStageIsReported) {
    auto p = presets::shear(0.3, kSmall);
    p.options.max_iter = 4;
    const auto r = newton::continuation_solve(p, 3);
    EXPECT_FALSE(r.report.converged);
    EXPECT_FALSE(r.report.failure.empty());
}

TEST(Radius, LargeDataWarns) {
    const auto p = presets::shear(0.3, kSmall);
    EXPECT_GT(newton::data_distance(p), p.options.radius);
    auto q = p;
    q.options.max_iter = 2;
    const auto r = newton::solve_stationary(q);
    EXPECT_FALSE(r.report.within_radius);
    EXPECT_FALSE(r.report.warnings.empty());
    EXPECT_NEAR(newton::data_distance(presets::parallel(kSmall)), 0.0, 1e-15);
}

TEST(SmoothDependence, ShearDerivativeIsPsiSquared) {
    const double eta = 0.01;
    auto solve = [](double e) { return newton::solve_stationary(presets::shear(e, kSmall)).solution; };
    const auto d = (1.0 / (12.0 * eta)) * (solve(-2 * eta) - 8.0 * solve(-eta) + 8.0 * solve(eta) - solve(2 * eta));
    const auto psi2 = spectra::sample_family([](double, double s) { return s * s; }, 32, 64);
    EXPECT_LE(spectra::max_abs_grid_diff(d, psi2), 1e-8);
}

TEST(SmoothDependence, FourthOrderStencilConvergence) {
    // Phi(a) = eps with a = psi on the walls; da/deps at 0 is (psi - psi^2) / 2.
    auto solve = [](double e) {
        auto p = presets::parallel(kSmall);
        p.vorticity.values.assign(65, e);
        return newton::solve_stationary(p).solution;
    };
    const auto exact = spectra::sample_family([](double, double s) { return (s - s * s) / 2; }, 32, 64);
    auto err = [&](double eta) {
        const auto d = (1.0 / (12.0 * eta)) * (solve(-2 * eta) - 8.0 * solve(-eta) + 8.0 * solve(eta) - solve(2 * eta));
        return spectra::max_abs_grid_diff(d, exact);
    };
    const double e1 = err(0.2);
    const double e2 = err(0.1);
    EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.5);
}

TEST(Validate, RejectsBadProblems) {
    auto p = presets::parallel(kSmall);
    p.upper = AnalyticLine::constant(0.0, 32);
    EXPECT_THROW(p.validate(), DomainError);
    auto q = presets::parallel(kSmall);
    q.vorticity.values.resize(10);
    EXPECT_THROW(q.validate(), ResolutionError);
    auto r = presets::parallel(kSmall);
    r.n_psi = 4;
    EXPECT_THROW(r.validate(), ResolutionError);
}

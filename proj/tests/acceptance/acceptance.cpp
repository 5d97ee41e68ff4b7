// Acceptance suite at desk scale (K = 64, N_psi = 128). One PASS/FAIL line per
// criterion; the exit status is nonzero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flowlines/errors.hpp"
#include "flowlines/laplace.hpp"
#include "flowlines/newton.hpp"
#include "flowlines/physical.hpp"
#include "flowlines/presets.hpp"
#include "flowlines/spectra.hpp"
#include "flowlines/vonmises.hpp"
#include "oracles.hpp"

using namespace flowlines;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const newton::SolveResult& harmonic_run() {
    static const auto r = newton::solve_stationary(presets::harmonic(0.05));
    return r;
}

const newton::SolveResult& shear_run() {
    static const auto r = newton::solve_stationary(presets::shear(0.05));
    return r;
}

FlowFamily fd_derivative(const std::function<FlowFamily(double)>& solve, double eta) {
    return (1.0 / (12.0 * eta)) * (solve(-2 * eta) - 8.0 * solve(-eta) + 8.0 * solve(eta) - solve(2 * eta));
}

void parallel_exactness(Outcome& o) {
    const auto r = newton::solve_stationary(presets::parallel());
    const auto psi = spectra::sample_family([](double, double s) { return s; }, 64, 128);
    const double err = spectra::max_abs_grid_diff(r.solution, psi);
    const double res = r.report.residual_history.back().combined();
    o.check(r.report.converged && r.report.iterations <= 1, "iterations " + std::to_string(r.report.iterations));
    o.check(err <= 1e-13, "max|a - psi| " + fmt(err));
    o.check(res <= 1e-11, "residual " + fmt(res));
}

void shear_flow(Outcome& o) {
    const auto& r = shear_run();
    const double err = spectra::max_abs_grid_diff(r.solution, presets::shear_solution(0.05));
    o.check(r.report.converged && err <= 1e-8, "eps 0.05 error " + fmt(err));
    const auto c = newton::continuation_solve(presets::shear(0.3), 6);
    const double err3 = spectra::max_abs_grid_diff(c.solution, presets::shear_solution(0.3));
    o.check(c.report.stages.size() == 6 && err3 <= 1e-7, "eps 0.3 in 6 stages error " + fmt(err3));
}

void harmonic_flow(Outcome& o) {
    const auto& r = harmonic_run();
    const double err = spectra::max_abs_grid_diff(r.solution, presets::harmonic_oracle(0.05));
    o.check(r.report.converged && err <= 1e-6, "error vs root-finding family " + fmt(err));
}

void poisson_solver(Outcome& o) {
    std::mt19937_64 rng(401);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto a0 = oracle::random_family(rng, 64, 128, 1.0, 0.15, true, -1, 2);
        for (int k = -64; k <= 64; ++k) a0(k, 0) = a0(k, 128) = 0.0;
        a0 *= 1.0 / spectra::max_abs_grid_diff(a0, FlowFamily(64, 128));
        const auto a = laplace::solve_poisson(laplace::apply_laplacian(a0), AnalyticLine(64), AnalyticLine(64));
        worst = std::max(worst, spectra::max_abs_diff(a, a0));
    }
    o.check(worst <= 1e-6, "roundtrip " + fmt(worst));

    std::vector<Complex> zero(129, 0.0);
    std::vector<Complex> one(129, 1.0);
    const double sinh_err = std::abs(laplace::solve_mode(2, zero, 0.0, 1.0)[64].real() - std::sinh(1.0) / std::sinh(2.0));
    const double green_err = std::abs(laplace::solve_mode(1, one, 0.0, 0.0)[64].real() - oracle::kMode1Midpoint);
    const double mode0_err = std::abs(laplace::solve_mode0(one, 0.0, 0.0)[64].real() - oracle::kMode0Midpoint);
    o.check(sinh_err <= 1e-8, "sinh ratio " + fmt(sinh_err));
    o.check(green_err <= 1e-8, "mode 1 " + fmt(green_err));
    o.check(mode0_err <= 1e-8, "mode 0 " + fmt(mode0_err));

    const auto far = laplace::solve_mode(200, std::vector<Complex>(101, 0.0), 1.0, 0.0);
    bool finite = true;
    for (const auto& z : far) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
    const double rel = std::abs(far[5].real() / oracle::kExpMinus10 - 1.0);
    o.check(finite && rel <= 1e-9, "|k| = 200 finite, rel error " + fmt(rel));
}

void linearization(Outcome& o) {
    using std::numbers::pi;
    const std::vector<std::function<double(double, double)>> dirs = {
        [](double x, double s) { return std::cos(x) * std::sin(pi * s); },
        [](double x, double s) { return std::sin(2 * x) * s * (1 - s); },
    };
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        const auto v = spectra::sample_family(dirs[d], 64, 128);
        const double ratio = vonmises::linearization_check(v, 1e-3) / vonmises::linearization_check(v, 5e-4);
        o.check(std::abs(ratio - 2.0) <= 0.4, "direction " + std::to_string(d + 1) + " ratio " + fmt(ratio));
    }
}

void ellipticity_identity(Outcome& o) {
    std::mt19937_64 rng(601);
    const auto psi = spectra::sample_family([](double, double s) { return s; }, 64, 128);
    std::vector<std::pair<std::string, FlowFamily>> fams = {
        {"parallel", psi},
        {"shear 0.05", shear_run().solution},
        {"shear 0.3", presets::shear_solution(0.3)},
        {"harmonic", harmonic_run().solution},
        {"harmonic oracle", presets::harmonic_oracle(0.05)},
        {"random", psi + oracle::random_family(rng, 64, 128, 0.02, 0.2, false)},
    };
    double worst = 0.0;
    for (const auto& [name, a] : fams) worst = std::max(worst, vonmises::ellipticity(a).max_identity_error);
    o.check(worst <= 1e-10, "max identity error over " + std::to_string(fams.size()) + " families " + fmt(worst));
}

// sup of |a|_{Y^m} / (|f|_{Y^{m-2}} + |b|_{X^{m-1/2}} + |c|_{X^{m-1/2}}) over
// random inputs whose coefficients decay at a random rate in [sigma, 1].
double bound_constant(int K, int n, int inputs, double sigma, int m) {
    const laplace::PoissonSolver solver(K, n);
    double worst = 0.0;
    for (int t = 0; t < inputs; ++t) {
        std::mt19937_64 rf(1000 + t);
        std::mt19937_64 rb(2000 + t);
        std::mt19937_64 rc(3000 + t);
        std::mt19937_64 rd(4000 + t);
        const double decay = std::uniform_real_distribution<double>(sigma, 1.0)(rd);
        const auto f = oracle::random_family(rf, K, n, 1.0, decay, false);
        const auto b = oracle::random_line(rb, K, 1.0, decay);
        const auto c = oracle::random_line(rc, K, 1.0, decay);
        const auto a = solver.solve(f, b, c);
        const double data = spectra::y_norm(f, sigma, m - 2) + spectra::x_norm(b, sigma, m - 0.5) +
                            spectra::x_norm(c, sigma, m - 0.5);
        worst = std::max(worst, spectra::y_norm(a, sigma, m) / data);
    }
    return worst;
}

void isomorphism_bound(Outcome& o) {
    const int inputs = 128;
    const double c1 = bound_constant(32, 128, inputs, 0.3, 3);
    const double c2 = bound_constant(64, 128, inputs, 0.3, 3);
    const double change = std::abs(c2 / c1 - 1.0);
    o.check(std::isfinite(c1) && std::isfinite(c2), std::to_string(inputs) + " inputs, C(K=32) " + fmt(c1) +
                                                          ", C(K=64) " + fmt(c2));
    o.check(change <= 0.1, "relative change " + fmt(change));
}

void norm_units(Outcome& o) {
    const auto psi = spectra::sample_family([](double, double s) { return s; }, 64, 128);
    const double y = spectra::y_norm(psi, 0.1, 2);
    // Low order on purpose: sampling noise in high modes is amplified by e^{2 sigma |k|}.
    const auto cosx = spectra::sample_line([](double x) { return std::cos(x); }, 4);
    const double x = spectra::x_norm(cosx, 0.5, 0.0);
    o.check(std::abs(y - 2.0 / std::sqrt(3.0)) <= 1e-10, "|psi|_Y2 error " + fmt(std::abs(y - 2.0 / std::sqrt(3.0))));
    o.check(std::abs(x - std::sqrt(std::exp(1.0) / 2.0)) <= 1e-10,
            "|cos|_X error " + fmt(std::abs(x - std::sqrt(std::exp(1.0) / 2.0))));
}

void strip_estimation(Outcome& o) {
    for (double s : {0.1, 0.4}) {
        AnalyticLine a(64);
        for (int k = -64; k <= 64; ++k) a[k] = std::exp(-s * std::abs(k));
        const auto e = spectra::strip_estimate(a);
        const double rel = std::abs(e.value / s - 1.0);
        o.check(e.finite() && rel <= 0.05, "s = " + fmt(s) + " rel error " + fmt(rel));
    }
    const auto p = presets::harmonic(0.05);
    const auto g = spectra::strip_estimate(p.upper);
    const auto& r = harmonic_run();
    double worst = std::numeric_limits<double>::infinity();
    bool all_finite = g.finite();
    for (int j = 1; j <= 128; ++j) {
        const auto e = spectra::strip_estimate(spectra::restrict_line(r.solution, j));
        all_finite = all_finite && e.finite();
        if (e.finite()) worst = std::min(worst, e.value / g.value);
    }
    o.check(all_finite && worst >= 0.9, "harmonic lines keep " + fmt(100.0 * worst) + "% of the wall estimate");
}

void pde_verification(Outcome& o) {
    const std::vector<int> grids = {32, 64, 128};
    auto study = [&](const std::string& name, const FlowFamily& a, const newton::ChannelProblem& p, bool div_order) {
        std::vector<physical::StationarityReport> reps;
        for (int ny : grids) {
            reps.push_back(physical::verify_stationarity(physical::reconstruct_streamfunction(a, p.lower, p.upper, ny),
                                                         p.vorticity));
        }
        for (std::size_t i = 1; i < reps.size(); ++i) {
            const double order = std::log2(reps[i - 1].max_pde_residual / reps[i].max_pde_residual);
            o.check(std::abs(order - 2.0) <= 0.4, name + " residual order " + fmt(order) + " at ny " +
                                                      std::to_string(grids[i]));
            if (div_order) {
                const double d = std::log2(reps[i - 1].divergence_max / reps[i].divergence_max);
                o.check(std::abs(d - 2.0) <= 0.4, name + " divergence order " + fmt(d));
            }
        }
        if (!div_order) {
            o.check(reps.back().divergence_max <= 1e-10, name + " divergence " + fmt(reps.back().divergence_max));
        }
    };
    study("shear", shear_run().solution, presets::shear(0.05), false);
    study("harmonic", harmonic_run().solution, presets::harmonic(0.05), true);
}

void smooth_dependence(Outcome& o) {
    auto shear = [](double e) { return newton::solve_stationary(presets::shear(e)).solution; };
    const auto psi2 = spectra::sample_family([](double, double s) { return s * s; }, 64, 128);
    for (double eta : {0.02, 0.01}) {
        const double err = spectra::max_abs_grid_diff(fd_derivative(shear, eta), psi2);
        o.check(err <= 1e-8, "shear d/deps at eta " + fmt(eta) + " error " + fmt(err));
    }
    // Same stencil on Phi(a) = eps, a = psi on the walls, where the solution map
    // is genuinely nonlinear; d/deps at 0 is (psi - psi^2) / 2.
    auto vort = [](double e) {
        auto p = presets::parallel();
        p.vorticity.values.assign(129, e);
        return newton::solve_stationary(p).solution;
    };
    const auto exact = spectra::sample_family([](double, double s) { return (s - s * s) / 2; }, 64, 128);
    std::vector<double> errs;
    for (double eta : {0.2, 0.1, 0.05}) errs.push_back(spectra::max_abs_grid_diff(fd_derivative(vort, eta), exact));
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        o.check(std::abs(order - 4.0) <= 0.5, "vorticity family order " + fmt(order));
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
        {"parallel-flow exactness", parallel_exactness},
        {"closed-form shear flow", shear_flow},
        {"harmonic channel flow", harmonic_flow},
        {"Poisson solver", poisson_solver},
        {"linearization", linearization},
        {"ellipticity identity", ellipticity_identity},
        {"isomorphism bound", isomorphism_bound},
        {"norm unit values", norm_units},
        {"strip estimation", strip_estimation},
        {"independent PDE verification", pde_verification},
        {"smooth parameter dependence", smooth_dependence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

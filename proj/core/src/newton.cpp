#include "flowlines/newton.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "flowlines/errors.hpp"
#include "flowlines/fourier.hpp"
#include "flowlines/spectra.hpp"

namespace flowlines::newton {
namespace {

FlowFamily mask_boundary_rows(FlowFamily r) {
    for (int k = -r.order(); k <= r.order(); ++k) {
        auto m = r.mode(k);
        m.front() = 0.0;
        m.back() = 0.0;
    }
    return r;
}

void set_boundary_rows(FlowFamily& a, const AnalyticLine& f, const AnalyticLine& g) {
    for (int k = -a.order(); k <= a.order(); ++k) {
        auto m = a.mode(k);
        m.front() = f[k];
        m.back() = g[k];
    }
}

ChannelProblem scaled(const ChannelProblem& p, double t) {
    ChannelProblem q = p;
    q.lower = t * p.lower;
    q.upper = t * p.upper;
    q.upper[0] = 1.0 + t * (p.upper[0] - 1.0);
    for (auto& v : q.vorticity.values) v *= t;
    return q;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

double ResidualNorms::combined() const noexcept { return std::max({interior, lower, upper}); }

void ChannelProblem::validate() const {
    std::ostringstream msg;
    if (K < 1) msg << "K must be positive; ";
    if (n_psi < 5) msg << "n_psi must be at least 5; ";
    if (space.m() < 2 || space.m() > spectra::kMaxNormOrder) {
        msg << "Sobolev order m must lie in [2, " << spectra::kMaxNormOrder << "]; ";
    }
    if (lower.order() != K || upper.order() != K) msg << "boundary lines must have order K = " << K << "; ";
    if (vorticity.n_psi() != n_psi) msg << "vorticity profile must have n_psi + 1 = " << n_psi + 1 << " samples; ";
    if (!(options.tol_res > 0.0) || !(options.tol_step > 0.0)) msg << "tolerances must be positive; ";
    if (options.max_iter < 0) msg << "max_iter must be nonnegative; ";
    if (!msg.str().empty()) throw ResolutionError("invalid channel problem: " + msg.str());

    const int n_x = fourier::padded_size(K);
    const auto fv = spectra::synthesize_real(lower, n_x);
    const auto gv = spectra::synthesize_real(upper, n_x);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fv.size(); ++i) gap = std::min(gap, gv[i] - fv[i]);
    if (!(gap > 0.0)) {
        throw DomainError("channel is degenerate: min(g - f) = " + std::to_string(gap));
    }
}

OperatorValue evaluate_T(const ChannelProblem& p, const FlowFamily& a) {
    if (a.order() != p.K || a.n_psi() != p.n_psi) {
        throw ResolutionError("family resolution does not match the problem");
    }
    OperatorValue t;
    t.interior = vonmises::phi(a, p.options.ellipticity_floor);
    auto m0 = t.interior.mode(0);
    for (int j = 0; j <= p.n_psi; ++j) m0[static_cast<std::size_t>(j)] -= p.vorticity.values[static_cast<std::size_t>(j)];
    t.lower = spectra::restrict_line(a, 0) - p.lower;
    t.upper = spectra::restrict_line(a, p.n_psi) - p.upper;
    return t;
}

ResidualNorms residual_norms(const ChannelProblem& p, const OperatorValue& t) {
    const double sigma = p.space.sigma();
    const int m = p.space.m();
    ResidualNorms r;
    r.interior = spectra::y_norm(mask_boundary_rows(t.interior), sigma, m - 2);
    r.lower = spectra::x_norm(t.lower, sigma, m - 0.5);
    r.upper = spectra::x_norm(t.upper, sigma, m - 0.5);
    return r;
}

FlowFamily initial_guess(const ChannelProblem& p) {
    FlowFamily a(p.K, p.n_psi);
    for (int k = -p.K; k <= p.K; ++k) {
        auto m = a.mode(k);
        for (int j = 0; j <= p.n_psi; ++j) {
            m[static_cast<std::size_t>(j)] = p.lower[k] + a.psi(j) * (p.upper[k] - p.lower[k]);
        }
    }
    return a;
}

double data_distance(const ChannelProblem& p) {
    const double sigma = p.space.sigma();
    const double order = p.space.m() - 0.5;
    AnalyticLine g1 = p.upper;
    g1[0] -= 1.0;
    const double f_norm = spectra::x_norm(p.lower, sigma, order);
    const double g_norm = spectra::x_norm(g1, sigma, order);
    const double F_norm = spectra::y_norm(spectra::embed_profile(p.vorticity.values, 0), sigma, p.space.m() - 2);
    return std::max({f_norm, g_norm, F_norm});
}

ChordSolver::ChordSolver(const ChannelProblem& p) : problem_(p), poisson_(laplace::discrete_solver(p.K, p.n_psi)) {
    problem_.validate();
}

FlowFamily ChordSolver::correction(const OperatorValue& t) const {
    return poisson_->solve(mask_boundary_rows(t.interior), -1.0 * t.lower, -1.0 * t.upper);
}

FlowFamily ChordSolver::step(const FlowFamily& a) const {
    FlowFamily next = a + correction(evaluate_T(problem_, a));
    set_boundary_rows(next, problem_.lower, problem_.upper);
    return next;
}

SolveResult ChordSolver::solve(std::optional<FlowFamily> a0) const {
    const auto start = std::chrono::steady_clock::now();
    const ChannelProblem& p = problem_;

    SolveResult out;
    SolveReport& rep = out.report;
    rep.data_distance = data_distance(p);
    rep.within_radius = rep.data_distance <= p.options.radius;
    if (!rep.within_radius) {
        std::ostringstream w;
        w << "data distance " << rep.data_distance << " from the parallel flow exceeds radius "
          << p.options.radius << "; convergence is not guaranteed";
        rep.warnings.push_back(w.str());
    }

    FlowFamily a = a0 ? std::move(*a0) : initial_guess(p);
    if (a.order() != p.K || a.n_psi() != p.n_psi) {
        throw ResolutionError("initial family resolution does not match the problem");
    }

    for (int it = 1; it <= p.options.max_iter; ++it) {
        OperatorValue t;
        try {
            t = evaluate_T(p, a);
        } catch (EllipticityError& e) {
            e.attach_iterate(std::make_shared<const FlowFamily>(a));
            throw;
        }
        const ResidualNorms norms = residual_norms(p, t);
        const FlowFamily delta = correction(t);
        const double step = spectra::y_norm(delta, p.space);

        rep.residual_history.push_back(norms);
        rep.step_history.push_back(step);
        rep.iterations = it;

        a += delta;
        set_boundary_rows(a, p.lower, p.upper);

        if (norms.combined() < p.options.tol_res && step < p.options.tol_step) {
            rep.converged = true;
            break;
        }
    }

    annotate(rep, a);
    out.solution = std::move(a);
    rep.wall_ms = elapsed_ms(start);
    return out;
}

FlowFamily chord_step(const ChannelProblem& p, const FlowFamily& a) { return ChordSolver(p).step(a); }

SolveResult solve_stationary(const ChannelProblem& p, std::optional<FlowFamily> a0) {
    return ChordSolver(p).solve(std::move(a0));
}

SolveResult continuation_solve(const ChannelProblem& p, int steps) {
    if (steps < 1) throw DomainError("continuation needs at least one stage");
    const auto start = std::chrono::steady_clock::now();
    p.validate();

    SolveResult out;
    SolveReport& rep = out.report;
    rep.converged = true;
    std::optional<FlowFamily> warm;
    for (int i = 1; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const ChannelProblem stage = i == steps ? p : scaled(p, t);
        SolveResult r;
        try {
            r = ChordSolver(stage).solve(warm);
        } catch (const EllipticityError& e) {
            rep.converged = false;
            rep.failure = std::string("stage t = ") + std::to_string(t) + ": " + e.what();
            if (warm) out.solution = *warm;
            break;
        }
        rep.iterations += r.report.iterations;
        rep.residual_history.insert(rep.residual_history.end(), r.report.residual_history.begin(),
                                    r.report.residual_history.end());
        rep.step_history.insert(rep.step_history.end(), r.report.step_history.begin(),
                                r.report.step_history.end());
        rep.stage_t.push_back(t);
        const bool ok = r.report.converged;
        rep.stages.push_back(std::move(r.report));
        warm = r.solution;
        out.solution = std::move(r.solution);
        if (!ok) {
            rep.converged = false;
            rep.failure = "stage t = " + std::to_string(t) + " did not converge";
            break;
        }
        rep.last_successful_t = t;
    }

    const SolveReport& last = rep.stages.empty() ? rep : rep.stages.back();
    rep.data_distance = last.data_distance;
    rep.within_radius = last.within_radius;
    rep.warnings = last.warnings;
    if (out.solution.n_psi() > 0) annotate(rep, out.solution);
    rep.wall_ms = elapsed_ms(start);
    return out;
}

void annotate(SolveReport& report, const FlowFamily& a) {
    report.ellipticity = vonmises::ellipticity(a);
    report.strip_estimates.clear();
    report.strip_min.reset();
    for (int j = 0; j <= a.n_psi(); ++j) {
        const StripEstimate s = spectra::strip_estimate(spectra::restrict_line(a, j));
        if (s.finite()) report.strip_min = std::min(report.strip_min.value_or(s.value), s.value);
        report.strip_estimates.push_back(s);
    }
}

}  // namespace flowlines::newton

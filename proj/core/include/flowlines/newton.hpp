#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowlines/laplace.hpp"
#include "flowlines/types.hpp"
#include "flowlines/vonmises.hpp"

/// The boundary-value problem Phi(a) = F(psi), a(x,0) = f(x), a(x,1) = g(x)
/// solved by chord iteration: every step inverts the linearization at the
/// parallel flow a = psi, which is the Dirichlet Laplacian (in its discrete
/// form, laplace::DiscretePoissonSolver).
namespace flowlines::newton {

struct SolverOptions {
    double tol_res = 1e-10;
    double tol_step = 1e-11;
    int max_iter = 60;
    double ellipticity_floor = vonmises::kDefaultEllipticityFloor;
    /// Distance from (0, 1, 0) beyond which a warning is recorded.
    double radius = 0.15;
};

struct ChannelProblem {
    AnalyticLine lower;          // f
    AnalyticLine upper;          // g
    VorticityProfile vorticity;  // F on the psi grid
    SpaceParams space{0.1, 2};
    int K = 64;
    int n_psi = 128;
    SolverOptions options{};

    /// Checks resolutions, grid agreement and a positive wall gap; throws.
    void validate() const;
};

/// (Phi(a) - F, a(.,0) - f, a(.,1) - g).
struct OperatorValue {
    FlowFamily interior;
    AnalyticLine lower;
    AnalyticLine upper;
};

/// Norms of one operator value: interior in Y^{m-2} over rows 1..N-1 (the
/// boundary rows are fixed by the trace conditions), traces in X^{m-1/2}.
struct ResidualNorms {
    double interior = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    double combined() const noexcept;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    std::vector<ResidualNorms> residual_history;
    std::vector<double> step_history;  // y_norm of each chord step, order m
    vonmises::EllipticityReport ellipticity{};
    std::vector<StripEstimate> strip_estimates;  // per flow line psi_j
    std::optional<double> strip_min;             // over finite estimates
    double data_distance = 0.0;
    bool within_radius = true;
    std::vector<std::string> warnings;
    double wall_ms = 0.0;

    // Continuation runs only.
    std::vector<double> stage_t;
    std::vector<SolveReport> stages;
    std::optional<double> last_successful_t;
    std::string failure;
};

struct SolveResult {
    FlowFamily solution;
    SolveReport report;
};

OperatorValue evaluate_T(const ChannelProblem& p, const FlowFamily& a);

ResidualNorms residual_norms(const ChannelProblem& p, const OperatorValue& t);

/// a(x, psi) = f(x) + psi (g(x) - f(x)).
FlowFamily initial_guess(const ChannelProblem& p);

/// Distance of the data from the parallel-flow data (0, 1, 0):
/// max(|f|_{X^{m-1/2}}, |g - 1|_{X^{m-1/2}}, |F|_{H^{m-2}}).
double data_distance(const ChannelProblem& p);

/// Reusable chord iteration bound to one resolution.
class ChordSolver {
public:
    explicit ChordSolver(const ChannelProblem& p);

    /// delta solving Lap(delta) = interior residual (rows 1..N-1),
    /// delta(.,0) = f - a(.,0), delta(.,1) = g - a(.,1).
    FlowFamily correction(const OperatorValue& t) const;

    /// a + correction(evaluate_T(a)), with the boundary rows set to f and g.
    FlowFamily step(const FlowFamily& a) const;

    SolveResult solve(std::optional<FlowFamily> a0 = std::nullopt) const;

private:
    ChannelProblem problem_;
    std::shared_ptr<const laplace::DiscretePoissonSolver> poisson_;
};

FlowFamily chord_step(const ChannelProblem& p, const FlowFamily& a);

/// Iterates chord steps until the combined residual is below tol_res and the
/// step norm below tol_step, or max_iter is reached (converged = false).
/// Throws EllipticityError (with the last iterate attached) on breakdown.
SolveResult solve_stationary(const ChannelProblem& p, std::optional<FlowFamily> a0 = std::nullopt);

/// Solves p_t = (t f, 1 + t (g - 1), t F) for t = 1/steps, ..., 1, warm
/// starting each stage from the previous one.
SolveResult continuation_solve(const ChannelProblem& p, int steps);

/// Fills ellipticity and strip diagnostics of a finished solve.
void annotate(SolveReport& report, const FlowFamily& a);

}  // namespace flowlines::newton

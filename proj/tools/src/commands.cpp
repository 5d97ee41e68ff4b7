#include "commands.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "flowlines/fourier.hpp"
#include "flowlines/physical.hpp"
#include "flowlines/serialize.hpp"
#include "flowlines/spectra.hpp"
#include "flowlines/vonmises.hpp"

namespace flowlines::cli {
namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json strip_json(const StripEstimate& s) {
    const char* kind = s.kind == StripEstimate::Kind::finite   ? "finite"
                       : s.kind == StripEstimate::Kind::entire ? "entire"
                                                               : "undefined";
    return {{"kind", kind}, {"value", number_or_null(s.value)}};
}

json verification_json(const physical::StationarityReport& r, double threshold, bool passed) {
    json j = json::parse(io::stationarity_to_json(r));
    j["threshold"] = threshold;
    j["passed"] = passed;
    return j;
}

void write_if(const std::string& path, const std::string& text) {
    if (!path.empty()) io::write_file(path, text);
}

}  // namespace

std::optional<FlowFamily> oracle_solution(const RunConfig& cfg) {
    const presets::Resolution res{cfg.problem.K, cfg.problem.n_psi};
    switch (cfg.oracle) {
        case Oracle::parallel: return presets::shear_solution(0.0, res);
        case Oracle::shear: return presets::shear_solution(cfg.preset_eps, res);
        case Oracle::harmonic: return presets::harmonic_oracle(cfg.preset_eps, res);
        case Oracle::none: break;
    }
    return std::nullopt;
}

int cmd_solve(const std::string& config_path, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }

    try {
        const auto& p = cfg.problem;
        newton::SolveResult result = cfg.continuation_steps > 1 ? newton::continuation_solve(p, cfg.continuation_steps)
                                                                : newton::solve_stationary(p);
        newton::SolveReport& rep = result.report;
        const FlowFamily& a = result.solution;

        std::vector<std::pair<std::string, double>> extras;
        double max_abs_error = std::numeric_limits<double>::quiet_NaN();
        if (const auto oracle = oracle_solution(cfg)) {
            max_abs_error = spectra::max_abs_diff(a, *oracle);
            extras.emplace_back("max_abs_error", max_abs_error);
        }

        std::optional<physical::StationarityReport> verification;
        std::optional<physical::PhysicalField> field;
        if (rep.converged) {
            try {
                field = physical::reconstruct_streamfunction(a, p.lower, p.upper, cfg.ny);
                verification = physical::verify_stationarity(*field, p.vorticity);
            } catch (const Error& e) {
                rep.warnings.push_back(std::string("verification skipped: ") + e.what());
            }
        }

        write_if(cfg.outputs.solution, io::family_to_json(a) + "\n");
        write_if(cfg.outputs.report, io::report_to_json(rep, extras, verification) + "\n");
        write_if(cfg.outputs.family_csv, io::family_csv(a, fourier::padded_size(a.order())));
        if (!cfg.outputs.velocity_csv.empty()) {
            try {
                io::write_file(cfg.outputs.velocity_csv, io::velocity_csv(vonmises::velocity(a, p.options.ellipticity_floor)));
            } catch (const EllipticityError& e) {
                err << "warning: velocity CSV not written: " << e.what() << '\n';
            }
        }
        if (field) write_if(cfg.outputs.field_csv, io::field_csv(*field));

        out << "converged: " << (rep.converged ? "true" : "false") << '\n';
        out << "iterations: " << rep.iterations << '\n';
        if (!rep.residual_history.empty()) out << "residual: " << rep.residual_history.back().combined() << '\n';
        if (std::isfinite(max_abs_error)) out << "max_abs_error: " << max_abs_error << '\n';
        if (verification) out << "max_pde_residual: " << verification->max_pde_residual << '\n';
        for (const auto& w : rep.warnings) out << "warning: " << w << '\n';
        if (!rep.failure.empty()) out << "failure: " << rep.failure << '\n';
        return rep.converged ? kOk : kNotConverged;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

int cmd_verify(const std::string& solution_path, const std::string& config_path, std::ostream& out,
               std::ostream& err) {
    FlowFamily a;
    try {
        a = io::family_from_json(io::read_file(solution_path));
    } catch (const Error& e) {
        err << "error: malformed solution " << solution_path << ": " << e.what() << '\n';
        return kError;
    }
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    const auto& p = cfg.problem;
    if (a.order() != p.K || a.n_psi() != p.n_psi) {
        err << "error: resolution mismatch: solution has K = " << a.order() << ", Npsi = " << a.n_psi()
            << " but the configuration expects K = " << p.K << ", Npsi = " << p.n_psi << '\n';
        return kError;
    }

    json doc;
    int code = kOk;
    try {
        const auto field = physical::reconstruct_streamfunction(a, p.lower, p.upper, cfg.ny);
        const auto rep = physical::verify_stationarity(field, p.vorticity);
        const bool passed = rep.max_pde_residual <= cfg.verify_threshold;
        doc = verification_json(rep, cfg.verify_threshold, passed);
        code = passed ? kOk : kVerifyFailed;
    } catch (const StagnationError& e) {
        doc = {{"passed", false}, {"threshold", cfg.verify_threshold}, {"reason", e.what()}};
        code = kVerifyFailed;
    } catch (const DomainError& e) {
        doc = {{"passed", false}, {"threshold", cfg.verify_threshold}, {"reason", e.what()}};
        code = kVerifyFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    const std::string text = doc.dump(2) + "\n";
    try {
        write_if(cfg.outputs.verification, text);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    out << text;
    return code;
}

int cmd_diag(const std::string& solution_path, double sigma, std::ostream& out, std::ostream& err) {
    try {
        const FlowFamily a = io::family_from_json(io::read_file(solution_path));
        json doc;
        doc["K"] = a.order();
        doc["Npsi"] = a.n_psi();
        doc["sigma"] = sigma;
        json norms = json::array();
        for (int m = 0; m <= spectra::kMaxNormOrder; ++m) {
            norms.push_back({{"m", m}, {"value", spectra::y_norm(a, sigma, m)}});
        }
        doc["y_norms"] = norms;
        json strips = json::array();
        std::optional<double> strip_min;
        for (int j = 0; j <= a.n_psi(); ++j) {
            const auto s = spectra::strip_estimate(spectra::restrict_line(a, j));
            if (s.finite()) strip_min = std::min(strip_min.value_or(s.value), s.value);
            strips.push_back(strip_json(s));
        }
        doc["strip_estimates"] = strips;
        doc["strip_min"] = strip_min ? json(*strip_min) : json(nullptr);
        const auto ell = vonmises::ellipticity(a);
        doc["ellipticity"] = {{"min_a_psi", number_or_null(ell.min_a_psi)},
                              {"max_identity_error", number_or_null(ell.max_identity_error)}};
        out << doc.dump(2) << '\n';
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace flowlines::cli

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace flowlines::cli {

enum ExitCode : int { kOk = 0, kError = 1, kNotConverged = 2, kVerifyFailed = 3 };

/// Closed-form or root-finding solution of a preset problem.
std::optional<FlowFamily> oracle_solution(const RunConfig& cfg);

int cmd_solve(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& solution_path, const std::string& config_path, std::ostream& out,
               std::ostream& err);
/// Norms use strip half-width sigma; y_norm is reported for m = 0..4.
int cmd_diag(const std::string& solution_path, double sigma, std::ostream& out, std::ostream& err);

}  // namespace flowlines::cli

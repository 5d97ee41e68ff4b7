#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowlines/errors.hpp"
#include "flowlines/newton.hpp"
#include "flowlines/physical.hpp"
#include "flowlines/types.hpp"
#include "flowlines/vonmises.hpp"

/// JSON and CSV persistence. Families are {"K", "Npsi", "coeffs"} with coeffs
/// a list of [re, im] pairs in (k, j) order, k = -K..K outer; lines use
/// Npsi = 0 and one pair per k.
namespace flowlines::io {

class FormatError : public Error {
public:
    using Error::Error;
};

std::string family_to_json(const FlowFamily& a);
FlowFamily family_from_json(const std::string& text);

std::string line_to_json(const AnalyticLine& a);
AnalyticLine line_from_json(const std::string& text);

std::string stationarity_to_json(const physical::StationarityReport& r);

/// Extra numeric fields are appended at the top level in the given order.
std::string report_to_json(const newton::SolveReport& r,
                           const std::vector<std::pair<std::string, double>>& extras = {},
                           const std::optional<physical::StationarityReport>& verification = std::nullopt);

/// "x,psi,value" on n_x equispaced x for every psi_j.
std::string family_csv(const FlowFamily& a, int n_x);
/// "x,psi,u1,u2".
std::string velocity_csv(const vonmises::VelocityField& v);
/// "x,y,psi,omega" for samples inside the channel; omega is empty where the
/// stencil leaves the channel.
std::string field_csv(const physical::PhysicalField& f);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace flowlines::io

#include "flowlines/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flowlines/spectra.hpp"

namespace flowlines::io {
namespace {

using nlohmann::json;

json coeffs_json(std::span<const Complex> c) {
    json arr = json::array();
    for (const auto& z : c) arr.push_back({z.real(), z.imag()});
    return arr;
}

std::vector<Complex> coeffs_from(const json& arr, std::size_t expected) {
    if (!arr.is_array()) throw FormatError("\"coeffs\" must be an array");
    if (arr.size() != expected) {
        throw FormatError("\"coeffs\" has " + std::to_string(arr.size()) + " entries, expected " +
                          std::to_string(expected));
    }
    std::vector<Complex> out;
    out.reserve(expected);
    for (const auto& z : arr) {
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
            throw FormatError("each coefficient must be a [re, im] pair of numbers");
        }
        out.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    return out;
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

int int_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer()) {
        throw FormatError(std::string("missing or non-integer field \"") + key + "\"");
    }
    return j[key].get<int>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* kind_name(StripEstimate::Kind k) {
    switch (k) {
        case StripEstimate::Kind::finite: return "finite";
        case StripEstimate::Kind::entire: return "entire";
        case StripEstimate::Kind::undefined: return "undefined";
    }
    return "undefined";
}

json report_json(const newton::SolveReport& r) {
    json j;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    json res = json::array();
    for (const auto& n : r.residual_history) res.push_back({n.interior, n.lower, n.upper});
    j["residuals"] = res;
    j["steps"] = r.step_history;
    j["min_a_psi"] = number_or_null(r.ellipticity.min_a_psi);
    j["ellipticity_identity_error"] = number_or_null(r.ellipticity.max_identity_error);
    j["strip_min"] = r.strip_min ? json(*r.strip_min) : json(nullptr);
    json strips = json::array();
    for (const auto& s : r.strip_estimates) {
        strips.push_back({{"kind", kind_name(s.kind)}, {"value", number_or_null(s.value)}});
    }
    j["strip_estimates"] = strips;
    j["data_distance"] = r.data_distance;
    j["within_radius"] = r.within_radius;
    j["warnings"] = r.warnings;
    if (!r.stages.empty()) {
        json stages = json::array();
        for (std::size_t i = 0; i < r.stages.size(); ++i) {
            stages.push_back({{"t", r.stage_t[i]},
                              {"converged", r.stages[i].converged},
                              {"iterations", r.stages[i].iterations}});
        }
        j["stages"] = stages;
        j["last_successful_t"] = r.last_successful_t ? json(*r.last_successful_t) : json(nullptr);
    }
    if (!r.failure.empty()) j["failure"] = r.failure;
    j["wall_ms"] = r.wall_ms;
    return j;
}

std::string num(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string family_to_json(const FlowFamily& a) {
    json j;
    j["K"] = a.order();
    j["Npsi"] = a.n_psi();
    j["coeffs"] = coeffs_json(std::span<const Complex>(a.data().data(), a.data().size()));
    return j.dump();
}

FlowFamily family_from_json(const std::string& text) {
    const json j = parse(text);
    const int K = int_field(j, "K");
    const int n = int_field(j, "Npsi");
    if (K < 0 || n < 1) throw FormatError("family needs K >= 0 and Npsi >= 1");
    if (!j.contains("coeffs")) throw FormatError("missing field \"coeffs\"");
    const auto count = static_cast<std::size_t>(2 * K + 1) * static_cast<std::size_t>(n + 1);
    return FlowFamily(K, n, coeffs_from(j["coeffs"], count));
}

std::string line_to_json(const AnalyticLine& a) {
    json j;
    j["K"] = a.order();
    j["Npsi"] = 0;
    j["coeffs"] = coeffs_json(a.coeffs());
    return j.dump();
}

AnalyticLine line_from_json(const std::string& text) {
    const json j = parse(text);
    const int K = int_field(j, "K");
    if (K < 0) throw FormatError("line needs K >= 0");
    if (int_field(j, "Npsi") != 0) throw FormatError("a line has Npsi = 0");
    if (!j.contains("coeffs")) throw FormatError("missing field \"coeffs\"");
    return AnalyticLine(K, coeffs_from(j["coeffs"], static_cast<std::size_t>(2 * K + 1)));
}

std::string stationarity_to_json(const physical::StationarityReport& r) {
    json j{{"max_pde_residual", r.max_pde_residual},
           {"max_vorticity_drift", r.max_vorticity_drift},
           {"divergence_max", r.divergence_max},
           {"n_points", r.n_points}};
    return j.dump(2);
}

std::string report_to_json(const newton::SolveReport& r,
                           const std::vector<std::pair<std::string, double>>& extras,
                           const std::optional<physical::StationarityReport>& verification) {
    json j = report_json(r);
    for (const auto& [key, value] : extras) j[key] = number_or_null(value);
    if (verification) j["verification"] = json::parse(stationarity_to_json(*verification));
    return j.dump(2);
}

std::string family_csv(const FlowFamily& a, int n_x) {
    const auto values = spectra::synthesize_family(a, n_x);
    std::ostringstream out;
    out << "x,psi,value\n";
    for (int j = 0; j <= a.n_psi(); ++j) {
        for (int i = 0; i < n_x; ++i) {
            out << num(2.0 * std::numbers::pi * i / n_x) << ',' << num(a.psi(j)) << ','
                << num(values[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].real()) << '\n';
        }
    }
    return out.str();
}

std::string velocity_csv(const vonmises::VelocityField& v) {
    std::ostringstream out;
    out << "x,psi,u1,u2\n";
    for (int j = 0; j <= v.n_psi; ++j) {
        for (int i = 0; i < v.n_x; ++i) {
            out << num(v.x[static_cast<std::size_t>(i)]) << ',' << num(v.psi[static_cast<std::size_t>(j)]) << ','
                << num(v.u1_at(i, j)) << ',' << num(v.u2_at(i, j)) << '\n';
        }
    }
    return out.str();
}

std::string field_csv(const physical::PhysicalField& f) {
    std::ostringstream out;
    out << "x,y,psi,omega\n";
    for (int l = 0; l <= f.ny; ++l) {
        for (int i = 0; i < f.nx; ++i) {
            const auto at = f.index(i, l);
            if (!f.inside[at]) continue;
            out << num(f.x_grid[static_cast<std::size_t>(i)]) << ',' << num(f.y_grid[static_cast<std::size_t>(l)])
                << ',' << num(f.psi[at]) << ',' << num(f.omega[at]) << '\n';
        }
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("failed writing " + path);
}

}  // namespace flowlines::io

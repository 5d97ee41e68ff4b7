#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flowlines/errors.hpp"
#include "flowlines/newton.hpp"
#include "flowlines/physical.hpp"
#include "flowlines/presets.hpp"

namespace flowlines::cli {

/// Bad configuration; the message carries "file:line: ..." when a line is known.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A parsed TOML-style value: number, string, bool or (nested) array.
struct Value {
    using Array = std::vector<Value>;
    std::variant<double, std::string, bool, Array> data;
    int line = 0;
};

/// section -> key -> value. Only [section] headers, key = value pairs,
/// # comments and arrays (which may span lines) are understood.
using Document = std::map<std::string, std::map<std::string, Value>>;

Document parse_document(const std::string& text, const std::string& source);

enum class Oracle { none, parallel, shear, harmonic };

struct Outputs {
    std::string solution;  // empty: not written
    std::string report;
    std::string family_csv;
    std::string velocity_csv;
    std::string field_csv;
    std::string verification;
};

struct RunConfig {
    std::string source;
    newton::ChannelProblem problem;
    Oracle oracle = Oracle::none;
    double preset_eps = 0.0;
    int ny = 128;
    int continuation_steps = 1;
    double verify_threshold = 1e-4;
    Outputs outputs;
};

/// Parses and validates a run configuration. Relative output paths are taken
/// relative to the directory holding the configuration file.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source, const std::string& base_dir = "");

/// "parallel", "shear-<eps>", "harmonic-<eps>"; nullopt when not a preset.
std::optional<std::pair<Oracle, double>> parse_preset(const std::string& name);

}  // namespace flowlines::cli

#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>

#include "flowlines/serialize.hpp"

namespace flowlines::cli {
namespace {

const std::set<std::string> kSections = {"problem", "space", "resolution", "solver", "output"};

const std::map<std::string, std::set<std::string>> kKeys = {
    {"problem", {"preset", "lower", "upper", "vorticity"}},
    {"space", {"sigma", "m"}},
    {"resolution", {"K", "n_psi", "ny"}},
    {"solver", {"tol_res", "tol_step", "max_iter", "ellipticity_floor", "radius", "continuation_steps",
                "verify_threshold"}},
    {"output", {"solution", "report", "family_csv", "velocity_csv", "field_csv", "verification"}},
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    if (line > 0) throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
    throw ConfigError(source + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

int bracket_depth(const std::string& s) {
    int depth = 0;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
        if (quoted) continue;
        if (s[i] == '[') ++depth;
        if (s[i] == ']') --depth;
    }
    return depth;
}

class ValueParser {
public:
    ValueParser(const std::string& text, const std::string& source, int line)
        : s_(text), source_(source), line_(line) {}

    Value parse() {
        Value v = value();
        skip();
        if (pos_ != s_.size()) fail(source_, line_, "unexpected text after value: '" + s_.substr(pos_) + "'");
        return v;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    Value value() {
        skip();
        if (pos_ >= s_.size()) fail(source_, line_, "missing value");
        const char c = s_[pos_];
        if (c == '"') return string();
        if (c == '[') return array();
        if (s_.compare(pos_, 4, "true") == 0) {
            pos_ += 4;
            return {true, line_};
        }
        if (s_.compare(pos_, 5, "false") == 0) {
            pos_ += 5;
            return {false, line_};
        }
        return number();
    }

    Value string() {
        std::string out;
        ++pos_;
        while (pos_ < s_.size() && s_[pos_] != '"') {
            if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
            out += s_[pos_++];
        }
        if (pos_ >= s_.size()) fail(source_, line_, "unterminated string");
        ++pos_;
        return {out, line_};
    }

    Value array() {
        Value::Array items;
        ++pos_;
        for (;;) {
            skip();
            if (pos_ >= s_.size()) fail(source_, line_, "unterminated array");
            if (s_[pos_] == ']') {
                ++pos_;
                break;
            }
            items.push_back(value());
            skip();
            if (pos_ < s_.size() && s_[pos_] == ',') {
                ++pos_;
            } else if (pos_ < s_.size() && s_[pos_] != ']') {
                fail(source_, line_, "expected ',' or ']' in array");
            }
        }
        return {std::move(items), line_};
    }

    Value number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail(source_, line_, "cannot parse value '" + s_.substr(pos_) + "'");
        pos_ += static_cast<std::size_t>(end - begin);
        if (!std::isfinite(v)) fail(source_, line_, "value must be finite");
        return {v, line_};
    }

    const std::string& s_;
    const std::string& source_;
    int line_;
    std::size_t pos_ = 0;
};

// Typed access with line-precise errors.
class Reader {
public:
    Reader(const Document& doc, std::string source) : doc_(doc), source_(std::move(source)) {}

    const Value* find(const std::string& section, const std::string& key) const {
        const auto s = doc_.find(section);
        if (s == doc_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    double number(const std::string& section, const std::string& key, double fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (!std::holds_alternative<double>(v->data)) fail(source_, v->line, section + "." + key + " must be a number");
        return std::get<double>(v->data);
    }

    int integer(const std::string& section, const std::string& key, int fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        const double d = number(section, key, 0.0);
        if (d != std::floor(d) || std::abs(d) > 1e9) fail(source_, v->line, section + "." + key + " must be an integer");
        return static_cast<int>(d);
    }

    std::string string(const std::string& section, const std::string& key, const std::string& fallback) const {
        const Value* v = find(section, key);
        if (!v) return fallback;
        if (!std::holds_alternative<std::string>(v->data)) fail(source_, v->line, section + "." + key + " must be a string");
        return std::get<std::string>(v->data);
    }

    int line(const std::string& section, const std::string& key) const {
        const Value* v = find(section, key);
        return v ? v->line : 0;
    }

    [[noreturn]] void error(const std::string& section, const std::string& key, const std::string& msg) const {
        fail(source_, line(section, key), section + "." + key + " " + msg);
    }

    const std::string& source() const { return source_; }

private:
    const Document& doc_;
    std::string source_;
};

// A boundary line: a number (constant) or a list of [k, re, im] with k >= 0;
// the k < 0 coefficients are the conjugates, so the curve is real.
AnalyticLine read_line(const Reader& r, const std::string& key, double fallback, int K) {
    const Value* v = r.find("problem", key);
    if (!v) return AnalyticLine::constant(fallback, K);
    if (std::holds_alternative<double>(v->data)) return AnalyticLine::constant(std::get<double>(v->data), K);
    if (!std::holds_alternative<Value::Array>(v->data)) r.error("problem", key, "must be a number or a list of [k, re, im]");
    AnalyticLine line(K);
    std::set<int> seen;
    for (const auto& item : std::get<Value::Array>(v->data)) {
        const auto* t = std::get_if<Value::Array>(&item.data);
        if (!t || t->size() != 3 || !std::holds_alternative<double>((*t)[0].data) ||
            !std::holds_alternative<double>((*t)[1].data) || !std::holds_alternative<double>((*t)[2].data)) {
            r.error("problem", key, "entries must be [k, re, im] triples of numbers");
        }
        const double kd = std::get<double>((*t)[0].data);
        const int k = static_cast<int>(kd);
        if (kd != k || k < 0) r.error("problem", key, "wavenumbers must be nonnegative integers");
        if (k > K) r.error("problem", key, "wavenumber " + std::to_string(k) + " exceeds K = " + std::to_string(K));
        if (!seen.insert(k).second) r.error("problem", key, "repeats wavenumber " + std::to_string(k));
        const Complex c(std::get<double>((*t)[1].data), std::get<double>((*t)[2].data));
        if (k == 0) {
            if (c.imag() != 0.0) r.error("problem", key, "k = 0 coefficient must be real");
            line[0] = c;
        } else {
            line[k] = c;
            line[-k] = std::conj(c);
        }
    }
    return line;
}

VorticityProfile read_vorticity(const Reader& r, int n_psi, int m) {
    VorticityProfile F = VorticityProfile::zero(n_psi, m);
    const Value* v = r.find("problem", "vorticity");
    if (!v) return F;
    if (std::holds_alternative<double>(v->data)) {
        std::fill(F.values.begin(), F.values.end(), std::get<double>(v->data));
        return F;
    }
    const auto* arr = std::get_if<Value::Array>(&v->data);
    if (!arr) r.error("problem", "vorticity", "must be a number or a list of n_psi + 1 samples");
    if (arr->size() != static_cast<std::size_t>(n_psi + 1)) {
        r.error("problem", "vorticity", "has " + std::to_string(arr->size()) + " samples, expected n_psi + 1 = " +
                                            std::to_string(n_psi + 1));
    }
    for (std::size_t j = 0; j < arr->size(); ++j) {
        if (!std::holds_alternative<double>((*arr)[j].data)) r.error("problem", "vorticity", "samples must be numbers");
        F.values[j] = std::get<double>((*arr)[j].data);
    }
    return F;
}

std::string resolve(const std::string& base_dir, const std::string& p) {
    if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

Document parse_document(const std::string& text, const std::string& source) {
    Document doc;
    std::string section;
    std::string pending;
    int pending_line = 0;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string line = trim(strip_comment(raw));

        if (!pending.empty()) {
            pending += " " + line;
            if (bracket_depth(pending) > 0) continue;
            line = pending;
            pending.clear();
        } else {
            if (line.empty()) continue;
            pending_line = line_no;
            if (line.front() == '[' && line.find('=') == std::string::npos) {
                if (line.back() != ']') fail(source, line_no, "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!kSections.count(section)) fail(source, line_no, "unknown section [" + section + "]");
                if (doc.count(section)) fail(source, line_no, "duplicate section [" + section + "]");
                doc[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq != std::string::npos && bracket_depth(line.substr(eq + 1)) > 0) {
                pending = line;
                continue;
            }
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(source, pending_line, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) fail(source, pending_line, "missing key");
        for (const char c : key) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') fail(source, pending_line, "invalid key '" + key + "'");
        }
        if (section.empty()) fail(source, pending_line, "key '" + key + "' outside any section");
        if (!kKeys.at(section).count(key)) fail(source, pending_line, "unknown key '" + key + "' in [" + section + "]");
        if (doc[section].count(key)) fail(source, pending_line, "duplicate key '" + key + "' in [" + section + "]");
        doc[section][key] = ValueParser(trim(line.substr(eq + 1)), source, pending_line).parse();
    }
    if (!pending.empty()) fail(source, pending_line, "unterminated array");
    return doc;
}

std::optional<std::pair<Oracle, double>> parse_preset(const std::string& name) {
    if (name == "parallel") return std::pair{Oracle::parallel, 0.0};
    for (const auto& [prefix, kind] : {std::pair{std::string("shear-"), Oracle::shear},
                                       std::pair{std::string("harmonic-"), Oracle::harmonic}}) {
        if (name.rfind(prefix, 0) != 0) continue;
        const std::string tail = name.substr(prefix.size());
        char* end = nullptr;
        const double eps = std::strtod(tail.c_str(), &end);
        if (tail.empty() || *end != '\0' || !std::isfinite(eps)) return std::nullopt;
        return std::pair{kind, eps};
    }
    return std::nullopt;
}

RunConfig parse_config(const std::string& text, const std::string& source, const std::string& base_dir) {
    const Document doc = parse_document(text, source);
    const Reader r(doc, source);
    RunConfig cfg;
    cfg.source = source;

    const double sigma = r.number("space", "sigma", 0.1);
    if (!(sigma > 0.0)) r.error("space", "sigma", "must be positive");
    const int m = r.integer("space", "m", 2);
    if (m < 2 || m > 4) r.error("space", "m", "must lie in [2, 4]");

    const int K = r.integer("resolution", "K", 64);
    if (K < 1 || K > 4096) r.error("resolution", "K", "must lie in [1, 4096]");
    const int n_psi = r.integer("resolution", "n_psi", 128);
    if (n_psi < 5 || n_psi > 8192) r.error("resolution", "n_psi", "must lie in [5, 8192]");
    cfg.ny = r.integer("resolution", "ny", 128);
    if (cfg.ny < physical::kMinVerifyNy) {
        r.error("resolution", "ny", "must be at least " + std::to_string(physical::kMinVerifyNy));
    }

    newton::SolverOptions opt;
    opt.tol_res = r.number("solver", "tol_res", opt.tol_res);
    if (!(opt.tol_res > 0.0)) r.error("solver", "tol_res", "must be positive");
    opt.tol_step = r.number("solver", "tol_step", opt.tol_step);
    if (!(opt.tol_step > 0.0)) r.error("solver", "tol_step", "must be positive");
    opt.max_iter = r.integer("solver", "max_iter", opt.max_iter);
    if (opt.max_iter < 0) r.error("solver", "max_iter", "must be nonnegative");
    opt.ellipticity_floor = r.number("solver", "ellipticity_floor", opt.ellipticity_floor);
    if (!(opt.ellipticity_floor > 0.0)) r.error("solver", "ellipticity_floor", "must be positive");
    opt.radius = r.number("solver", "radius", opt.radius);
    if (!(opt.radius > 0.0)) r.error("solver", "radius", "must be positive");
    cfg.continuation_steps = r.integer("solver", "continuation_steps", 1);
    if (cfg.continuation_steps < 1) r.error("solver", "continuation_steps", "must be at least 1");
    cfg.verify_threshold = r.number("solver", "verify_threshold", cfg.verify_threshold);
    if (!(cfg.verify_threshold > 0.0)) r.error("solver", "verify_threshold", "must be positive");

    const SpaceParams space(sigma, m);
    const presets::Resolution res{K, n_psi};
    const std::string preset = r.string("problem", "preset", "");
    if (!preset.empty()) {
        for (const char* key : {"lower", "upper", "vorticity"}) {
            if (r.find("problem", key)) r.error("problem", key, "cannot be combined with a preset");
        }
        const auto parsed = parse_preset(preset);
        if (!parsed) r.error("problem", "preset", "'" + preset + "' is not parallel, shear-<eps> or harmonic-<eps>");
        cfg.oracle = parsed->first;
        cfg.preset_eps = parsed->second;
        try {
            switch (cfg.oracle) {
                case Oracle::parallel: cfg.problem = presets::parallel(res, space); break;
                case Oracle::shear: cfg.problem = presets::shear(cfg.preset_eps, res, space); break;
                case Oracle::harmonic: cfg.problem = presets::harmonic(cfg.preset_eps, res, space); break;
                case Oracle::none: break;
            }
        } catch (const DomainError& e) {
            r.error("problem", "preset", e.what());
        }
    } else {
        cfg.problem.K = K;
        cfg.problem.n_psi = n_psi;
        cfg.problem.space = space;
        cfg.problem.lower = read_line(r, "lower", 0.0, K);
        cfg.problem.upper = read_line(r, "upper", 1.0, K);
        cfg.problem.vorticity = read_vorticity(r, n_psi, m);
    }
    cfg.problem.options = opt;
    try {
        cfg.problem.validate();
    } catch (const Error& e) {
        fail(source, r.line("problem", preset.empty() ? "upper" : "preset"), e.what());
    }

    cfg.outputs.solution = resolve(base_dir, r.string("output", "solution", "solution.json"));
    cfg.outputs.report = resolve(base_dir, r.string("output", "report", "report.json"));
    cfg.outputs.family_csv = resolve(base_dir, r.string("output", "family_csv", ""));
    cfg.outputs.velocity_csv = resolve(base_dir, r.string("output", "velocity_csv", ""));
    cfg.outputs.field_csv = resolve(base_dir, r.string("output", "field_csv", ""));
    cfg.outputs.verification = resolve(base_dir, r.string("output", "verification", ""));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_config(text, path, dir);
}

}  // namespace flowlines::cli

// config.hpp: JSON run configuration (schema version 1).
//
//   {
//     "version": 1,
//     "command": "pe-series",
//     "model": {"l": 2, "g": 1, "omega0": 1, "omega": 1, "alpha": 7},
//     "thermal": {"inv_beta": [0.1]},
//     "grid": {"t_start": 0, "t_stop": 10, "dt": 0.01},
//     "truncation": {"n_max": 110, "adaptive": false, "tail_tol": 1e-10, "n_fock": 0},
//     "oracle": {"enabled": false, "max_alpha": 2.5},
//     "validation": {"theta": [...], "times": [0.5]},
//     "output": {"path": "", "format": "csv"}
//   }
//
// "alpha" is a number or a [re, im] pair. "dt" and "t_stop" may be null:
// dt then defaults per command, t_stop to a multiple of T′₀.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfjc/errors.hpp"
#include "tfjc/model.hpp"
#include "tfjc/perturbation.hpp"

namespace tfjc::cli {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct ModelSection {
    int l = 1;
    double g = 1.0;
    double omega0 = 1.0;
    double omega = 1.0;
    complex alpha{1.0, 0.0};
    bool operator==(const ModelSection&) const = default;
};

struct GridSection {
    double t_start = 0.0;
    std::optional<double> t_stop;
    std::optional<double> dt;
    bool operator==(const GridSection&) const = default;
};

struct TruncationSection {
    std::size_t n_max = 250;
    bool adaptive = false;
    double tail_tol = 1e-10;
    /// 0 selects the automatic oracle cutoff.
    std::size_t n_fock = 0;
    bool operator==(const TruncationSection&) const = default;
};

struct OracleSection {
    bool enabled = false;
    double max_alpha = 2.5;
    bool operator==(const OracleSection&) const = default;
};

struct ValidationSection {
    std::vector<double> theta;
    std::vector<double> times{0.5};
    bool operator==(const ValidationSection&) const = default;
};

struct OutputSection {
    std::string path;
    std::string format = "csv";
    bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
    int version = kSchemaVersion;
    std::string command = "pe-series";
    ModelSection model;
    std::vector<double> inv_beta{0.0};
    GridSection grid;
    TruncationSection truncation;
    OracleSection oracle;
    ValidationSection validation;
    OutputSection output;
    bool operator==(const RunConfig&) const = default;

    ModelParams params() const {
        return {model.l, model.g, model.omega0, model.omega, model.alpha};
    }
    TruncationPolicy truncation_policy() const {
        return truncation.adaptive ? TruncationPolicy::adaptive_for(params(), truncation.tail_tol)
                                   : TruncationPolicy::fixed(truncation.n_max, truncation.tail_tol);
    }
};

inline const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> c = {"pe-series", "period-sweep", "coherence-map",
                                               "oracle-validate", "approx-check"};
    return c;
}

namespace detail {

inline std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

[[noreturn]] inline void field_error(const std::string& path, const std::string& msg) {
    throw ConfigError("config field '" + path + "': " + msg);
}

inline const json* child(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* key : keys) ok = ok || k == key;
        if (!ok) field_error(join(path, k), "unknown field");
    }
}

inline double get_number(const json& obj, const std::string& path, const std::string& key, double dflt) {
    const json* v = child(obj, key);
    if (!v) return dflt;
    if (!v->is_number()) field_error(join(path, key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) field_error(join(path, key), "expected a finite number");
    return d;
}

inline std::optional<double> get_opt_number(const json& obj, const std::string& path,
                                            const std::string& key, std::optional<double> dflt) {
    const json* v = child(obj, key);
    if (!v) return dflt;
    if (v->is_null()) return std::nullopt;
    return get_number(obj, path, key, 0.0);
}

inline long long get_integer(const json& obj, const std::string& path, const std::string& key, long long dflt) {
    const json* v = child(obj, key);
    if (!v) return dflt;
    if (!v->is_number_integer()) field_error(join(path, key), "expected an integer");
    return v->get<long long>();
}

inline bool get_bool(const json& obj, const std::string& path, const std::string& key, bool dflt) {
    const json* v = child(obj, key);
    if (!v) return dflt;
    if (!v->is_boolean()) field_error(join(path, key), "expected true or false");
    return v->get<bool>();
}

inline std::string get_string(const json& obj, const std::string& path, const std::string& key,
                              const std::string& dflt) {
    const json* v = child(obj, key);
    if (!v) return dflt;
    if (!v->is_string()) field_error(join(path, key), "expected a string");
    return v->get<std::string>();
}

inline std::vector<double> get_number_list(const json& obj, const std::string& path, const std::string& key,
                                           const std::vector<double>& dflt) {
    const json* v = child(obj, key);
    if (!v) return dflt;
    if (!v->is_array()) field_error(join(path, key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& e = (*v)[i];
        if (!e.is_number() || !std::isfinite(e.get<double>()))
            field_error(join(path, key) + "[" + std::to_string(i) + "]", "expected a finite number");
        out.push_back(e.get<double>());
    }
    return out;
}

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace detail

/// Semantic checks shared by parsing and programmatic construction.
inline void validate(const RunConfig& c) {
    using detail::field_error;
    if (c.version != kSchemaVersion) field_error("version", "unsupported schema version");
    bool known = false;
    for (const auto& k : known_commands()) known = known || k == c.command;
    if (!known) field_error("command", "unknown command '" + c.command + "'");
    if (c.model.l < 1) field_error("model.l", "must be >= 1");
    if (!(c.model.g >= 0.0)) field_error("model.g", "must be >= 0");
    if (!(c.model.omega0 > 0.0)) field_error("model.omega0", "must be > 0");
    if (!(c.model.omega > 0.0)) field_error("model.omega", "must be > 0");
    if (c.inv_beta.empty()) field_error("thermal.inv_beta", "must not be empty");
    for (std::size_t i = 0; i < c.inv_beta.size(); ++i)
        if (!(c.inv_beta[i] >= 0.0)) field_error("thermal.inv_beta[" + std::to_string(i) + "]", "must be >= 0");
    if (c.grid.t_stop && *c.grid.t_stop < c.grid.t_start) field_error("grid.t_stop", "must be >= grid.t_start");
    if (c.grid.dt && !(*c.grid.dt > 0.0)) field_error("grid.dt", "must be > 0");
    if (c.truncation.n_max < 1) field_error("truncation.n_max", "must be >= 1");
    if (!(c.truncation.tail_tol > 0.0)) field_error("truncation.tail_tol", "must be > 0");
    if (!(c.oracle.max_alpha >= 0.0)) field_error("oracle.max_alpha", "must be >= 0");
    for (std::size_t i = 0; i < c.validation.theta.size(); ++i)
        if (!(c.validation.theta[i] >= 0.0))
            field_error("validation.theta[" + std::to_string(i) + "]", "must be >= 0");
    if (c.output.format != "csv" && c.output.format != "json")
        field_error("output.format", "must be 'csv' or 'json'");
}

inline RunConfig from_json(const json& j) {
    using namespace detail;
    check_keys(j, "", {"version", "command", "model", "thermal", "grid", "truncation", "oracle",
                       "validation", "output"});
    RunConfig c;
    c.version = static_cast<int>(get_integer(j, "", "version", kSchemaVersion));
    c.command = get_string(j, "", "command", c.command);

    if (const json* m = child(j, "model")) {
        check_keys(*m, "model", {"l", "g", "omega0", "omega", "alpha"});
        c.model.l = static_cast<int>(get_integer(*m, "model", "l", c.model.l));
        c.model.g = get_number(*m, "model", "g", c.model.g);
        c.model.omega0 = get_number(*m, "model", "omega0", c.model.omega0);
        c.model.omega = get_number(*m, "model", "omega", c.model.omega);
        if (const json* a = child(*m, "alpha")) {
            if (a->is_number()) {
                c.model.alpha = {a->get<double>(), 0.0};
            } else if (a->is_array() && a->size() == 2 && (*a)[0].is_number() && (*a)[1].is_number()) {
                c.model.alpha = {(*a)[0].get<double>(), (*a)[1].get<double>()};
            } else {
                field_error("model.alpha", "expected a number or [re, im]");
            }
            if (!std::isfinite(c.model.alpha.real()) || !std::isfinite(c.model.alpha.imag()))
                field_error("model.alpha", "expected finite values");
        }
    }
    if (const json* t = child(j, "thermal")) {
        check_keys(*t, "thermal", {"inv_beta"});
        c.inv_beta = get_number_list(*t, "thermal", "inv_beta", c.inv_beta);
    }
    if (const json* g = child(j, "grid")) {
        check_keys(*g, "grid", {"t_start", "t_stop", "dt"});
        c.grid.t_start = get_number(*g, "grid", "t_start", c.grid.t_start);
        c.grid.t_stop = get_opt_number(*g, "grid", "t_stop", c.grid.t_stop);
        c.grid.dt = get_opt_number(*g, "grid", "dt", c.grid.dt);
    }
    if (const json* t = child(j, "truncation")) {
        check_keys(*t, "truncation", {"n_max", "adaptive", "tail_tol", "n_fock"});
        const auto n = get_integer(*t, "truncation", "n_max", static_cast<long long>(c.truncation.n_max));
        if (n < 1) field_error("truncation.n_max", "must be >= 1");
        c.truncation.n_max = static_cast<std::size_t>(n);
        c.truncation.adaptive = get_bool(*t, "truncation", "adaptive", c.truncation.adaptive);
        c.truncation.tail_tol = get_number(*t, "truncation", "tail_tol", c.truncation.tail_tol);
        const auto nf = get_integer(*t, "truncation", "n_fock", 0);
        if (nf < 0) field_error("truncation.n_fock", "must be >= 0");
        c.truncation.n_fock = static_cast<std::size_t>(nf);
    }
    if (const json* o = child(j, "oracle")) {
        check_keys(*o, "oracle", {"enabled", "max_alpha"});
        c.oracle.enabled = get_bool(*o, "oracle", "enabled", c.oracle.enabled);
        c.oracle.max_alpha = get_number(*o, "oracle", "max_alpha", c.oracle.max_alpha);
    }
    if (const json* v = child(j, "validation")) {
        check_keys(*v, "validation", {"theta", "times"});
        c.validation.theta = get_number_list(*v, "validation", "theta", c.validation.theta);
        c.validation.times = get_number_list(*v, "validation", "times", c.validation.times);
    }
    if (const json* o = child(j, "output")) {
        check_keys(*o, "output", {"path", "format"});
        c.output.path = get_string(*o, "output", "path", c.output.path);
        c.output.format = get_string(*o, "output", "format", c.output.format);
    }
    validate(c);
    return c;
}

/// Parse config text; syntax errors report line and column.
inline RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    return from_json(j);
}

/// Canonical form: every field present, fixed key order.
inline ordered_json to_json(const RunConfig& c) {
    auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    ordered_json j;
    j["version"] = c.version;
    j["command"] = c.command;
    j["model"] = {{"l", c.model.l},
                  {"g", c.model.g},
                  {"omega0", c.model.omega0},
                  {"omega", c.model.omega},
                  {"alpha", {c.model.alpha.real(), c.model.alpha.imag()}}};
    j["thermal"] = {{"inv_beta", c.inv_beta}};
    j["grid"] = {{"t_start", c.grid.t_start}, {"t_stop", opt(c.grid.t_stop)}, {"dt", opt(c.grid.dt)}};
    j["truncation"] = {{"n_max", c.truncation.n_max},
                       {"adaptive", c.truncation.adaptive},
                       {"tail_tol", c.truncation.tail_tol},
                       {"n_fock", c.truncation.n_fock}};
    j["oracle"] = {{"enabled", c.oracle.enabled}, {"max_alpha", c.oracle.max_alpha}};
    j["validation"] = {{"theta", c.validation.theta}, {"times", c.validation.times}};
    j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
    return j;
}

inline std::string serialize(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace tfjc::cli

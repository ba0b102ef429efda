// config.hpp: JSON experiment configuration
//
// Flat schema (see docs/config_schema.md):
//   omega0, omega_c, g                      model
//   topology, gamma_sigma, gamma_a          bath
//   T_sigma, T_a   (IHB)  |  T   (CHB)      bath temperatures
//   n_d                                     dressed-basis truncation
//   sweep   {parameter, start, stop, steps} optional axis
//   series  [{label, <model/bath keys>}]    optional per-series overrides
//   s_values, numeric_oracle                negativity / thermal
//   n_values, levels                        crossover / thermal
//   tol                                     verdict tolerance
//   output, format                          destination

#pragma once

#include "jcthermo/bath.hpp"
#include "jcthermo/eigensystem.hpp"
#include "jcthermo/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace jcthermo::runner {

using json = nlohmann::ordered_json;

enum class OutputFormat { csv, json };

inline std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("field 'format': expected \"csv\" or \"json\", got \"" + std::string(s) + "\"");
}

inline constexpr std::array<std::string_view, 11> kSweepParameters = {
    "omega0", "omega_c", "g", "gamma_sigma", "gamma_a", "T_sigma", "T_a", "T", "T_ref", "g_r", "s"};

struct SweepAxis {
    std::string parameter;
    double start{0.0};
    double stop{0.0};
    int steps{1};

    // Evenly spaced, endpoints included; a single step yields `start`.
    double value(int i) const noexcept {
        if (steps <= 1) return start;
        return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = value(i);
        return v;
    }
    bool operator==(const SweepAxis&) const = default;
};

// One fully resolved model + bath setting.
struct Series {
    std::string label;
    JCParams model;
    std::optional<BathConfig> bath;
    bool operator==(const Series&) const = default;
};

struct ExperimentConfig {
    JCParams model{1.0, 1.0, 0.02};
    std::optional<BathConfig> bath;
    int n_d{17};
    std::optional<SweepAxis> sweep;
    std::vector<Series> series;  // empty: the base setting only
    std::vector<double> s_values{1.2, 1.4, 2.0, 11.0};
    bool numeric_oracle{true};
    std::vector<long long> n_values{0, 1, 2, 5, 10};
    int levels{5};
    double tol{1e-6};
    std::string output;  // empty: stdout
    OutputFormat format{OutputFormat::csv};

    // Series to run; the base setting when none are listed.
    std::vector<Series> resolved_series() const {
        if (!series.empty()) return series;
        return {Series{"", model, bath}};
    }

    bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

inline double number_field(const json& obj, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("field '" + key + "': expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("field '" + key + "': must be finite");
    return x;
}

inline double nonnegative_field(const json& obj, const std::string& key) {
    const double x = number_field(obj, key);
    if (x < 0.0) throw ConfigError("field '" + key + "': must be >= 0");
    return x;
}

inline double positive_field(const json& obj, const std::string& key) {
    const double x = number_field(obj, key);
    if (!(x > 0.0)) throw ConfigError("field '" + key + "': must be > 0");
    return x;
}

inline void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key)) throw ConfigError(where + "field '" + key + "': unknown key");
}

inline const std::set<std::string>& model_bath_keys() {
    static const std::set<std::string> keys = {"omega0",  "omega_c", "g",      "topology", "gamma_sigma",
                                               "gamma_a", "T_sigma", "T_a",    "T"};
    return keys;
}

// Reads model/bath keys from obj on top of the given defaults.
inline void read_model_bath(const json& obj, JCParams& model, std::optional<BathConfig>& bath,
                            const std::string& where) {
    try {
        if (obj.contains("omega0")) model.omega0 = positive_field(obj, "omega0");
        if (obj.contains("omega_c")) model.omega_c = positive_field(obj, "omega_c");
        if (obj.contains("g")) model.g = nonnegative_field(obj, "g");

        const bool touches_bath = obj.contains("topology") || obj.contains("gamma_sigma") ||
                                  obj.contains("gamma_a") || obj.contains("T_sigma") || obj.contains("T_a") ||
                                  obj.contains("T");
        if (!touches_bath) return;

        Topology topo = bath ? bath->topology() : Topology::IHB;
        if (obj.contains("topology")) {
            const auto& t = obj.at("topology");
            if (!t.is_string()) throw ConfigError("field 'topology': expected \"IHB\" or \"CHB\"");
            const auto s = t.get<std::string>();
            if (s == "IHB") topo = Topology::IHB;
            else if (s == "CHB") topo = Topology::CHB;
            else throw ConfigError("field 'topology': expected \"IHB\" or \"CHB\", got \"" + s + "\"");
        } else if (!bath) {
            throw ConfigError("field 'topology': required when bath fields are given");
        }

        BathConfig b = bath.value_or(BathConfig{});
        const bool same_topology = bath && bath->topology() == topo;
        if (obj.contains("gamma_sigma")) b.gamma_sigma = nonnegative_field(obj, "gamma_sigma");
        else if (!bath) throw ConfigError("field 'gamma_sigma': required");
        if (obj.contains("gamma_a")) b.gamma_a = nonnegative_field(obj, "gamma_a");
        else if (!bath) throw ConfigError("field 'gamma_a': required");

        if (topo == Topology::IHB) {
            if (obj.contains("T")) throw ConfigError("field 'T': IHB takes T_sigma and T_a, not T");
            IndividualTemperatures t = same_topology ? std::get<IndividualTemperatures>(b.temps)
                                                     : IndividualTemperatures{-1.0, -1.0};
            if (obj.contains("T_sigma")) t.T_sigma = nonnegative_field(obj, "T_sigma");
            if (obj.contains("T_a")) t.T_a = nonnegative_field(obj, "T_a");
            if (t.T_sigma < 0.0) throw ConfigError("field 'T_sigma': required for IHB");
            if (t.T_a < 0.0) throw ConfigError("field 'T_a': required for IHB");
            b.temps = t;
        } else {
            if (obj.contains("T_sigma") || obj.contains("T_a"))
                throw ConfigError(std::string("field '") + (obj.contains("T_sigma") ? "T_sigma" : "T_a") +
                                  "': CHB takes a single temperature T");
            CommonTemperature t = same_topology ? std::get<CommonTemperature>(b.temps) : CommonTemperature{-1.0};
            if (obj.contains("T")) t.T = nonnegative_field(obj, "T");
            if (t.T < 0.0) throw ConfigError("field 'T': required for CHB");
            b.temps = t;
        }
        bath = b;
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.what());
    }
}

// 1-based line/column of a byte offset, for parse diagnostics.
inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
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

inline ExperimentConfig config_from_json(const json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    std::set<std::string> allowed = detail::model_bath_keys();
    allowed.insert({"n_d", "sweep", "series", "s_values", "numeric_oracle", "n_values", "levels", "tol", "output", "format"});
    detail::check_keys(root, allowed, "");

    ExperimentConfig cfg;
    detail::read_model_bath(root, cfg.model, cfg.bath, "");

    if (root.contains("n_d")) {
        const auto& v = root.at("n_d");
        if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
            throw ConfigError("field 'n_d': expected an integer >= 1");
        cfg.n_d = v.get<int>();
    }
    if (root.contains("sweep")) {
        const auto& s = root.at("sweep");
        if (!s.is_object()) throw ConfigError("field 'sweep': expected an object");
        detail::check_keys(s, {"parameter", "start", "stop", "steps"}, "sweep: ");
        SweepAxis axis;
        if (!s.contains("parameter") || !s.at("parameter").is_string())
            throw ConfigError("field 'sweep.parameter': expected a string");
        axis.parameter = s.at("parameter").get<std::string>();
        if (std::find(kSweepParameters.begin(), kSweepParameters.end(), axis.parameter) == kSweepParameters.end())
            throw ConfigError("field 'sweep.parameter': \"" + axis.parameter + "\" is not a scalar field");
        for (const char* key : {"start", "stop", "steps"})
            if (!s.contains(key)) throw ConfigError(std::string("field 'sweep.") + key + "': required");
        axis.start = detail::number_field(s, "start");
        axis.stop = detail::number_field(s, "stop");
        if (!s.at("steps").is_number_integer() || s.at("steps").get<long long>() < 1 ||
            s.at("steps").get<long long>() > 1000000)
            throw ConfigError("field 'sweep.steps': expected an integer >= 1");
        axis.steps = s.at("steps").get<int>();
        cfg.sweep = axis;
    }
    if (root.contains("series")) {
        const auto& arr = root.at("series");
        if (!arr.is_array()) throw ConfigError("field 'series': expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& item = arr[i];
            const std::string where = "series[" + std::to_string(i) + "]: ";
            if (!item.is_object()) throw ConfigError(where + "expected an object");
            std::set<std::string> keys = detail::model_bath_keys();
            keys.insert("label");
            detail::check_keys(item, keys, where);
            Series s{"", cfg.model, cfg.bath};
            if (item.contains("label")) {
                if (!item.at("label").is_string()) throw ConfigError(where + "field 'label': expected a string");
                s.label = item.at("label").get<std::string>();
            }
            detail::read_model_bath(item, s.model, s.bath, where);
            cfg.series.push_back(std::move(s));
        }
    }
    if (root.contains("s_values")) {
        const auto& arr = root.at("s_values");
        if (!arr.is_array() || arr.empty()) throw ConfigError("field 's_values': expected a non-empty array");
        cfg.s_values.clear();
        for (const auto& v : arr) {
            if (!v.is_number() || !(v.get<double>() > 0.0))
                throw ConfigError("field 's_values': entries must be numbers > 0");
            cfg.s_values.push_back(v.get<double>());
        }
    }
    if (root.contains("numeric_oracle")) {
        if (!root.at("numeric_oracle").is_boolean()) throw ConfigError("field 'numeric_oracle': expected a boolean");
        cfg.numeric_oracle = root.at("numeric_oracle").get<bool>();
    }
    if (root.contains("n_values")) {
        const auto& arr = root.at("n_values");
        if (!arr.is_array() || arr.empty()) throw ConfigError("field 'n_values': expected a non-empty array");
        cfg.n_values.clear();
        for (const auto& v : arr) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ConfigError("field 'n_values': entries must be integers >= 0");
            cfg.n_values.push_back(v.get<long long>());
        }
    }
    if (root.contains("levels")) {
        const auto& v = root.at("levels");
        if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
            throw ConfigError("field 'levels': expected an integer >= 1");
        cfg.levels = v.get<int>();
    }
    if (root.contains("tol")) cfg.tol = detail::positive_field(root, "tol");
    if (root.contains("output")) {
        if (!root.at("output").is_string()) throw ConfigError("field 'output': expected a string path");
        cfg.output = root.at("output").get<std::string>();
    }
    if (root.contains("format")) {
        if (!root.at("format").is_string()) throw ConfigError("field 'format': expected a string");
        cfg.format = parse_format(root.at("format").get<std::string>());
    }
    return cfg;
}

inline ExperimentConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    return config_from_json(root);
}

namespace detail {
inline void write_model_bath(json& out, const JCParams& model, const std::optional<BathConfig>& bath) {
    out["omega0"] = model.omega0;
    out["omega_c"] = model.omega_c;
    out["g"] = model.g;
    if (!bath) return;
    out["topology"] = std::string(to_string(bath->topology()));
    out["gamma_sigma"] = bath->gamma_sigma;
    out["gamma_a"] = bath->gamma_a;
    if (bath->topology() == Topology::IHB) {
        out["T_sigma"] = bath->T_sigma();
        out["T_a"] = bath->T_a();
    } else {
        out["T"] = bath->T_sigma();
    }
}
}  // namespace detail

// Inverse of config_from_json: config_from_json(config_to_json(c)) == c.
inline json config_to_json(const ExperimentConfig& cfg) {
    json out = json::object();
    detail::write_model_bath(out, cfg.model, cfg.bath);
    out["n_d"] = cfg.n_d;
    if (cfg.sweep) {
        out["sweep"] = {{"parameter", cfg.sweep->parameter},
                        {"start", cfg.sweep->start},
                        {"stop", cfg.sweep->stop},
                        {"steps", cfg.sweep->steps}};
    }
    if (!cfg.series.empty()) {
        json arr = json::array();
        for (const auto& s : cfg.series) {
            json item = json::object();
            item["label"] = s.label;
            detail::write_model_bath(item, s.model, s.bath);
            arr.push_back(std::move(item));
        }
        out["series"] = std::move(arr);
    }
    out["s_values"] = cfg.s_values;
    out["numeric_oracle"] = cfg.numeric_oracle;
    out["n_values"] = cfg.n_values;
    out["levels"] = cfg.levels;
    out["tol"] = cfg.tol;
    out["output"] = cfg.output;
    out["format"] = std::string(to_string(cfg.format));
    return out;
}

}  // namespace jcthermo::runner

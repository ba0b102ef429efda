// commands.hpp: one function per CLI subcommand, config in, table out

#pragma once

#include "jcthermo/diagnostics.hpp"
#include "jcthermo/negativity.hpp"
#include "jcthermo/rate_graph.hpp"
#include "jcthermo/runner/config.hpp"
#include "jcthermo/runner/parallel.hpp"
#include "jcthermo/runner/result_table.hpp"
#include "jcthermo/version.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace jcthermo::runner {

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline json base_metadata(std::string_view command, const ExperimentConfig& cfg) {
    json m = json::object();
    m["command"] = std::string(command);
    m["version"] = std::string(kVersion);
    m["config"] = config_to_json(cfg);
    return m;
}

// Writes `value` into the named model/bath field of s. "T" on an IHB bath
// moves both temperatures together.
inline void apply_parameter(Series& s, const std::string& name, double value) {
    auto need_bath = [&]() -> BathConfig& {
        if (!s.bath) throw ConfigError("field 'sweep.parameter': \"" + name + "\" needs a bath");
        return *s.bath;
    };
    if (name == "omega0") s.model.omega0 = value;
    else if (name == "omega_c") s.model.omega_c = value;
    else if (name == "g") s.model.g = value;
    else if (name == "gamma_sigma") need_bath().gamma_sigma = value;
    else if (name == "gamma_a") need_bath().gamma_a = value;
    else if (name == "T_sigma" || name == "T_a") {
        BathConfig& b = need_bath();
        auto* t = std::get_if<IndividualTemperatures>(&b.temps);
        if (!t) throw ConfigError("field 'sweep.parameter': \"" + name + "\" needs an IHB bath");
        (name == "T_sigma" ? t->T_sigma : t->T_a) = value;
    } else if (name == "T") {
        BathConfig& b = need_bath();
        if (auto* c = std::get_if<CommonTemperature>(&b.temps)) c->T = value;
        else b.temps = IndividualTemperatures{value, value};
    } else {
        throw ConfigError("field 'sweep.parameter': \"" + name + "\" cannot be swept by this command");
    }
    try {
        s.model.validate();
        if (s.bath) s.bath->validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("field 'sweep.parameter': value " + format_number(value) + " for \"" + name +
                          "\" is invalid: " + e.what());
    }
}

struct Point {
    std::size_t series;
    std::optional<double> sweep_value;
    Series setting;
};

// Cartesian product series × sweep, series-major.
inline std::vector<Point> expand(const ExperimentConfig& cfg) {
    std::vector<Point> pts;
    const auto series = cfg.resolved_series();
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!series[i].bath) throw ConfigError("field 'topology': a bath is required for this command");
        if (!cfg.sweep) {
            pts.push_back({i, std::nullopt, series[i]});
            continue;
        }
        for (double v : cfg.sweep->values()) {
            Series s = series[i];
            apply_parameter(s, cfg.sweep->parameter, v);
            pts.push_back({i, v, std::move(s)});
        }
    }
    return pts;
}

struct SteadyPoint {
    LevelSet levels;
    PopulationVector pop;
    Verdict verdict;
};

inline SteadyPoint solve_point(const Series& s, int n_d, double tol) {
    RateGraph graph = build_rate_graph(s.model, *s.bath, n_d);
    PopulationVector pop = steady_state(graph);
    Verdict v = thermalization_verdict(pop, graph.levels, tol);
    return {std::move(graph.levels), std::move(pop), v};
}

inline void note_truncation(json& metadata, const PopulationVector& pop, const Series& s) {
    const TruncationCheck tc = truncation_adequacy(pop);
    if (tc.adequate) return;
    if (!metadata.contains("warnings")) metadata["warnings"] = json::array();
    metadata["warnings"].push_back("series '" + s.label + "': top-subspace population " +
                                   format_number(tc.top_population) + " exceeds " +
                                   format_number(kTruncationAdequacyLimit) + ", consider a larger n_d");
}

inline json verdict_json(const Verdict& v) {
    json j = json::object();
    j["thermalized"] = v.thermalized;
    j["T_star"] = v.T_star ? json(*v.T_star) : json(nullptr);
    j["spread"] = std::isfinite(v.spread) ? json(v.spread) : json(nullptr);
    return j;
}

inline void push_point_keys(ResultTable& t, const ExperimentConfig& cfg, const Point& p) {
    t.columns[0].cells.emplace_back(p.setting.label);
    if (cfg.sweep) t.columns[1].cells.emplace_back(*p.sweep_value);
}

inline void add_point_columns(ResultTable& t, const ExperimentConfig& cfg) {
    t.add_column("series");
    if (cfg.sweep) t.add_column(cfg.sweep->parameter);
}

}  // namespace detail

// Steady-state populations per level; verdicts go to metadata.summary.
inline ResultTable cmd_steady(const ExperimentConfig& cfg) {
    if (cfg.sweep && cfg.sweep->parameter == "T_ref")
        throw ConfigError("field 'sweep.parameter': \"T_ref\" is only meaningful for tracedist");
    const auto pts = detail::expand(cfg);
    const auto res = parallel_map<detail::SteadyPoint>(
        pts.size(), [&](std::size_t i) { return detail::solve_point(pts[i].setting, cfg.n_d, cfg.tol); });

    ResultTable t;
    t.metadata = detail::base_metadata("steady", cfg);
    detail::add_point_columns(t, cfg);
    for (const char* name : {"k", "n", "branch", "energy", "population"}) t.add_column(name);
    const std::size_t off = cfg.sweep ? 2 : 1;
    json summary = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& r = res[i];
        for (std::size_t k = 0; k < r.levels.size(); ++k) {
            const DressedLevel& lv = r.levels.at_offset(k);
            detail::push_point_keys(t, cfg, pts[i]);
            t.columns[off + 0].cells.emplace_back(static_cast<long long>(k + 1));
            t.columns[off + 1].cells.emplace_back(static_cast<long long>(lv.n));
            t.columns[off + 2].cells.emplace_back(std::string(to_string(lv.branch)));
            t.columns[off + 3].cells.emplace_back(lv.energy);
            t.columns[off + 4].cells.emplace_back(r.pop.p(static_cast<Eigen::Index>(k)));
        }
        json row = json::object();
        row["series"] = pts[i].setting.label;
        if (cfg.sweep) row[cfg.sweep->parameter] = *pts[i].sweep_value;
        row["verdict"] = detail::verdict_json(r.verdict);
        row["top_subspace_population"] = truncation_adequacy(r.pop).top_population;
        summary.push_back(std::move(row));
        detail::note_truncation(t.metadata, r.pop, pts[i].setting);
    }
    t.metadata["summary"] = std::move(summary);
    return t;
}

// Long-format effective-temperature grid: one row per ordered pair (m, n).
inline ResultTable cmd_teff(const ExperimentConfig& cfg) {
    if (cfg.sweep && cfg.sweep->parameter == "T_ref")
        throw ConfigError("field 'sweep.parameter': \"T_ref\" is only meaningful for tracedist");
    const auto pts = detail::expand(cfg);
    const auto res = parallel_map<detail::SteadyPoint>(
        pts.size(), [&](std::size_t i) { return detail::solve_point(pts[i].setting, cfg.n_d, cfg.tol); });

    ResultTable t;
    t.metadata = detail::base_metadata("teff", cfg);
    detail::add_point_columns(t, cfg);
    for (const char* name : {"m", "n", "T_eff", "masked", "mask"}) t.add_column(name);
    const std::size_t off = cfg.sweep ? 2 : 1;
    json summary = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto grid = effective_temperatures(res[i].pop, res[i].levels);
        for (Eigen::Index m = 0; m < grid.size(); ++m) {
            for (Eigen::Index n = 0; n < grid.size(); ++n) {
                detail::push_point_keys(t, cfg, pts[i]);
                t.columns[off + 0].cells.emplace_back(static_cast<long long>(m + 1));
                t.columns[off + 1].cells.emplace_back(static_cast<long long>(n + 1));
                t.columns[off + 2].cells.emplace_back(grid.values(m, n));
                t.columns[off + 3].cells.emplace_back(grid.valid(m, n) ? 0LL : 1LL);
                t.columns[off + 4].cells.emplace_back(std::string(to_string(grid.mask(m, n))));
            }
        }
        json row = json::object();
        row["series"] = pts[i].setting.label;
        if (cfg.sweep) row[cfg.sweep->parameter] = *pts[i].sweep_value;
        row["verdict"] = detail::verdict_json(res[i].verdict);
        if (const auto r = grid.range()) row["T_eff_range"] = {r->first, r->second};
        summary.push_back(std::move(row));
        detail::note_truncation(t.metadata, res[i].pop, pts[i].setting);
    }
    t.metadata["summary"] = std::move(summary);
    return t;
}

// D(ρ_ss, ρ_th(T_ref)) along a T_ref sweep, one block of rows per series.
inline ResultTable cmd_tracedist(const ExperimentConfig& cfg) {
    if (!cfg.sweep || cfg.sweep->parameter != "T_ref")
        throw ConfigError("field 'sweep.parameter': tracedist needs a sweep over \"T_ref\"");
    if (cfg.sweep->start < 0.0 || cfg.sweep->stop < 0.0)
        throw ConfigError("field 'sweep.start': T_ref must be >= 0");
    const auto series = cfg.resolved_series();
    for (const auto& s : series)
        if (!s.bath) throw ConfigError("field 'topology': a bath is required for this command");
    const auto steady = parallel_map<detail::SteadyPoint>(
        series.size(), [&](std::size_t i) { return detail::solve_point(series[i], cfg.n_d, cfg.tol); });

    const auto temps = cfg.sweep->values();
    const std::size_t per = temps.size();
    const auto dist = parallel_map<double>(series.size() * per, [&](std::size_t idx) {
        const auto& r = steady[idx / per];
        const double T = temps[idx % per];
        if (T == 0.0) return trace_distance_diag(r.pop, ground_state_populations(r.pop.n_d));
        return trace_distance_diag(r.pop, gibbs_state(r.levels, T));
    });

    ResultTable t;
    t.metadata = detail::base_metadata("tracedist", cfg);
    for (const char* name : {"series", "label", "T_ref", "D"}) t.add_column(name);
    json summary = json::array();
    for (std::size_t i = 0; i < series.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        double best_T = detail::kNaN;
        for (std::size_t j = 0; j < per; ++j) {
            const double d = dist[i * per + j];
            t.columns[0].cells.emplace_back(static_cast<long long>(i));
            t.columns[1].cells.emplace_back(series[i].label);
            t.columns[2].cells.emplace_back(temps[j]);
            t.columns[3].cells.emplace_back(d);
            if (d < best) {
                best = d;
                best_T = temps[j];
            }
        }
        summary.push_back({{"series", series[i].label}, {"min_D", best}, {"argmin_T_ref", best_T}});
        detail::note_truncation(t.metadata, steady[i].pop, series[i]);
    }
    t.metadata["summary"] = std::move(summary);
    return t;
}

inline SweepAxis default_g_r_axis() { return SweepAxis{"g_r", 0.1, 3.0, 30}; }

inline SweepAxis g_r_axis(const ExperimentConfig& cfg, std::string_view command) {
    if (!cfg.sweep) return default_g_r_axis();
    if (cfg.sweep->parameter != "g_r")
        throw ConfigError("field 'sweep.parameter': " + std::string(command) + " sweeps \"g_r\" only");
    if (!(cfg.sweep->start > 0.0) || !(cfg.sweep->stop > 0.0))
        throw ConfigError("field 'sweep.start': g_r must be > 0");
    return *cfg.sweep;
}

struct NegativityRow {
    double s, g_r, analytic, numeric;
    long long n0;
    int n_max;
};

inline long long crossover_cell(const Crossover& c) { return c.finite() ? c.n0 : -1; }

// Resonant thermal-state negativity per (s, g_r). The numeric column is the
// dense partial-transpose oracle at dim = 2 n_max + 2.
inline ResultTable cmd_negativity(const ExperimentConfig& cfg) {
    const SweepAxis axis = g_r_axis(cfg, "negativity");
    const auto grid = axis.values();
    const std::size_t per = grid.size();
    const auto rows = parallel_map<NegativityRow>(cfg.s_values.size() * per, [&](std::size_t idx) {
        const double s = cfg.s_values[idx / per];
        const double g_r = grid[idx % per];
        const auto pt = from_relative_coupling(s, g_r);
        const NegativityResult a = log_negativity_analytic(pt.params, pt.T);
        double numeric = detail::kNaN;
        if (cfg.numeric_oracle) numeric = log_negativity_numeric(pt.params, pt.T, 2 * a.n_max + 2).log_negativity;
        return NegativityRow{s, g_r, a.log_negativity, numeric, crossover_cell(a.crossover), a.n_max};
    });

    ResultTable t;
    t.metadata = detail::base_metadata("negativity", cfg);
    for (const char* name : {"s", "g_r", "N_analytic", "N_numeric", "n_0", "n_max"}) t.add_column(name);
    double worst = 0.0;
    for (const auto& r : rows) {
        t.columns[0].cells.emplace_back(r.s);
        t.columns[1].cells.emplace_back(r.g_r);
        t.columns[2].cells.emplace_back(r.analytic);
        t.columns[3].cells.emplace_back(r.numeric);
        t.columns[4].cells.emplace_back(r.n0);
        t.columns[5].cells.emplace_back(static_cast<long long>(r.n_max));
        if (std::isfinite(r.numeric)) worst = std::max(worst, std::abs(r.analytic - r.numeric));
    }
    t.metadata["summary"] = {{"max_abs_analytic_minus_numeric", cfg.numeric_oracle ? json(worst) : json(nullptr)}};
    return t;
}

inline constexpr std::array<double, 9> kTable1Couplings = {0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4};
inline constexpr double kTable1S = 11.0;

// n_0 + 2 and n_max at s = 11 for the nine tabulated couplings.
inline ResultTable cmd_table1(const ExperimentConfig& cfg = {}) {
    struct Row {
        long long n0_plus_2;
        int n_max;
    };
    const auto rows = parallel_map<Row>(kTable1Couplings.size(), [](std::size_t i) {
        const double g_r = kTable1Couplings[i];
        const auto pt = from_relative_coupling(kTable1S, g_r);
        const Crossover c = crossover_index(g_r);
        return Row{c.finite() ? c.n0 + 2 : -1, truncation_index(pt.params, pt.T)};
    });

    ResultTable t;
    t.metadata = detail::base_metadata("table1", cfg);
    t.metadata["s"] = kTable1S;
    for (const char* name : {"g_r", "n0_plus_2", "n_max"}) t.add_column(name);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        t.columns[0].cells.emplace_back(kTable1Couplings[i]);
        t.columns[1].cells.emplace_back(rows[i].n0_plus_2);
        t.columns[2].cells.emplace_back(static_cast<long long>(rows[i].n_max));
    }
    return t;
}

// F_n(g_r) for each n in n_values along a g_r sweep.
inline ResultTable cmd_crossover(const ExperimentConfig& cfg) {
    const SweepAxis axis = g_r_axis(cfg, "crossover");
    ResultTable t;
    t.metadata = detail::base_metadata("crossover", cfg);
    for (const char* name : {"n", "g_r", "F_n"}) t.add_column(name);
    for (long long n : cfg.n_values) {
        for (double g_r : axis.values()) {
            t.columns[0].cells.emplace_back(n);
            t.columns[1].cells.emplace_back(g_r);
            t.columns[2].cells.emplace_back(f_condition(n, g_r));
        }
    }
    return t;
}

// Thermal populations p_1..p_levels versus g_r for each s.
inline ResultTable cmd_thermal(const ExperimentConfig& cfg) {
    const SweepAxis axis = g_r_axis(cfg, "thermal");
    const auto grid = axis.values();
    const std::size_t per = grid.size();
    const auto pops = parallel_map<std::vector<double>>(cfg.s_values.size() * per, [&](std::size_t idx) {
        const auto pt = from_relative_coupling(cfg.s_values[idx / per], grid[idx % per]);
        auto p = jcthermo::detail::thermal_populations_untruncated(pt.params, pt.T, kTruncationThreshold);
        p.resize(static_cast<std::size_t>(cfg.levels), 0.0);
        return p;
    });

    ResultTable t;
    t.metadata = detail::base_metadata("thermal", cfg);
    for (const char* name : {"s", "g_r", "k", "p_k"}) t.add_column(name);
    for (std::size_t idx = 0; idx < pops.size(); ++idx) {
        for (std::size_t k = 0; k < pops[idx].size(); ++k) {
            t.columns[0].cells.emplace_back(cfg.s_values[idx / per]);
            t.columns[1].cells.emplace_back(grid[idx % per]);
            t.columns[2].cells.emplace_back(static_cast<long long>(k + 1));
            t.columns[3].cells.emplace_back(pops[idx][k]);
        }
    }
    return t;
}

}  // namespace jcthermo::runner

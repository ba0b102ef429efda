// diagnostics.hpp: how thermal is a steady state?
//
// Effective temperatures per level pair, truncated Gibbs references, the
// trace distance between commuting (diagonal) states, and a verdict.

#pragma once

#include "jcthermo/eigensystem.hpp"
#include "jcthermo/rate_graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace jcthermo {

enum class PairMask : unsigned char {
    valid,
    diagonal,         // m == n
    zero_population,  // p_m or p_n not strictly positive
    infinite,         // |p_m - p_n| below resolution: T_eff diverges
    degenerate        // ω_mn == 0
};

inline std::string_view to_string(PairMask m) noexcept {
    switch (m) {
        case PairMask::valid: return "valid";
        case PairMask::diagonal: return "diagonal";
        case PairMask::zero_population: return "zero_population";
        case PairMask::infinite: return "infinite";
        case PairMask::degenerate: return "degenerate";
    }
    return "?";
}

struct EffectiveTemperatureGrid {
    Eigen::MatrixXd values;  // NaN where masked
    Eigen::Matrix<PairMask, Eigen::Dynamic, Eigen::Dynamic> mask;

    Eigen::Index size() const noexcept { return values.rows(); }
    bool valid(Eigen::Index m, Eigen::Index n) const { return mask(m, n) == PairMask::valid; }

    // (min, max) over unmasked entries; nullopt when everything is masked.
    std::optional<std::pair<double, double>> range() const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        bool any = false;
        for (Eigen::Index m = 0; m < size(); ++m)
            for (Eigen::Index n = 0; n < size(); ++n)
                if (valid(m, n)) {
                    any = true;
                    lo = std::min(lo, values(m, n));
                    hi = std::max(hi, values(m, n));
                }
        if (!any) return std::nullopt;
        return std::make_pair(lo, hi);
    }
};

inline constexpr double kEqualPopulationResolution = 1e-15;

// T_eff(ω_mn) = (E_m - E_n) / ln(p_n / p_m), positive for a Gibbs vector.
inline EffectiveTemperatureGrid effective_temperatures(const PopulationVector& pop, const LevelSet& levels) {
    const auto dim = static_cast<Eigen::Index>(levels.size());
    if (pop.p.size() != dim) throw std::invalid_argument("effective_temperatures: dimension mismatch");

    EffectiveTemperatureGrid grid;
    grid.values = Eigen::MatrixXd::Constant(dim, dim, std::numeric_limits<double>::quiet_NaN());
    grid.mask.resize(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            const double pm = pop.p(m);
            const double pn = pop.p(n);
            const double omega = levels.at_offset(static_cast<std::size_t>(m)).energy -
                                 levels.at_offset(static_cast<std::size_t>(n)).energy;
            PairMask& mk = grid.mask(m, n);
            if (m == n) {
                mk = PairMask::diagonal;
            } else if (!(pm > 0.0) || !(pn > 0.0)) {
                mk = PairMask::zero_population;
            } else if (std::abs(pm - pn) < kEqualPopulationResolution) {
                mk = PairMask::infinite;
            } else if (omega == 0.0) {
                mk = PairMask::degenerate;
            } else {
                mk = PairMask::valid;
                grid.values(m, n) = omega / std::log(pn / pm);
            }
        }
    }
    return grid;
}

struct GibbsState {
    double T{0.0};
    PopulationVector populations;
    double log_Z{0.0};  // log of the truncated partition function Σ_k e^{-E_k/T}

    double Z() const noexcept { return std::exp(log_Z); }
};

inline GibbsState gibbs_state(const LevelSet& levels, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("gibbs_state: T must be > 0");
    const auto dim = static_cast<Eigen::Index>(levels.size());
    double e_min = std::numeric_limits<double>::infinity();
    for (const auto& lv : levels.levels) e_min = std::min(e_min, lv.energy);

    Eigen::VectorXd w(dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        w(k) = std::exp(-(levels.at_offset(static_cast<std::size_t>(k)).energy - e_min) / T);
    const double s = w.sum();
    return GibbsState{T, PopulationVector{w / s, levels.n_d}, std::log(s) - e_min / T};
}

inline GibbsState gibbs_state(const JCParams& params, double T, int n_d) {
    return gibbs_state(enumerate_levels(params, n_d), T);
}

// The T = 0 reference: all weight on |E_1⟩.
inline PopulationVector ground_state_populations(int n_d) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(2 * n_d + 1);
    p(0) = 1.0;
    return PopulationVector{std::move(p), n_d};
}

inline double trace_distance_diag(const PopulationVector& p, const PopulationVector& q) {
    if (p.n_d != q.n_d || p.p.size() != q.p.size())
        throw std::invalid_argument("trace_distance_diag: truncation mismatch");
    return 0.5 * (p.p - q.p).cwiseAbs().sum();
}

inline double trace_distance_diag(const PopulationVector& p, const GibbsState& q) {
    return trace_distance_diag(p, q.populations);
}

inline constexpr double kDefaultVerdictTolerance = 1e-6;

struct Verdict {
    bool thermalized{false};
    // Population-weighted (p_m p_n) mean of the unmasked grid; an aggregation
    // choice, reported with both outcomes when at least one pair is unmasked.
    std::optional<double> T_star;
    double spread{std::numeric_limits<double>::infinity()};
};

inline Verdict thermalization_verdict(const PopulationVector& pop, const LevelSet& levels,
                                      double tol = kDefaultVerdictTolerance) {
    const auto grid = effective_temperatures(pop, levels);
    Verdict v;
    double wsum = 0.0;
    double acc = 0.0;
    for (Eigen::Index m = 0; m < grid.size(); ++m)
        for (Eigen::Index n = 0; n < grid.size(); ++n)
            if (grid.valid(m, n)) {
                const double w = pop.p(m) * pop.p(n);
                wsum += w;
                acc += w * grid.values(m, n);
            }
    if (const auto r = grid.range()) {
        v.spread = r->second - r->first;
        v.T_star = acc / wsum;
        v.thermalized = v.spread < tol;
    } else if (pop.p.size() > 0 && std::abs(pop.p(0) - 1.0) < tol) {
        // Every pair masked because only |E_1⟩ is populated: the T = 0 state.
        v.thermalized = true;
        v.T_star = 0.0;
        v.spread = 0.0;
    }
    return v;
}

inline Verdict thermalization_verdict(const PopulationVector& pop, const JCParams& params,
                                      double tol = kDefaultVerdictTolerance) {
    return thermalization_verdict(pop, enumerate_levels(params, pop.n_d), tol);
}

}  // namespace jcthermo

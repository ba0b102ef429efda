// acceptance: one PASS/FAIL line per criterion at the pinned tolerances
//
// Exit status is the number of failed criteria (0 when all pass).

#include "jcthermo/jcthermo.hpp"
#include "jcthermo/runner/commands.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace jcthermo;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

const JCParams kFig{1.0, 1.0, 0.02};
constexpr int kND = 17;

PopulationVector steady(const BathConfig& bath, const JCParams& p = kFig, int n_d = kND) {
    return steady_state(build_rate_graph(p, bath, n_d));
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<double> coupling_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 30; ++i) g.push_back(0.1 * i);
    return g;
}

Outcome table1() {
    const long long expected_n0p2[] = {8731, 1467, 489, 216, 63, 24, 10, 4, 2};
    const int expected_nmax[] = {40, 21, 12, 10, 6, 5, 4, 3, 2};
    const auto t0 = std::chrono::steady_clock::now();
    const auto t = runner::cmd_table1();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int bad = 0;
    std::ostringstream os;
    for (std::size_t i = 0; i < 9; ++i) {
        const auto n0 = std::get<long long>(t.column("n0_plus_2").cells[i]);
        const auto nm = std::get<long long>(t.column("n_max").cells[i]);
        if (n0 != expected_n0p2[i] || nm != expected_nmax[i]) {
            ++bad;
            os << " g_r=" << runner::kTable1Couplings[i] << ":(" << n0 << "," << nm << ") vs expected (" << expected_n0p2[i]
               << "," << expected_nmax[i] << ")";
        }
    }
    os << " mismatches=" << bad << "/9 runtime=" << fmt(secs) << "s";
    return {bad == 0 && secs < 10.0, os.str()};
}

Outcome equal_temperature() {
    const auto p = steady(BathConfig::individual(1e-4, 1e-4, 2.0, 2.0));
    const auto levels = enumerate_levels(kFig, kND);
    const double d = trace_distance_diag(p, gibbs_state(levels, 2.0));
    const auto r = effective_temperatures(p, levels).range();
    const double dev = r ? std::max(std::abs(r->first - 2.0), std::abs(r->second - 2.0)) : 1e300;
    return {d < 1e-8 && r && dev <= 1e-6, "D=" + fmt(d) + " max|T_eff-2|=" + fmt(dev)};
}

Outcome trace_distance_minimum() {
    const auto levels = enumerate_levels(kFig, kND);
    auto scan = [&](const PopulationVector& p) {
        std::vector<double> d;
        for (int i = 0; i <= 100; ++i) d.push_back(trace_distance_diag(p, gibbs_state(levels, 1.5 + 0.01 * i)));
        return d;
    };
    const auto black = scan(steady(BathConfig::individual(1e-4, 1e-4, 2.0, 2.0)));
    const auto argmin = std::min_element(black.begin(), black.end()) - black.begin();
    bool ok = argmin == 50 && black[50] < 1e-8;
    std::ostringstream os;
    os << "argmin T_ref=" << 1.5 + 0.01 * double(argmin) << " D_min=" << fmt(black[std::size_t(argmin)]);
    for (double ratio : {0.5, 1.0, 2.0}) {
        const auto d = scan(steady(BathConfig::individual(1e-4, ratio * 1e-4, 2.5, 1.5)));
        const double m = *std::min_element(d.begin(), d.end());
        ok = ok && m > 1e-4;
        os << " ratio " << ratio << ": min D=" << fmt(m);
    }
    return {ok, os.str()};
}

Outcome single_bath_and_chb() {
    const double tol = 1e-6;
    struct Case {
        const char* name;
        BathConfig bath;
        bool thermal;
        double T;
    };
    const Case cases[] = {
        {"gamma_a=0", BathConfig::individual(1e-4, 0.0, 2.0, 0.0), true, 2.0},
        {"gamma_sigma=0", BathConfig::individual(0.0, 1e-4, 0.0, 1.0), true, 1.0},
        {"CHB", BathConfig::common(1e-4, 1e-4, 2.0), true, 2.0},
        {"T_a=0", BathConfig::individual(1e-4, 1e-4, 2.0, 0.0), false, 0.0},
        {"T_sigma=0", BathConfig::individual(1e-4, 1e-4, 0.0, 1.0), false, 0.0},
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& c : cases) {
        const auto v = thermalization_verdict(steady(c.bath), kFig, tol);
        bool good = v.thermalized == c.thermal;
        if (c.thermal) good = good && v.T_star && std::abs(*v.T_star - c.T) <= tol;
        ok = ok && good;
        os << " " << c.name << ":" << (v.thermalized ? "thermalized(" + fmt(v.T_star.value_or(-1)) + ")" : "not");
    }
    return {ok, os.str()};
}

Outcome gibbs_fixed_point() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> Td(0.2, 3.0), gd(0.005, 0.05), dd(-0.1, 0.1), rd(1e-5, 1e-3);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const JCParams p{1.0, 1.0 - dd(rng), gd(rng)};
        const double T = Td(rng);
        const double gs = rd(rng), ga = rd(rng);
        const BathConfig bath = i % 2 ? BathConfig::common(gs, ga, T) : BathConfig::individual(gs, ga, T, T);
        const auto g = build_rate_graph(p, bath, kND);
        const Eigen::VectorXd q = gibbs_state(g.levels, T).populations.p;
        worst = std::max(worst, (g.generator * q).cwiseAbs().maxCoeff() / g.max_rate());
    }
    return {worst < 1e-12, "max ||R g||_inf / max_rate = " + fmt(worst)};
}

// Non-decreasing then non-increasing, up to tol.
bool unimodal(const std::vector<double>& y, double tol) {
    std::size_t i = 1;
    while (i < y.size() && y[i] >= y[i - 1] - tol) ++i;
    while (i < y.size() && y[i] <= y[i - 1] + tol) ++i;
    return i == y.size();
}

Outcome vanishing_entanglement() {
    const auto grid = coupling_grid();
    std::ostringstream os;
    bool ok = true;
    double max11 = 0.0, diff11 = 0.0;
    for (double g_r : grid) {
        const auto pt = from_relative_coupling(11.0, g_r);
        const auto a = log_negativity_analytic(pt.params, pt.T);
        const auto n = log_negativity_numeric(pt.params, pt.T, 2 * a.n_max + 2);
        max11 = std::max(max11, a.log_negativity);
        diff11 = std::max(diff11, std::abs(a.log_negativity - n.log_negativity));
    }
    ok = max11 < 1e-8 && diff11 < 1e-10;
    os << "s=11: max N=" << fmt(max11) << " max|Na-Nn|=" << fmt(diff11) << ";";

    std::vector<std::vector<double>> curves;
    for (double s : {1.2, 1.4, 2.0}) {
        std::vector<double> y;
        for (double g_r : grid) {
            const auto pt = from_relative_coupling(s, g_r);
            y.push_back(log_negativity_analytic(pt.params, pt.T).log_negativity);
        }
        const auto peak = std::max_element(y.begin(), y.end()) - y.begin();
        const bool uni = unimodal(y, 1e-13);
        ok = ok && uni;
        os << " s=" << s << ": " << (uni ? "single-peaked" : "NOT single-peaked") << " max N=" << fmt(y[std::size_t(peak)])
           << " at g_r=" << fmt(grid[std::size_t(peak)]) << (peak + 1 == long(grid.size()) ? " (grid edge)" : "")
           << ";";
        curves.push_back(std::move(y));
    }
    bool ordered = true;
    for (std::size_t i = 0; i < grid.size(); ++i)
        ordered = ordered && curves[0][i] >= curves[1][i] - 1e-13 && curves[1][i] >= curves[2][i] - 1e-13;
    ok = ok && ordered;
    os << (ordered ? " ordered in s" : " NOT ordered in s");
    return {ok, os.str()};
}

Outcome f0_critical_point() {
    const double root = bisect([](double g) { return f_condition(0, g); }, 1.0, 2.0, 1e-6);
    return {root >= 1.41 && root <= 1.43, "g_rc^0 = " + fmt(root)};
}

Outcome selection_rules() {
    const oracle::DenseSpace sp{12};
    const auto states = oracle::eigenstates({1.0, 1.0, 0.02}, sp);
    const Eigen::MatrixXd X = oracle::sigma_x(sp), Q = oracle::quadrature(sp);
    const auto levels = enumerate_levels(kFig, 11);
    double worst_dense = 0.0, worst_lib = 0.0;
    long long nonzero = 0;
    for (int n = 0; n <= 10; ++n) {
        const std::vector<int> lows = n == 0 ? std::vector<int>{0} : std::vector<int>{-1, +1};
        for (int beta : lows)
            for (int alpha : {-1, +1}) {
                const auto lo = LevelIndex::of(n, beta == 0 ? Branch::ground : beta < 0 ? Branch::minus : Branch::plus);
                const auto hi = LevelIndex::of(n + 1, alpha < 0 ? Branch::minus : Branch::plus);
                const auto& vl = states[lo.offset()].vec;
                const auto& vh = states[hi.offset()].vec;
                const double cs = oracle::resonant_chi_sigma(n, alpha, beta);
                const double ca = oracle::resonant_chi_a(n, alpha, beta);
                worst_dense = std::max({worst_dense, std::abs(vh.dot(X * vl) - cs), std::abs(vh.dot(Q * vl) - ca)});
                worst_lib = std::max({worst_lib, std::abs(chi_sigma(levels[lo], levels[hi]) - cs),
                                      std::abs(chi_a(levels[lo], levels[hi]) - ca)});
            }
    }
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = 0; j < levels.size(); ++j) {
            const auto& a = levels.at_offset(i);
            const auto& b = levels.at_offset(j);
            if (std::abs(a.n - b.n) == 1) continue;
            if (chi_sigma(a, b) != 0.0 || chi_a(a, b) != 0.0) ++nonzero;
            if (states[i].vec.dot(X * states[j].vec) != 0.0 || states[i].vec.dot(Q * states[j].vec) != 0.0) ++nonzero;
        }
    const bool ok = worst_dense <= 1e-14 && worst_lib <= 1e-14 && nonzero == 0;
    return {ok, "closed form vs dense: " + fmt(worst_dense) + ", vs library: " + fmt(worst_lib) +
                    ", nonzero |dn|!=1 elements: " + std::to_string(nonzero)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> Td(0.5, 2.5), gd(0.02, 0.05), dd(-0.05, 0.05), rd(0.2, 1.0);
    double worst_ss = 0.0;
    for (int i = 0; i < 10; ++i) {
        const JCParams p{1.0, 1.0 - dd(rng), gd(rng)};
        const double Ts = Td(rng), Ta = Td(rng), gs = rd(rng), ga = rd(rng);
        const BathConfig bath = i % 3 == 2 ? BathConfig::common(gs, ga, Ts) : BathConfig::individual(gs, ga, Ts, Ta);
        const int n_d = 4 + i % 3;
        const auto g = build_rate_graph(p, bath, n_d);
        const auto ss = steady_state(g);
        const PopulationVector p0{Eigen::VectorXd::Unit(g.size(), 0), n_d};
        const auto late = evolve_populations(g, p0, 100.0 / g.min_positive_rate(), 0.09 / g.max_escape_rate());
        worst_ss = std::max(worst_ss, (late.p - ss.p).cwiseAbs().maxCoeff());
    }
    double worst_n = 0.0;
    for (double s : {1.2, 1.4, 2.0, 11.0})
        for (double g_r : coupling_grid()) {
            const auto pt = from_relative_coupling(s, g_r);
            const auto a = log_negativity_analytic(pt.params, pt.T);
            const auto n = log_negativity_numeric(pt.params, pt.T, 2 * a.n_max + 2);
            worst_n = std::max(worst_n, std::abs(a.log_negativity - n.log_negativity));
        }
    return {worst_ss < 1e-8 && worst_n < 1e-10,
            "steady vs evolved: " + fmt(worst_ss) + "; analytic vs dense negativity: " + fmt(worst_n)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"crossover table (n_0+2, n_max) at s = 11", table1},
        {"equal-temperature thermalization", equal_temperature},
        {"trace-distance minimum location", trace_distance_minimum},
        {"single-bath and common-bath thermalization", single_bath_and_chb},
        {"Gibbs fixed point of the generator", gibbs_fixed_point},
        {"vanishing thermal entanglement", vanishing_entanglement},
        {"F_0 critical coupling", f0_critical_point},
        {"selection rules and resonant coefficients", selection_rules},
        {"oracle equivalence", oracle_equivalence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed;
}

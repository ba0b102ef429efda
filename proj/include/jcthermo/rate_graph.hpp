// rate_graph.hpp: population-sector generator of the dressed-state master equation
//
// Under the secular approximation the eigenbasis populations close on
// themselves: dp/dt = R p with R[i][j] the flow rate j -> i. Only neighbouring
// excitation subspaces are connected.

#pragma once

#include "jcthermo/bath.hpp"
#include "jcthermo/eigensystem.hpp"
#include "jcthermo/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcthermo {

struct RateGraph {
    LevelSet levels;
    BathConfig bath;
    Eigen::MatrixXd generator;  // column j sums to zero

    Eigen::Index size() const noexcept { return generator.rows(); }

    double max_rate() const noexcept {
        double m = 0.0;
        for (Eigen::Index j = 0; j < size(); ++j)
            for (Eigen::Index i = 0; i < size(); ++i)
                if (i != j) m = std::max(m, generator(i, j));
        return m;
    }

    double min_positive_rate() const noexcept {
        double m = 0.0;
        for (Eigen::Index j = 0; j < size(); ++j)
            for (Eigen::Index i = 0; i < size(); ++i)
                if (i != j && generator(i, j) > 0.0 && (m == 0.0 || generator(i, j) < m)) m = generator(i, j);
        return m;
    }

    double max_escape_rate() const noexcept {
        return size() == 0 ? 0.0 : generator.diagonal().cwiseAbs().maxCoeff();
    }
};

struct PopulationVector {
    Eigen::VectorXd p;
    int n_d{0};

    double sum() const noexcept { return p.sum(); }
    double operator[](LevelIndex idx) const { return p(static_cast<Eigen::Index>(idx.offset())); }
};

inline RateGraph build_rate_graph(const JCParams& params, const BathConfig& bath, int n_d) {
    bath.validate();
    RateGraph graph{enumerate_levels(params, n_d), bath, {}};
    const auto dim = static_cast<Eigen::Index>(graph.levels.size());
    graph.generator = Eigen::MatrixXd::Zero(dim, dim);

    auto subspace = [](int n) {
        std::vector<LevelIndex> out;
        if (n == 0) {
            out.push_back(LevelIndex::of(0, Branch::ground));
        } else {
            out.push_back(LevelIndex::of(n, Branch::minus));
            out.push_back(LevelIndex::of(n, Branch::plus));
        }
        return out;
    };

    for (int n = 0; n < n_d; ++n) {
        for (LevelIndex lo : subspace(n)) {
            for (LevelIndex hi : subspace(n + 1)) {
                const ChannelRates r = channel_rates(graph.levels[lo], graph.levels[hi], bath);
                const auto l = static_cast<Eigen::Index>(lo.offset());
                const auto u = static_cast<Eigen::Index>(hi.offset());
                graph.generator(u, l) += 2.0 * r.rate_up;
                graph.generator(l, u) += 2.0 * r.rate_down;
            }
        }
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
        double out = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i)
            if (i != j) out += graph.generator(i, j);
        graph.generator(j, j) = -out;
    }
    return graph;
}

namespace detail {

// Connected components of the undirected transition graph, as lists of offsets.
inline std::vector<std::vector<Eigen::Index>> transition_components(const Eigen::MatrixXd& R) {
    const Eigen::Index n = R.rows();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (R(i, j) > 0.0 || R(j, i) > 0.0) parent[find(i)] = find(j);

    std::vector<std::vector<Eigen::Index>> comps;
    std::vector<Eigen::Index> label(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index r = find(i);
        if (label[r] < 0) {
            label[r] = static_cast<Eigen::Index>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<std::size_t>(label[r])].push_back(i);
    }
    return comps;
}

inline std::string describe_levels(const std::vector<Eigen::Index>& offsets) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < offsets.size(); ++i) os << (i ? ", " : "") << "E_" << offsets[i] + 1;
    os << '}';
    return os.str();
}

}  // namespace detail

// Unique p with R p = 0 and Σp = 1. One balance row is swapped for the
// normalization row, then the system is solved by full-pivot LU.
inline PopulationVector steady_state(const RateGraph& graph) {
    const Eigen::MatrixXd& R = graph.generator;
    const Eigen::Index n = R.rows();
    const double scale = graph.max_rate();
    if (n > 1 && !(scale > 0.0))
        throw SolverError("steady_state: non-ergodic generator, no transition has a positive rate");

    if (n > 1) {
        const auto comps = detail::transition_components(R);
        if (comps.size() > 1) {
            const auto& stray = comps.front().front() == 0 ? comps[1] : comps.front();
            throw SolverError("steady_state: non-ergodic generator, component " + detail::describe_levels(stray) +
                              " is disconnected from E_1 (" + std::to_string(comps.size()) + " components)");
        }
    }

    const Eigen::MatrixXd scaled = n > 1 ? Eigen::MatrixXd(R / scale) : R;
    if (n > 1) {
        Eigen::FullPivLU<Eigen::MatrixXd> kernel_probe(scaled);
        kernel_probe.setThreshold(1e-13);
        if (kernel_probe.rank() != n - 1)
            throw SolverError("steady_state: stationary state is not unique (kernel dimension " +
                              std::to_string(n - kernel_probe.rank()) + ")");
    }

    Eigen::MatrixXd A = scaled;
    A.row(0).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(0) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd p = lu.solve(b);
    p += lu.solve(b - A * p);  // one refinement sweep

    const double residual = n > 0 ? (R * p).cwiseAbs().maxCoeff() : 0.0;
    if (!(residual < 1e-12 * std::max(1.0, scale)))
        throw SolverError("steady_state: residual " + std::to_string(residual) + " exceeds tolerance");
    if (p.minCoeff() < -1e-12)
        throw SolverError("steady_state: solution has a significantly negative population");

    for (Eigen::Index i = 0; i < n; ++i)
        if (p(i) < 0.0) p(i) = 0.0;
    return PopulationVector{std::move(p), graph.levels.n_d};
}

inline constexpr double kTruncationAdequacyLimit = 1e-6;

struct TruncationCheck {
    double top_population{0.0};  // p_{n_d,-} + p_{n_d,+}
    bool adequate{true};
};

// Weight left in the highest kept subspace; large values mean n_d is too small.
inline TruncationCheck truncation_adequacy(const PopulationVector& pop, double limit = kTruncationAdequacyLimit) {
    const Eigen::Index dim = pop.p.size();
    if (dim < 3) return {dim == 0 ? 0.0 : pop.p.tail(dim - 1).sum(), dim < 2};
    const double top = pop.p(dim - 1) + pop.p(dim - 2);
    return {top, top <= limit};
}

// Classical RK4 for dp/dt = R p. Requires dt · max|R_jj| < 0.1.
inline PopulationVector evolve_populations(const RateGraph& graph, const PopulationVector& p0, double t_final,
                                           double dt) {
    const Eigen::MatrixXd& R = graph.generator;
    if (p0.p.size() != R.rows()) throw std::invalid_argument("evolve_populations: dimension mismatch");
    if (!(t_final >= 0.0)) throw std::invalid_argument("evolve_populations: t_final must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_populations: dt must be > 0");
    if (!(dt * graph.max_escape_rate() < 0.1))
        throw std::invalid_argument("evolve_populations: step too large, need dt * max|R_jj| < 0.1");

    PopulationVector out{p0.p, p0.n_d};
    if (t_final == 0.0) return out;

    const auto steps = static_cast<long long>(std::ceil(t_final / dt));
    const double h = t_final / static_cast<double>(steps);
    Eigen::VectorXd k1, k2, k3, k4;
    Eigen::VectorXd& p = out.p;
    for (long long s = 0; s < steps; ++s) {
        k1.noalias() = R * p;
        k2.noalias() = R * (p + 0.5 * h * k1);
        k3.noalias() = R * (p + 0.5 * h * k2);
        k4.noalias() = R * (p + h * k3);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return out;
}

}  // namespace jcthermo

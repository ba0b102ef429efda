// negativity.hpp: logarithmic negativity of the JC thermal state
//
// Two independent routes:
//   * analytic blocks: (ρ^{Tσ})†ρ^{Tσ} splits into a 1×1 block C_1² and 2×2
//     blocks M^[n+1] on {|g,n⟩, |e,n+1⟩}; the trace norm is C_1 + Σ(√λ1 + √λ2).
//   * numeric: dense ρ_th in the bare product basis, partial transpose on the
//     two-level factor, sum of |eigenvalues|.
// Also the crossover function F_n(g_r), the crossover index n_0, and the
// 1e-20 population truncation n_max.

#pragma once

#include "jcthermo/diagnostics.hpp"
#include "jcthermo/eigensystem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcthermo {

// Resonant (or detuned) JC point addressed by s = ω0/g and g_r = g/T.
struct RelativeCoupling {
    JCParams params;
    double T{0.0};
};

inline RelativeCoupling from_relative_coupling(double s, double g_r, double delta = 0.0) {
    if (!(s > 0.0)) throw std::invalid_argument("from_relative_coupling: s must be > 0");
    if (!(g_r > 0.0)) throw std::invalid_argument("from_relative_coupling: g_r must be > 0");
    const double g = 1.0 / s;
    return {JCParams{1.0, 1.0 - delta, g}, g / g_r};
}

// ---------------------------------------------------------------- block coefficients

struct ThermalBlockCoefficients {
    int n_max{0};
    // Indexed by excitation number, zero-padded through n_max + 2.
    // A[0] = p_1; B[0] and C[0] are unused.
    std::vector<double> A, B, C;

    double a(int n) const { return at(A, n); }
    double b(int n) const { return at(B, n); }
    double c(int n) const { return at(C, n); }

private:
    static double at(const std::vector<double>& v, int n) {
        if (n < 0 || static_cast<std::size_t>(n) >= v.size())
            throw std::out_of_range("ThermalBlockCoefficients: index " + std::to_string(n) + " out of range");
        return v[static_cast<std::size_t>(n)];
    }
};

inline ThermalBlockCoefficients thermal_block_coefficients(const JCParams& params, double T, int n_max) {
    if (!(T > 0.0)) throw std::invalid_argument("thermal_block_coefficients: T must be > 0");
    if (n_max < 2) throw std::invalid_argument("thermal_block_coefficients: n_max must be >= 2");
    const LevelSet levels = enumerate_levels(params, n_max);
    const Eigen::VectorXd p = gibbs_state(levels, T).populations.p;

    ThermalBlockCoefficients co;
    co.n_max = n_max;
    const auto len = static_cast<std::size_t>(n_max + 3);
    co.A.assign(len, 0.0);
    co.B.assign(len, 0.0);
    co.C.assign(len, 0.0);
    co.A[0] = p(0);
    for (int n = 1; n <= n_max; ++n) {
        const DressedLevel& plus = levels[LevelIndex::of(n, Branch::plus)];
        const double c2 = plus.cos_half * plus.cos_half;
        const double s2 = plus.sin_half * plus.sin_half;
        const double p_plus = p(2 * n);       // p_{2n+1}
        const double p_minus = p(2 * n - 1);  // p_{2n}
        const auto i = static_cast<std::size_t>(n);
        co.A[i] = s2 * p_plus + c2 * p_minus;
        co.B[i] = plus.sin_half * plus.cos_half * (p_plus - p_minus);
        co.C[i] = c2 * p_plus + s2 * p_minus;
    }
    return co;
}

// M^[n+1] on {|g,n⟩, |e,n+1⟩}.
inline Eigen::Matrix2d block_matrix(const ThermalBlockCoefficients& co, int n) {
    if (n < 0 || n > co.n_max) throw std::out_of_range("block_matrix: block index out of range");
    const double a = co.a(n), b = co.b(n + 1), c = co.c(n + 2);
    Eigen::Matrix2d m;
    m << a * a + b * b, b * (a + c), b * (a + c), b * b + c * c;
    return m;
}

// A_n C_{n+2} - B_{n+1}²: its sign selects the closed form for √λ1 + √λ2.
inline double block_discriminant(const ThermalBlockCoefficients& co, int n) {
    if (n < 0 || n > co.n_max) throw std::out_of_range("block_discriminant: block index out of range");
    return co.a(n) * co.c(n + 2) - co.b(n + 1) * co.b(n + 1);
}

// Sign of the discriminant, immune to underflow of the raw product.
inline int block_discriminant_sign(const ThermalBlockCoefficients& co, int n) {
    if (n < 0 || n > co.n_max) throw std::out_of_range("block_discriminant_sign: block index out of range");
    const double a = co.a(n), b = co.b(n + 1), c = co.c(n + 2);
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0) return 0;
    const double d = (a / scale) * (c / scale) - (b / scale) * (b / scale);
    return (d > 0.0) - (d < 0.0);
}

// √λ1 + √λ2 for M^[n+1]. With λ1λ2 = (A C - B²)² this is √(tr M + 2|A C - B²|),
// i.e. A + C when A C ≥ B² and √((A - C)² + 4B²) otherwise.
inline double sqrt_eig_sum(const ThermalBlockCoefficients& co, int n) {
    const Eigen::Matrix2d m = block_matrix(co, n);
    return std::sqrt(m.trace() + 2.0 * std::abs(block_discriminant(co, n)));
}

// ---------------------------------------------------------------- crossover function

// F_n(g_r) = cosh(√n g) cosh(√(n+2) g) - sinh²(√(n+1) g), resonance only.
// Evaluated as ½[1 + cosh(u-v)] - sinh((u+v+2w)/2) sinh((2w-u-v)/2) with
// u = √n g, v = √(n+2) g, w = √(n+1) g; the second factor is formed without
// cancellation.
inline double f_condition(long long n, double g_r) {
    if (n < 0) throw std::invalid_argument("f_condition: n must be >= 0");
    const double x = static_cast<double>(n);
    const double r0 = std::sqrt(x), r1 = std::sqrt(x + 1.0), r2 = std::sqrt(x + 2.0);
    const double u = r0 * g_r, v = r2 * g_r, w = r1 * g_r;
    // 2√(n+1) - √n - √(n+2) = 2 / ((√n + √(n+2))(√n + √(n+1))(√(n+1) + √(n+2)))
    const double gap = 2.0 * g_r / ((r0 + r2) * (r0 + r1) * (r1 + r2));
    return 0.5 * (1.0 + std::cosh(u - v)) - std::sinh(0.5 * (u + v + 2.0 * w)) * std::sinh(0.5 * gap);
}

struct Crossover {
    enum class Kind { finite, all_negative, all_nonnegative };
    Kind kind{Kind::all_nonnegative};
    long long n0{-1};  // meaningful for Kind::finite

    static Crossover at(long long n0) { return {Kind::finite, n0}; }
    static Crossover none() { return {Kind::all_negative, -1}; }
    static Crossover unbounded() { return {Kind::all_nonnegative, -1}; }
    bool finite() const noexcept { return kind == Kind::finite; }
    bool operator==(const Crossover&) const = default;
};

// The n_0 with F_{n0} ≥ 0 and F_{n0+1} < 0 (F_n is decreasing in n).
inline Crossover crossover_index(double g_r) {
    if (!(g_r >= 0.0)) throw std::invalid_argument("crossover_index: g_r must be >= 0");
    if (g_r == 0.0) return Crossover::unbounded();
    if (f_condition(0, g_r) < 0.0) return Crossover::none();

    long long lo = 0;  // F(lo) >= 0
    long long hi = 1;  // searched for F(hi) < 0
    constexpr long long kLimit = 1LL << 60;
    while (f_condition(hi, g_r) >= 0.0) {
        lo = hi;
        if (hi >= kLimit) return Crossover::unbounded();
        hi *= 2;
    }
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (f_condition(mid, g_r) >= 0.0 ? lo : hi) = mid;
    }
    return Crossover::at(lo);
}

// First sign change of the block discriminant using only blocks whose
// coefficients all lie inside the truncation (n + 2 ≤ n_max).
inline Crossover crossover_from_blocks(const ThermalBlockCoefficients& co) {
    if (block_discriminant_sign(co, 0) < 0) return Crossover::none();
    for (int n = 0; n + 3 <= co.n_max; ++n)
        if (block_discriminant_sign(co, n + 1) < 0) return Crossover::at(n);
    return Crossover::unbounded();
}

// ---------------------------------------------------------------- truncation

namespace detail {

// Untruncated thermal probabilities in flat order, cut where the remaining
// tail is below e^{-margin} relative to the threshold scale.
inline std::vector<double> thermal_populations_untruncated(const JCParams& params, double T, double threshold,
                                                           double margin = 60.0) {
    params.validate();
    if (!(T > 0.0)) throw std::invalid_argument("thermal populations: T must be > 0");
    std::vector<double> energy{eigen_level(params, 0, Branch::ground).energy};
    double e_min = energy.front();
    const double cutoff = std::log(1.0 / threshold) + margin;
    // E_{n,-} increases with n once √n > g/(2ωc).
    const double monotone_from = std::pow(params.g / (2.0 * params.omega_c), 2) + 1.0;
    for (int n = 1;; ++n) {
        const double em = eigen_level(params, n, Branch::minus).energy;
        const double ep = eigen_level(params, n, Branch::plus).energy;
        energy.push_back(em);
        energy.push_back(ep);
        e_min = std::min({e_min, em, ep});
        if (static_cast<double>(n) > monotone_from && (em - e_min) / T > cutoff) break;
        if (n > 50'000'000) throw std::runtime_error("thermal populations: tail did not converge");
    }
    std::vector<double> p(energy.size());
    double z = 0.0;
    for (std::size_t k = 0; k < energy.size(); ++k) z += (p[k] = std::exp(-(energy[k] - e_min) / T));
    for (double& x : p) x /= z;
    return p;
}

}  // namespace detail

inline constexpr double kTruncationThreshold = 1e-20;

// n_max = ⌊(k* - 1)/2⌋ with k* the last flat index whose thermal population is
// ≥ threshold, floored at 2: every level beyond |E_{2n_max+2}⟩ is negligible.
inline int truncation_index(const JCParams& params, double T, double threshold = kTruncationThreshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("truncation_index: threshold in (0,1)");
    const auto p = detail::thermal_populations_untruncated(params, T, threshold);
    std::size_t k_star = 1;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] >= threshold) k_star = k + 1;
    return std::max(2, static_cast<int>((k_star - 1) / 2));
}

// ---------------------------------------------------------------- negativity

struct NegativityResult {
    enum class Method { analytic_blocks, numeric_oracle };
    double trace_norm{1.0};
    double log_negativity{0.0};
    Crossover crossover;
    int n_max{0};
    Method method{Method::analytic_blocks};
    std::optional<double> min_pt_eigenvalue;  // numeric path only
};

inline NegativityResult log_negativity_analytic(const JCParams& params, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("log_negativity_analytic: T must be > 0");
    const int n_max = truncation_index(params, T);
    const ThermalBlockCoefficients co = thermal_block_coefficients(params, T, n_max);

    double norm = co.c(1);
    for (int n = 0; n <= n_max; ++n) norm += sqrt_eig_sum(co, n);

    NegativityResult r;
    r.trace_norm = norm;
    r.log_negativity = std::log2(norm);
    r.n_max = n_max;
    r.method = NegativityResult::Method::analytic_blocks;
    r.crossover = params.detuning() == 0.0 ? crossover_index(params.g / T) : crossover_from_blocks(co);
    return r;
}

// Bare product basis index for |q, m⟩ with q = 0 (g) or 1 (e).
inline Eigen::Index bare_index(int q, int m) noexcept { return static_cast<Eigen::Index>(2 * m + q); }

// Dense bare-basis JC Hamiltonian with Fock states 0..fock_max.
inline Eigen::MatrixXd bare_hamiltonian(const JCParams& params, int fock_max) {
    const Eigen::Index dim = 2 * (fock_max + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m <= fock_max; ++m) {
        H(bare_index(0, m), bare_index(0, m)) = -params.omega0 / 2.0 + params.omega_c * m;
        H(bare_index(1, m), bare_index(1, m)) = params.omega0 / 2.0 + params.omega_c * m;
        if (m >= 1) {
            const double c = params.g * std::sqrt(static_cast<double>(m));
            H(bare_index(1, m - 1), bare_index(0, m)) = c;
            H(bare_index(0, m), bare_index(1, m - 1)) = c;
        }
    }
    return H;
}

// Dense thermal state over excitation subspaces 0..fock_max (the orphan
// |e, fock_max⟩ of the cut Fock space is left unpopulated).
inline Eigen::MatrixXd dense_thermal_state(const JCParams& params, double T, int fock_max) {
    const Eigen::MatrixXd H = bare_hamiltonian(params, fock_max);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense_thermal_state: eigensolver failed");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::Index orphan = bare_index(1, fock_max);

    Eigen::VectorXd w(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        w(i) = std::abs(V(orphan, i)) > std::sqrt(0.5) ? 0.0 : std::exp(-(lam(i) - lam(0)) / T);
    w /= w.sum();
    return V * w.asDiagonal() * V.transpose();
}

// ρ^{Tσ}: transpose of the two-level factor only.
inline Eigen::MatrixXd partial_transpose_tls(const Eigen::MatrixXd& rho) {
    const Eigen::Index dim = rho.rows();
    const int fock = static_cast<int>(dim / 2);
    Eigen::MatrixXd out(dim, dim);
    for (int q = 0; q < 2; ++q)
        for (int qp = 0; qp < 2; ++qp)
            for (int m = 0; m < fock; ++m)
                for (int mp = 0; mp < fock; ++mp)
                    out(bare_index(q, m), bare_index(qp, mp)) = rho(bare_index(qp, m), bare_index(q, mp));
    return out;
}

inline constexpr double kBoundaryLeakTolerance = 1e-12;

inline NegativityResult log_negativity_numeric(const JCParams& params, double T, int dim) {
    if (!(T > 0.0)) throw std::invalid_argument("log_negativity_numeric: T must be > 0");
    if (dim < 4 || dim % 2 != 0) throw std::invalid_argument("log_negativity_numeric: dim must be even and >= 4");
    const int fock_max = dim / 2 - 1;

    const auto untruncated = detail::thermal_populations_untruncated(params, T, kTruncationThreshold);
    double leak = 0.0;
    for (std::size_t k = static_cast<std::size_t>(2 * fock_max + 1); k < untruncated.size(); ++k) leak += untruncated[k];
    if (leak > kBoundaryLeakTolerance)
        throw std::invalid_argument("log_negativity_numeric: dim " + std::to_string(dim) +
                                    " too small for T, population leak " + std::to_string(leak));

    const Eigen::MatrixXd pt = partial_transpose_tls(dense_thermal_state(params, T, fock_max));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("log_negativity_numeric: eigensolver failed");

    NegativityResult r;
    r.trace_norm = es.eigenvalues().cwiseAbs().sum();
    r.log_negativity = std::log2(r.trace_norm);
    r.n_max = fock_max;
    r.method = NegativityResult::Method::numeric_oracle;
    r.min_pt_eigenvalue = es.eigenvalues().minCoeff();
    r.crossover = params.detuning() == 0.0 && params.g > 0.0 ? crossover_index(params.g / T) : Crossover::unbounded();
    return r;
}

// ---------------------------------------------------------------- closed-form trace norms
// Resonant case only. p holds flat populations, p(k-1) = p_k; levels past the
// end of p count as empty.

namespace detail {
inline double flat(const Eigen::VectorXd& p, long long k) {
    return (k >= 1 && k <= p.size()) ? p(static_cast<Eigen::Index>(k - 1)) : 0.0;
}
inline double tail_block(const Eigen::VectorXd& p, long long n) {
    const double d = (flat(p, 2 * n + 1) + flat(p, 2 * n)) - (flat(p, 2 * n + 5) + flat(p, 2 * n + 4));
    const double b = flat(p, 2 * n + 3) - flat(p, 2 * n + 2);
    return 0.5 * std::sqrt(d * d + 4.0 * b * b);
}
}  // namespace detail

// Every block with index ≤ n0 on the A + C branch, the rest on the root branch.
inline double trace_norm_crossover_form(const Eigen::VectorXd& p, long long n0) {
    using detail::flat;
    double s = 0.0;
    for (long long k = 1; k <= 2 * n0 + 1; ++k) s += flat(p, k);
    s += 0.5 * (flat(p, 2 * n0 + 5) + flat(p, 2 * n0 + 4) + flat(p, 2 * n0 + 3) + flat(p, 2 * n0 + 2));
    for (long long n = n0 + 1; 2 * n <= p.size(); ++n) s += detail::tail_block(p, n);
    return s;
}

// All blocks on the root branch (g_r above the n = 0 critical point).
inline double trace_norm_strong_coupling_form(const Eigen::VectorXd& p) {
    using detail::flat;
    const double d = 2.0 * flat(p, 1) - (flat(p, 5) + flat(p, 4));
    const double b = flat(p, 3) - flat(p, 2);
    double s = 0.5 * (flat(p, 3) + flat(p, 2)) + 0.5 * std::sqrt(d * d + 4.0 * b * b);
    for (long long n = 1; 2 * n <= p.size(); ++n) s += detail::tail_block(p, n);
    return s;
}

// Populations truncated after |E_{2 n_max + 1}⟩ with every block below
// n_max - 1 on the A + C branch.
inline double trace_norm_truncated_form(const Eigen::VectorXd& p, int n_max) {
    using detail::flat;
    double total = 0.0;
    for (long long k = 1; k <= 2LL * n_max + 1; ++k) total += flat(p, k);
    const double edge = flat(p, 2LL * n_max - 1) + flat(p, 2LL * n_max - 2);
    const double split = flat(p, 2LL * n_max + 1) - flat(p, 2LL * n_max);
    return 0.5 * (2.0 * total - edge + std::sqrt(edge * edge + 4.0 * split * split));
}

}  // namespace jcthermo

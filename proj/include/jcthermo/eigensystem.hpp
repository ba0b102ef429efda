// eigensystem.hpp: exact dressed-state spectrum of the Jaynes-Cummings Hamiltonian
//
// H = ω0/2 σz + ωc a†a + g (a†σ- + σ+a) conserves the excitation number
// N = a†a + σ+σ-, so it splits into 2×2 blocks spanned by {|e,n-1⟩, |g,n⟩}.
// Everything here is in natural units ħ = k_B = 1 with frequencies in units of ω0.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jcthermo {

struct JCParams {
    double omega0{1.0};   // two-level splitting
    double omega_c{1.0};  // field frequency
    double g{0.0};        // coupling strength

    double detuning() const noexcept { return omega0 - omega_c; }

    void validate() const {
        if (!(omega0 > 0.0)) throw std::invalid_argument("JCParams: omega0 must be > 0");
        if (!(omega_c > 0.0)) throw std::invalid_argument("JCParams: omega_c must be > 0");
        if (!(g >= 0.0)) throw std::invalid_argument("JCParams: g must be >= 0");
    }

    bool operator==(const JCParams&) const = default;
};

enum class Branch { ground, minus, plus };

inline std::string_view to_string(Branch b) noexcept {
    switch (b) {
        case Branch::ground: return "ground";
        case Branch::minus: return "minus";
        case Branch::plus: return "plus";
    }
    return "?";
}

// One eigenstate |ε_{n,±}⟩ (or |ε_{0,0}⟩ = |g,0⟩).
//   |ε_{n,+}⟩ =  cos(θ/2)|e,n-1⟩ + sin(θ/2)|g,n⟩
//   |ε_{n,-}⟩ = -sin(θ/2)|e,n-1⟩ + cos(θ/2)|g,n⟩
struct DressedLevel {
    int n{0};
    Branch branch{Branch::ground};
    double energy{0.0};
    double cos_half{1.0};
    double sin_half{0.0};

    // Amplitude on |e,n-1⟩ (zero for the ground state).
    double excited_amplitude() const noexcept {
        switch (branch) {
            case Branch::plus: return cos_half;
            case Branch::minus: return -sin_half;
            case Branch::ground: return 0.0;
        }
        return 0.0;
    }
    // Amplitude on |g,n⟩.
    double ground_amplitude() const noexcept {
        switch (branch) {
            case Branch::plus: return sin_half;
            case Branch::minus: return cos_half;
            case Branch::ground: return 1.0;
        }
        return 0.0;
    }
};

// Ω_n = sqrt(δ² + 4 g² n)
inline double rabi_frequency(const JCParams& params, int n) {
    if (n < 1) throw std::invalid_argument("rabi_frequency: n must be >= 1 (no doublet in the vacuum subspace)");
    const double delta = params.detuning();
    return std::sqrt(delta * delta + 4.0 * params.g * params.g * static_cast<double>(n));
}

// Mixing angle θ_n in (0, π), tan θ_n = 2g√n/δ. Exactly π/2 on resonance.
inline double mixing_angle(const JCParams& params, int n) {
    if (n < 1) throw std::invalid_argument("mixing_angle: n must be >= 1");
    const double delta = params.detuning();
    if (delta == 0.0) return std::numbers::pi / 2.0;
    return std::atan2(2.0 * params.g * std::sqrt(static_cast<double>(n)), delta);
}

inline DressedLevel eigen_level(const JCParams& params, int n, Branch branch) {
    params.validate();
    if (n == 0) {
        if (branch != Branch::ground)
            throw std::invalid_argument("eigen_level: n = 0 only admits the ground branch");
        return DressedLevel{0, Branch::ground, -params.omega0 / 2.0, 1.0, 0.0};
    }
    if (n < 0) throw std::invalid_argument("eigen_level: n must be >= 0");
    if (branch == Branch::ground)
        throw std::invalid_argument("eigen_level: ground branch is only valid for n = 0");

    const double half_theta = mixing_angle(params, n) / 2.0;
    const double center = params.omega_c * (static_cast<double>(n) - 0.5);
    const double half_rabi = rabi_frequency(params, n) / 2.0;
    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    return DressedLevel{n, branch, center + sign * half_rabi, std::cos(half_theta), std::sin(half_theta)};
}

// Flat labels: |E_1⟩ = |ε_{0,0}⟩, |E_{2n}⟩ = |ε_{n,-}⟩, |E_{2n+1}⟩ = |ε_{n,+}⟩. k is 1-based.
struct LevelIndex {
    int k{1};

    static LevelIndex of(int n, Branch branch) {
        if (n == 0) {
            if (branch != Branch::ground) throw std::invalid_argument("LevelIndex: n = 0 requires ground branch");
            return {1};
        }
        if (n < 0 || branch == Branch::ground) throw std::invalid_argument("LevelIndex: invalid (n, branch)");
        return {branch == Branch::minus ? 2 * n : 2 * n + 1};
    }

    int excitation() const noexcept { return k / 2; }
    Branch branch() const noexcept {
        if (k == 1) return Branch::ground;
        return k % 2 == 0 ? Branch::minus : Branch::plus;
    }
    std::size_t offset() const noexcept { return static_cast<std::size_t>(k - 1); }

    bool operator==(const LevelIndex&) const = default;
};

// Truncated dressed basis covering subspaces 0..n_d in flat order.
struct LevelSet {
    JCParams params;
    int n_d{0};
    std::vector<DressedLevel> levels;  // levels[k-1] is |E_k⟩
    // False when the label order disagrees with energy order (needs g ≳ ωc/2).
    bool energy_ordered{true};

    std::size_t size() const noexcept { return levels.size(); }
    const DressedLevel& operator[](LevelIndex idx) const { return levels.at(idx.offset()); }
    const DressedLevel& at_offset(std::size_t i) const { return levels.at(i); }
};

inline LevelSet enumerate_levels(const JCParams& params, int n_d) {
    params.validate();
    if (n_d < 1) throw std::invalid_argument("enumerate_levels: n_d must be >= 1");
    LevelSet set;
    set.params = params;
    set.n_d = n_d;
    set.levels.reserve(static_cast<std::size_t>(2 * n_d + 1));
    set.levels.push_back(eigen_level(params, 0, Branch::ground));
    for (int n = 1; n <= n_d; ++n) {
        set.levels.push_back(eigen_level(params, n, Branch::minus));
        set.levels.push_back(eigen_level(params, n, Branch::plus));
    }
    for (std::size_t i = 1; i < set.levels.size(); ++i) {
        if (set.levels[i].energy < set.levels[i - 1].energy) {
            set.energy_ordered = false;
            break;
        }
    }
    return set;
}

}  // namespace jcthermo

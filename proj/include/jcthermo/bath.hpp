// bath.hpp: heat-bath configuration, dressed-state transition coefficients, thermal rates

#pragma once

#include "jcthermo/eigensystem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace jcthermo {

enum class Topology { IHB, CHB };

inline std::string_view to_string(Topology t) noexcept { return t == Topology::IHB ? "IHB" : "CHB"; }

// Individual baths: one for the two-level system, one for the field.
struct IndividualTemperatures {
    double T_sigma{0.0};
    double T_a{0.0};
    bool operator==(const IndividualTemperatures&) const = default;
};

struct CommonTemperature {
    double T{0.0};
    bool operator==(const CommonTemperature&) const = default;
};

struct BathConfig {
    double gamma_sigma{0.0};
    double gamma_a{0.0};
    std::variant<IndividualTemperatures, CommonTemperature> temps{IndividualTemperatures{}};

    static BathConfig individual(double gamma_sigma, double gamma_a, double T_sigma, double T_a) {
        BathConfig b{gamma_sigma, gamma_a, IndividualTemperatures{T_sigma, T_a}};
        b.validate();
        return b;
    }
    static BathConfig common(double gamma_sigma, double gamma_a, double T) {
        BathConfig b{gamma_sigma, gamma_a, CommonTemperature{T}};
        b.validate();
        return b;
    }

    Topology topology() const noexcept {
        return std::holds_alternative<CommonTemperature>(temps) ? Topology::CHB : Topology::IHB;
    }
    double T_sigma() const noexcept {
        if (auto* c = std::get_if<CommonTemperature>(&temps)) return c->T;
        return std::get<IndividualTemperatures>(temps).T_sigma;
    }
    double T_a() const noexcept {
        if (auto* c = std::get_if<CommonTemperature>(&temps)) return c->T;
        return std::get<IndividualTemperatures>(temps).T_a;
    }

    void validate() const {
        if (!(gamma_sigma >= 0.0)) throw std::invalid_argument("BathConfig: gamma_sigma must be >= 0");
        if (!(gamma_a >= 0.0)) throw std::invalid_argument("BathConfig: gamma_a must be >= 0");
        if (!(T_sigma() >= 0.0) || !(T_a() >= 0.0))
            throw std::invalid_argument("BathConfig: temperatures must be >= 0");
    }

    bool operator==(const BathConfig&) const = default;
};

namespace detail {

// Orders a pair as (lower subspace, upper subspace); false if they are not neighbours.
inline bool neighbour_pair(const DressedLevel& x, const DressedLevel& y, const DressedLevel*& lower,
                           const DressedLevel*& upper) noexcept {
    if (y.n == x.n + 1) {
        lower = &x;
        upper = &y;
        return true;
    }
    if (x.n == y.n + 1) {
        lower = &y;
        upper = &x;
        return true;
    }
    return false;
}

}  // namespace detail

// ⟨upper|σx|lower⟩. σx|g,n⟩ = |e,n⟩, so only the |g,n⟩ part of the lower level
// reaches the |e,n⟩ part of the upper one. Symmetric in its arguments.
inline double chi_sigma(const DressedLevel& x, const DressedLevel& y) noexcept {
    const DressedLevel* lower = nullptr;
    const DressedLevel* upper = nullptr;
    if (!detail::neighbour_pair(x, y, lower, upper)) return 0.0;
    return upper->excited_amplitude() * lower->ground_amplitude();
}

// ⟨upper|(a + a†)|lower⟩ = √(n+1)·g-parts + √n·e-parts, with n the lower excitation.
inline double chi_a(const DressedLevel& x, const DressedLevel& y) noexcept {
    const DressedLevel* lower = nullptr;
    const DressedLevel* upper = nullptr;
    if (!detail::neighbour_pair(x, y, lower, upper)) return 0.0;
    const double n = static_cast<double>(lower->n);
    return std::sqrt(n + 1.0) * upper->ground_amplitude() * lower->ground_amplitude() +
           std::sqrt(n) * upper->excited_amplitude() * lower->excited_amplitude();
}

// |χ_X|² for the common-bath cross channel, taken as 2|χσ χa|.
inline double chi_cross_squared(const DressedLevel& x, const DressedLevel& y) noexcept {
    return 2.0 * std::abs(chi_sigma(x, y) * chi_a(x, y));
}

// Bose-Einstein occupation 1/(e^{ω/T} - 1); exactly 0 at T = 0.
inline double nbar(double omega, double T) {
    if (!(omega > 0.0)) throw std::domain_error("nbar: transition frequency must be > 0");
    if (!(T >= 0.0)) throw std::domain_error("nbar: temperature must be >= 0");
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / T);
}

struct ChannelRates {
    double rate_up{0.0};    // lower -> upper, Σ ½γ|χ|² n̄
    double rate_down{0.0};  // upper -> lower, Σ ½γ|χ|² (n̄ + 1)
};

// Lindblad prefactors for one neighbouring pair. The population flow of the
// corresponding dissipator is twice these numbers (D[O]ρ = 2OρO† - ...).
inline ChannelRates channel_rates(const DressedLevel& lower, const DressedLevel& upper, const BathConfig& bath) {
    if (upper.n != lower.n + 1)
        throw std::invalid_argument("channel_rates: upper excitation must equal lower excitation + 1");
    const double omega = upper.energy - lower.energy;
    if (!(omega > 0.0))
        throw std::domain_error("channel_rates: non-positive transition frequency between E(n=" +
                                std::to_string(lower.n) + ") and E(n=" + std::to_string(upper.n) + ")");

    const double cs = chi_sigma(lower, upper);
    const double ca = chi_a(lower, upper);
    ChannelRates r;
    auto add = [&](double gamma, double chi2, double T) {
        if (gamma == 0.0 || chi2 == 0.0) return;
        const double occ = nbar(omega, T);
        r.rate_up += 0.5 * gamma * chi2 * occ;
        r.rate_down += 0.5 * gamma * chi2 * (occ + 1.0);
    };
    add(bath.gamma_sigma, cs * cs, bath.T_sigma());
    add(bath.gamma_a, ca * ca, bath.T_a());
    if (bath.topology() == Topology::CHB) {
        add(std::sqrt(bath.gamma_sigma * bath.gamma_a), chi_cross_squared(lower, upper), bath.T_sigma());
    }
    return r;
}

}  // namespace jcthermo

// params.hpp: physical parameters of the two coupled, damped modes

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "modecoupler/errors.hpp"

namespace modecoupler {

/// Rates and couplings of the two-mode model. All values are in raw units
/// (angular frequency / rate); nothing is silently renormalized.
///
/// `gamma` is the cross-damping rate actually used by every solver. When the
/// parameters are built from a polarization angle, `theta` is kept as metadata
/// and `gamma = sqrt(gamma_a * gamma_b) * cos(theta)`. An explicitly supplied
/// gamma always wins over theta.
struct SystemParams {
    double omega{1.0};
    double kappa{0.0};
    double epsilon{0.0};
    double gamma_a{0.0};
    double gamma_b{0.0};
    double gamma{0.0};
    std::optional<double> theta{};

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct DerivedRates {
    double gamma0{0.0};
    double gamma_d{0.0};
    double ratio_r{0.0};
    double ratio_u{0.0};
};

/// sqrt(gamma_a * gamma_b) * cos(theta).
inline double collective_rate(double gamma_a, double gamma_b, double theta) {
    if (!(gamma_a >= 0.0) || !(gamma_b >= 0.0)) {
        throw DomainError("collective_rate: damping rates must be non-negative");
    }
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2)) {
        throw DomainError("collective_rate: theta must lie in [0, pi/2]");
    }
    // cos(pi/2) is 6e-17 in floating point; perpendicular polarizations give exactly zero.
    if (theta == std::numbers::pi / 2) return 0.0;
    return std::sqrt(gamma_a * gamma_b) * std::cos(theta);
}

/// Maximal collective damping, sqrt(gamma_a * gamma_b).
inline double max_collective_rate(const SystemParams& p) {
    return std::sqrt(p.gamma_a * p.gamma_b);
}

namespace detail {

inline void require_rate(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string("parameter ") + name + " must be finite");
    }
    if (v < 0.0) {
        throw DomainError(std::string("parameter ") + name + " must be non-negative");
    }
}

} // namespace detail

/// Returns `p` unchanged when every invariant holds; throws DomainError naming
/// the first violated invariant otherwise.
inline SystemParams validate(const SystemParams& p) {
    if (!std::isfinite(p.omega) || !(p.omega > 0.0)) {
        throw DomainError("parameter omega must be finite and strictly positive");
    }
    detail::require_rate(p.kappa, "kappa");
    detail::require_rate(p.epsilon, "epsilon");
    detail::require_rate(p.gamma_a, "gamma_a");
    detail::require_rate(p.gamma_b, "gamma_b");
    detail::require_rate(p.gamma, "gamma");
    if (p.theta) {
        const double t = *p.theta;
        if (!std::isfinite(t) || t < 0.0 || t > std::numbers::pi / 2) {
            throw DomainError("parameter theta must lie in [0, pi/2]");
        }
    }
    // gamma = sqrt(ga*gb) computed in floating point may square to one ulp above ga*gb.
    const double bound = p.gamma_a * p.gamma_b;
    if (p.gamma * p.gamma > bound * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
        throw DomainError("parameter gamma violates gamma^2 <= gamma_a*gamma_b");
    }
    return p;
}

/// Builds validated parameters with gamma derived from the polarization angle.
inline SystemParams with_theta(SystemParams p, double theta) {
    p.gamma = collective_rate(p.gamma_a, p.gamma_b, theta);
    p.theta = theta;
    return validate(p);
}

/// Mean and half-difference damping plus the ratios R = kappa/gamma0 and
/// u = gamma_d/gamma0.
inline DerivedRates derive(const SystemParams& p) {
    DerivedRates d;
    d.gamma0 = (p.gamma_a + p.gamma_b) / 2.0;
    d.gamma_d = (p.gamma_a - p.gamma_b) / 2.0;
    if (!(d.gamma0 > 0.0)) {
        throw DomainError("derive: gamma0 = (gamma_a+gamma_b)/2 must be positive for R and u");
    }
    d.ratio_r = p.kappa / d.gamma0;
    d.ratio_u = d.gamma_d / d.gamma0;
    return d;
}

inline double gamma0_of(const SystemParams& p) { return (p.gamma_a + p.gamma_b) / 2.0; }
inline double gamma_d_of(const SystemParams& p) { return (p.gamma_a - p.gamma_b) / 2.0; }

/// Rescales every rate by 1/omega, giving the same physics with omega = 1.
inline SystemParams normalized(const SystemParams& p) {
    SystemParams q = validate(p);
    const double w = q.omega;
    q.omega = 1.0;
    q.kappa /= w;
    q.epsilon /= w;
    q.gamma_a /= w;
    q.gamma_b /= w;
    q.gamma /= w;
    return q;
}

// JSON parameter files: omega, kappa, epsilon, gamma_a, gamma_b, theta?, gamma?.
// Unknown keys are rejected. Without gamma or theta the modes decay independently.
inline SystemParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DomainError("parameter file must contain a JSON object");
    static const char* const known[] = {"omega", "kappa", "epsilon", "gamma_a",
                                        "gamma_b", "theta", "gamma"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw DomainError("unknown parameter key '" + key + "'");
        if (!value.is_number()) throw DomainError("parameter '" + key + "' must be a number");
    }
    for (const char* k : {"omega", "kappa", "epsilon", "gamma_a", "gamma_b"}) {
        if (!j.contains(k)) throw DomainError(std::string("missing parameter '") + k + "'");
    }
    SystemParams p;
    p.omega = j.at("omega").get<double>();
    p.kappa = j.at("kappa").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
    p.gamma_a = j.at("gamma_a").get<double>();
    p.gamma_b = j.at("gamma_b").get<double>();
    if (j.contains("theta")) p.theta = j.at("theta").get<double>();
    if (j.contains("gamma")) {
        p.gamma = j.at("gamma").get<double>();
    } else if (p.theta) {
        return with_theta(p, *p.theta);
    }
    return validate(p);
}

inline nlohmann::json params_to_json(const SystemParams& p) {
    nlohmann::json j{{"omega", p.omega},     {"kappa", p.kappa},     {"epsilon", p.epsilon},
                     {"gamma_a", p.gamma_a}, {"gamma_b", p.gamma_b}, {"gamma", p.gamma}};
    if (p.theta) j["theta"] = *p.theta;
    return j;
}

} // namespace modecoupler

namespace modecoupler {

// Regime predicates. The model's special regimes are exact identities; we accept
// them within 1e-12 relative to gamma0 and route everything else through the
// general formulas.
inline constexpr double regime_rel_tol = 1e-12;

inline bool is_balanced(const SystemParams& p) {
    return std::abs(p.gamma_a - p.gamma_b) <= regime_rel_tol * gamma0_of(p);
}

inline bool is_collective_max(const SystemParams& p) {
    return std::abs(p.gamma - max_collective_rate(p)) <= regime_rel_tol * gamma0_of(p);
}

inline bool is_independent(const SystemParams& p) {
    return p.gamma <= regime_rel_tol * gamma0_of(p);
}

} // namespace modecoupler

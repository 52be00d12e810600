// observables.hpp: interference, visibility, concurrence, g2(0), photon numbers

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "modecoupler/errors.hpp"
#include "modecoupler/format.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/statespace.hpp"
#include "modecoupler/steadystate.hpp"

namespace modecoupler {

struct InterferenceConfig {
    double detector_constant{1.0};  // alpha |E|^2
    double phase{0.0};              // (kA - kB).r plus the source phase, collapsed to one scalar
};

/// Single-detector intensity of the superposed mode fields,
/// c [2 rho44 + rho22 + rho33 + 2 Re(rho23 e^{i phase})].
inline double intensity(const XDensityMatrix& rho, const InterferenceConfig& cfg = {}) {
    if (!(cfg.detector_constant > 0.0)) throw DomainError("detector_constant must be positive");
    const double base = 2.0 * rho.p44 + rho.p22 + rho.p33;
    const double fringe = 2.0 * std::abs(rho.rho23) * std::cos(cfg.phase + std::arg(rho.rho23));
    return cfg.detector_constant * (base + fringe);
}

/// First-order visibility (Imax - Imin)/(Imax + Imin) = 2|rho23| / (2 rho44 + rho22 + rho33).
inline double visibility_from_state(const XDensityMatrix& rho) {
    const double den = 2.0 * rho.p44 + rho.p22 + rho.p33;
    if (!(den > 0.0)) throw DomainError("visibility undefined: no photons in either mode");
    return 2.0 * std::abs(rho.rho23) / den;
}

/// Visibility of the separate-reservoir steady state, |u| 2R / (4R^2 + 1).
inline double visibility_separate(double ratio_r, double ratio_u) {
    return std::abs(ratio_u) * 2.0 * ratio_r / (4.0 * ratio_r * ratio_r + 1.0);
}

/// Visibility at maximal collective damping, sqrt(4R^2u^2 + 1 - u^2) / (4R^2 + 1).
inline double visibility_common(double ratio_r, double ratio_u) {
    const double r2 = ratio_r * ratio_r, u2 = ratio_u * ratio_u;
    return std::sqrt(4.0 * r2 * u2 + 1.0 - u2) / (4.0 * r2 + 1.0);
}

/// Closed-form steady-state visibility, dispatched on the damping regime:
/// gamma = 0, maximal collective damping, the singular balanced point (needs
/// pdd0), or the general unbalanced expression.
inline double visibility_analytic(const SystemParams& params, std::optional<double> pdd0 = std::nullopt) {
    const SystemParams p = validate(params);
    const double g0 = gamma0_of(p);
    if (!(g0 > 0.0)) throw DomainError("visibility_analytic needs gamma_a + gamma_b > 0");
    const Regime regime = classify(p);

    if (regime == Regime::balanced_collective_max) {
        if (!pdd0) throw MissingInitialCondition("visibility in the singular regime needs pdd0");
        if (!(*pdd0 >= 0.0 && *pdd0 <= 1.0)) throw DomainError("pdd0 must lie in [0, 1]");
        const double e2 = p.epsilon * p.epsilon;
        const double b = g0 * g0 + 4.0 * p.omega * p.omega;
        const double den = 3.0 * e2 + b * *pdd0;
        if (!(den > 0.0)) throw DomainError("visibility undefined: vacuum steady state");
        return std::abs(e2 - (4.0 * e2 + b) * *pdd0) / den;
    }
    const DerivedRates d = derive(p);
    if (is_independent(p)) return visibility_separate(d.ratio_r, d.ratio_u);
    if (is_collective_max(p)) return visibility_common(d.ratio_r, d.ratio_u);
    if (is_balanced(p)) {
        throw DomainError("general visibility expression is valid only for gamma_a != gamma_b");
    }
    const double gd = d.gamma_d, g = p.gamma, k = p.kappa;
    const double s = g0 * g0 - g * g;
    return std::abs(gd) * std::sqrt(4.0 * k * k * s * s + (g * g0 * gd) * (g * g0 * gd)) /
           ((4.0 * k * k + g0 * g0) * s);
}

struct ConcurrenceResult {
    double c{0.0};
    double c1{0.0};  // one-photon branch, may be negative
    double c2{0.0};  // two-photon branch, may be negative
};

inline ConcurrenceResult make_concurrence(double c1, double c2) {
    return {std::max({0.0, c1, c2}), c1, c2};
}

/// Wootters concurrence of an X state:
/// C1 = 2(|rho23| - sqrt(rho11 rho44)), C2 = 2(|rho14| - sqrt(rho22 rho33)).
inline ConcurrenceResult concurrence(const XDensityMatrix& rho) {
    const double c1 = 2.0 * (std::abs(rho.rho23) - std::sqrt(std::max(0.0, rho.p11 * rho.p44)));
    const double c2 = 2.0 * (std::abs(rho.rho14) - std::sqrt(std::max(0.0, rho.p22 * rho.p33)));
    return make_concurrence(c1, c2);
}

inline ConcurrenceResult concurrence_analytic_independent(const SystemParams& params) {
    const SystemParams p = validate(params);
    if (!is_independent(p)) throw DomainError("concurrence_analytic_independent requires gamma = 0");
    const double ga = p.gamma_a, gb = p.gamma_b, k = p.kappa, e = p.epsilon, w = p.omega;
    const double g0 = gamma0_of(p), gd = gamma_d_of(p);
    const double d0 = regime_denominator(p, Regime::independent);
    if (!(d0 > 0.0)) throw SingularRegimeError("denominator D0 vanishes");
    const double c1 = 2.0 * e / d0 *
                      (4.0 * std::abs(gd) * k * e -
                       (4.0 * k * k + g0 * g0 - gd * gd) * std::sqrt(4.0 * w * w + e * e + g0 * g0));
    const double c2 = 2.0 * e / d0 *
                      ((4.0 * k * k + ga * gb) * std::sqrt(4.0 * w * w + g0 * g0) -
                       e * std::sqrt((4.0 * k * k + ga * ga) * (4.0 * k * k + gb * gb)));
    return make_concurrence(c1, c2);
}

inline ConcurrenceResult concurrence_analytic_collective(const SystemParams& params) {
    const SystemParams p = validate(params);
    if (!is_collective_max(p) || is_balanced(p)) {
        throw DomainError("concurrence_analytic_collective requires gamma = sqrt(gamma_a gamma_b), gamma_a != gamma_b");
    }
    const double ga = p.gamma_a, gb = p.gamma_b, k = p.kappa, e = p.epsilon, w = p.omega;
    const double g0 = gamma0_of(p);
    const double dt = regime_denominator(p, Regime::collective_max);
    if (!(dt > 0.0)) throw SingularRegimeError("denominator vanishes (kappa = epsilon = 0)");
    const double c1 = 2.0 * e / dt *
                      (0.5 * e * std::sqrt(k * k * (ga - gb) * (ga - gb) + ga * gb * g0 * g0) -
                       k * k * std::sqrt(e * e + 4.0 * w * w + g0 * g0));
    const double c2 = 2.0 * e / dt *
                      (k * k * std::sqrt(g0 * g0 + 4.0 * w * w) -
                       0.5 * e * std::sqrt((2.0 * k * k + ga * g0) * (2.0 * k * k + gb * g0)));
    return make_concurrence(c1, c2);
}

struct PhotonNumbers {
    double n_a{0.0};
    double n_b{0.0};
};

inline PhotonNumbers photon_numbers(const XDensityMatrix& rho) {
    return {rho.p44 + rho.p22, rho.p44 + rho.p33};
}

/// Normalized zero-delay cross-correlation rho44 / ((rho44 + rho22)(rho44 + rho33)).
inline double g2(const XDensityMatrix& rho) {
    const PhotonNumbers n = photon_numbers(rho);
    if (!(n.n_a > 0.0) || !(n.n_b > 0.0)) throw DomainError("g2 undefined: zero mean photon number");
    return rho.p44 / (n.n_a * n.n_b);
}

struct G2Limit {
    enum class Kind { balanced, antibunched_approx };
    Kind kind;
    double value;
};

/// Closed-form g2(0) for independent decay: exact for balanced rates,
/// approximate (kappa < epsilon) for unbalanced ones.
inline G2Limit g2_analytic_limits(const SystemParams& params) {
    const SystemParams p = validate(params);
    if (!is_independent(p)) throw DomainError("g2_analytic_limits requires gamma = 0");
    const double g0 = gamma0_of(p), gd = gamma_d_of(p), k = p.kappa, e = p.epsilon, w = p.omega;
    if (!(g0 > 0.0)) throw DomainError("g2_analytic_limits needs gamma_a + gamma_b > 0");
    if (is_balanced(p)) {
        if (!(e > 0.0)) throw DomainError("g2 undefined at epsilon = 0");
        return {G2Limit::Kind::balanced, 1.0 + (4.0 * w * w + g0 * g0) / (4.0 * e * e)};
    }
    if (!(k < e)) throw DomainError("antibunching approximation needs kappa < epsilon");
    const double a = 4.0 * k * k + g0 * g0;
    return {G2Limit::Kind::antibunched_approx, 1.0 - 4.0 * k * k * gd * gd / (a * a - g0 * g0 * gd * gd)};
}

struct InversionRatios {
    double ratio_24{0.0};
    double ratio_34{0.0};
};

inline InversionRatios inversion_ratios(const XDensityMatrix& rho) {
    if (!(rho.p44 > 0.0)) throw DomainError("population ratios undefined: rho44 = 0");
    return {rho.p22 / rho.p44, rho.p33 / rho.p44};
}

/// Every derived quantity of one state. Quantities undefined for the state
/// (no photons, empty |4>) are left empty.
struct ObservableSet {
    std::optional<double> visibility;
    ConcurrenceResult concurrence;
    std::optional<double> g2;
    double n_a{0.0};
    double n_b{0.0};
    std::optional<double> ratio_24;
    std::optional<double> ratio_34;
};

inline ObservableSet evaluate(const XDensityMatrix& rho) {
    ObservableSet o;
    o.concurrence = concurrence(rho);
    const PhotonNumbers n = photon_numbers(rho);
    o.n_a = n.n_a;
    o.n_b = n.n_b;
    try {
        o.visibility = visibility_from_state(rho);
    } catch (const DomainError&) {
    }
    try {
        o.g2 = g2(rho);
    } catch (const DomainError&) {
    }
    try {
        const InversionRatios r = inversion_ratios(rho);
        o.ratio_24 = r.ratio_24;
        o.ratio_34 = r.ratio_34;
    } catch (const DomainError&) {
    }
    return o;
}

inline const std::vector<std::string>& observable_columns() {
    static const std::vector<std::string> cols{"visibility", "c",   "c1",       "c2",      "g2",
                                               "n_a",        "n_b", "ratio_24", "ratio_34"};
    return cols;
}

/// Value of a named observable column; NaN when undefined.
inline double observable_value(const ObservableSet& o, const std::string& col) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (col == "visibility") return o.visibility.value_or(nan);
    if (col == "c") return o.concurrence.c;
    if (col == "c1") return o.concurrence.c1;
    if (col == "c2") return o.concurrence.c2;
    if (col == "g2") return o.g2.value_or(nan);
    if (col == "n_a") return o.n_a;
    if (col == "n_b") return o.n_b;
    if (col == "ratio_24") return o.ratio_24.value_or(nan);
    if (col == "ratio_34") return o.ratio_34.value_or(nan);
    throw DomainError("unknown observable column '" + col + "'");
}

} // namespace modecoupler

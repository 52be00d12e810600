// steadystate.hpp: closed-form steady states for every damping regime and the
// numerical solve of M Y = -P (constrained by the conserved dark population
// when M is singular)

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "modecoupler/errors.hpp"
#include "modecoupler/liouvillian.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/statespace.hpp"

namespace modecoupler {

enum class Regime {
    general,
    independent,
    collective_max,
    balanced_subcritical,
    balanced_collective_max,
    trapped_kappa0,
};

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::general: return "general";
    case Regime::independent: return "independent";
    case Regime::collective_max: return "collective_max";
    case Regime::balanced_subcritical: return "balanced_subcritical";
    case Regime::balanced_collective_max: return "balanced_collective_max";
    case Regime::trapped_kappa0: return "trapped_kappa0";
    }
    return "unknown";
}

struct SteadyStateResult {
    XDensityMatrix rho;
    Regime regime{Regime::general};
    double denominator{0.0};
    bool singular{false};
    std::optional<double> initial_pdd{};
};

/// Classification precedence: the singular balanced point first, then
/// balanced, independent, collective maximum (trapped when kappa = 0).
inline Regime classify(const SystemParams& p) {
    const bool bal = is_balanced(p);
    const bool cmax = is_collective_max(p);
    if (bal && cmax) return Regime::balanced_collective_max;
    if (bal) return Regime::balanced_subcritical;
    if (is_independent(p)) return Regime::independent;
    if (cmax) return p.kappa == 0.0 ? Regime::trapped_kappa0 : Regime::collective_max;
    return Regime::general;
}

namespace detail {

inline void require_damping(const SystemParams& p) {
    if (!(gamma0_of(p) > 0.0)) {
        throw DomainError("steady state requires gamma_a + gamma_b > 0");
    }
}

// 4 kappa^2 (g0^2 - g^2) + g0^2 (gA gB - g^2)
inline double general_q(const SystemParams& p) {
    const double g0 = gamma0_of(p), g = p.gamma, k = p.kappa;
    return 4.0 * k * k * (g0 * g0 - g * g) + g0 * g0 * (p.gamma_a * p.gamma_b - g * g);
}

inline double general_d(const SystemParams& p) {
    const double g0 = gamma0_of(p), g = p.gamma, k = p.kappa, e = p.epsilon, w = p.omega;
    return (g0 * g0 + 4.0 * w * w) * general_q(p) +
           4.0 * e * e * (g0 * g0 - g * g) * (g0 * g0 + 4.0 * k * k);
}

inline double independent_d0(const SystemParams& p) {
    const double g0 = gamma0_of(p), k = p.kappa, e = p.epsilon, w = p.omega;
    return (4.0 * k * k + p.gamma_a * p.gamma_b) * (4.0 * w * w + g0 * g0) +
           4.0 * e * e * (4.0 * k * k + g0 * g0);
}

inline double collective_dtilde(const SystemParams& p) {
    const double g0 = gamma0_of(p), k = p.kappa, e = p.epsilon, w = p.omega;
    return k * k * (g0 * g0 + 4.0 * w * w) + e * e * (g0 * g0 + 4.0 * k * k);
}

inline double balanced_dprime(const SystemParams& p) {
    const double g0 = gamma0_of(p), e = p.epsilon, w = p.omega;
    return 4.0 * e * e + g0 * g0 + 4.0 * w * w;
}

inline double balanced_max_denominator(const SystemParams& p) {
    const double g0 = gamma0_of(p), e = p.epsilon, w = p.omega;
    return 3.0 * e * e + g0 * g0 + 4.0 * w * w;
}

} // namespace detail

/// The denominator (D, D0, D-tilde, D', or the balanced-maximum prefactor)
/// that applies to `regime`.
inline double regime_denominator(const SystemParams& p, Regime regime) {
    switch (regime) {
    case Regime::general: return detail::general_d(p);
    case Regime::independent: return detail::independent_d0(p);
    case Regime::collective_max: return detail::collective_dtilde(p);
    case Regime::balanced_subcritical: return detail::balanced_dprime(p);
    case Regime::balanced_collective_max: return detail::balanced_max_denominator(p);
    case Regime::trapped_kappa0: return 2.0 * gamma0_of(p);
    }
    return 0.0;
}

/// General closed form, valid everywhere except the singular balanced,
/// maximally collective point.
inline SteadyStateResult analytic_general(const SystemParams& params) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    if (classify(p) == Regime::balanced_collective_max) {
        throw SingularRegimeError(
            "analytic_general: gamma_a = gamma_b with gamma = sqrt(gamma_a gamma_b) is singular; "
            "use analytic_balanced_max");
    }
    const double ga = p.gamma_a, gb = p.gamma_b, g = p.gamma;
    const double g0 = gamma0_of(p), k = p.kappa, e = p.epsilon, w = p.omega;
    const double q = detail::general_q(p);
    const double d = detail::general_d(p);
    if (!(d > 0.0)) throw SingularRegimeError("analytic_general: denominator D vanishes");
    const double a = g0 * g0 + 4.0 * w * w;
    const double s = g0 * g0 - g * g;
    const cplx i(0.0, 1.0);

    SteadyStateResult r;
    r.regime = Regime::general;
    r.denominator = d;
    r.rho.p11 = (e * e + a) * q / d;
    r.rho.p22 = e * e / d * ((4.0 * k * k + ga * ga) * s + 0.25 * g * g * (ga - gb) * (ga - gb));
    r.rho.p33 = e * e / d * ((4.0 * k * k + gb * gb) * s + 0.25 * g * g * (ga - gb) * (ga - gb));
    r.rho.p44 = e * e * q / d;
    r.rho.rho14 = i * e * cplx(g0, 2.0 * w) * q / d;
    r.rho.rho23 = i * (ga - gb) * e * e / (4.0 * d) * cplx(8.0 * k * s, g * (ga * ga - gb * gb));
    return r;
}

/// Modes decaying to separate reservoirs (gamma = 0).
inline SteadyStateResult analytic_independent(const SystemParams& params) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    if (!is_independent(p)) throw DomainError("analytic_independent requires gamma = 0");
    const double ga = p.gamma_a, gb = p.gamma_b;
    const double g0 = gamma0_of(p), k = p.kappa, e = p.epsilon, w = p.omega;
    const double d0 = detail::independent_d0(p);
    if (!(d0 > 0.0)) throw SingularRegimeError("analytic_independent: denominator D0 vanishes");
    const double a = 4.0 * k * k + ga * gb;
    const cplx i(0.0, 1.0);

    SteadyStateResult r;
    r.regime = Regime::independent;
    r.denominator = d0;
    r.rho.p11 = a * (4.0 * w * w + g0 * g0 + e * e) / d0;
    r.rho.p22 = e * e * (4.0 * k * k + ga * ga) / d0;
    r.rho.p33 = e * e * (4.0 * k * k + gb * gb) / d0;
    r.rho.p44 = e * e * a / d0;
    r.rho.rho23 = 2.0 * i * (ga - gb) * k * e * e / d0;
    r.rho.rho14 = i * e * a / d0 * cplx(g0, 2.0 * w);
    return r;
}

/// Maximal collective damping, gamma = sqrt(gamma_a gamma_b), unequal rates.
inline SteadyStateResult analytic_collective_max(const SystemParams& params) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    if (!is_collective_max(p) || is_balanced(p)) {
        throw DomainError("analytic_collective_max requires gamma = sqrt(gamma_a gamma_b) and gamma_a != gamma_b");
    }
    const double ga = p.gamma_a, gb = p.gamma_b;
    const double g0 = gamma0_of(p), k = p.kappa, e = p.epsilon, w = p.omega;
    const double dt = detail::collective_dtilde(p);
    if (!(dt > 0.0)) throw SingularRegimeError("analytic_collective_max: denominator vanishes (kappa = epsilon = 0)");
    const cplx i(0.0, 1.0);

    SteadyStateResult r;
    r.regime = k == 0.0 ? Regime::trapped_kappa0 : Regime::collective_max;
    r.denominator = dt;
    r.rho.p11 = k * k * (e * e + 4.0 * w * w + g0 * g0) / dt;
    r.rho.p22 = e * e * (2.0 * k * k + ga * g0) / (2.0 * dt);
    r.rho.p33 = e * e * (2.0 * k * k + gb * g0) / (2.0 * dt);
    r.rho.p44 = k * k * e * e / dt;
    r.rho.rho14 = i * e * k * k * cplx(g0, 2.0 * w) / dt;
    r.rho.rho23 = i * e * e / (2.0 * dt) * cplx(k * (ga - gb), g0 * std::sqrt(ga * gb));
    return r;
}

/// Population trapped in the single-excitation sector (kappa = 0, maximal
/// collective damping): the pure dark state.
inline SteadyStateResult analytic_trapped(const SystemParams& params) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    if (!is_collective_max(p) || p.kappa != 0.0) {
        throw DomainError("analytic_trapped requires kappa = 0 and gamma = sqrt(gamma_a gamma_b)");
    }
    if (!(p.epsilon > 0.0)) {
        throw SingularRegimeError("analytic_trapped: with epsilon = 0 the vacuum is also stationary");
    }
    const double g0 = gamma0_of(p);
    SteadyStateResult r;
    r.regime = Regime::trapped_kappa0;
    r.denominator = 2.0 * g0;
    r.rho.p11 = 0.0;
    r.rho.p44 = 0.0;
    r.rho.p22 = p.gamma_a / (2.0 * g0);
    r.rho.p33 = p.gamma_b / (2.0 * g0);
    r.rho.rho23 = -std::sqrt(p.gamma_a * p.gamma_b) / (2.0 * g0);
    return r;
}

/// Balanced decay below the collective maximum; independent of kappa and gamma.
inline SteadyStateResult analytic_balanced(const SystemParams& params) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    if (!is_balanced(p) || is_collective_max(p)) {
        throw DomainError("analytic_balanced requires gamma_a = gamma_b and gamma < gamma0");
    }
    const double g0 = gamma0_of(p), e = p.epsilon, w = p.omega;
    const double dp = detail::balanced_dprime(p);
    const cplx i(0.0, 1.0);

    SteadyStateResult r;
    r.regime = Regime::balanced_subcritical;
    r.denominator = dp;
    r.rho.p11 = (e * e + g0 * g0 + 4.0 * w * w) / dp;
    r.rho.p22 = r.rho.p33 = r.rho.p44 = e * e / dp;
    r.rho.rho14 = i * e * cplx(g0, 2.0 * w) / dp;
    r.rho.rho23 = 0.0;
    return r;
}

/// Balanced decay at the collective maximum. The dark population is
/// conserved, so the steady state depends on its initial value pdd0.
inline SteadyStateResult analytic_balanced_max(const SystemParams& params, double pdd0) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    if (!is_balanced(p) || !is_collective_max(p)) {
        throw DomainError("analytic_balanced_max requires gamma_a = gamma_b = gamma");
    }
    if (!(pdd0 >= 0.0 && pdd0 <= 1.0)) throw DomainError("pdd0 must lie in [0, 1]");
    const double g0 = gamma0_of(p), e = p.epsilon, w = p.omega;
    const double den = detail::balanced_max_denominator(p);
    const double f = 1.0 - pdd0;
    const double b = g0 * g0 + 4.0 * w * w;
    const cplx i(0.0, 1.0);

    SteadyStateResult r;
    r.regime = Regime::balanced_collective_max;
    r.denominator = den;
    r.singular = true;
    r.initial_pdd = pdd0;
    r.rho.p11 = (e * e + b) / den * f;
    r.rho.p22 = r.rho.p33 = 0.5 * (1.0 - (2.0 * e * e + b) / den * f);
    r.rho.p44 = e * e / den * f;
    r.rho.rho14 = i * e * cplx(g0, 2.0 * w) / den * f;
    r.rho.rho23 = -0.5 * (1.0 - (4.0 * e * e + b) / den * f);
    return r;
}

/// Dispatches to the closed form matching classify(params).
inline SteadyStateResult analytic_steady(const SystemParams& params,
                                         std::optional<double> pdd0 = std::nullopt) {
    const SystemParams p = validate(params);
    switch (classify(p)) {
    case Regime::balanced_collective_max:
        if (!pdd0) throw MissingInitialCondition("singular regime needs the initial dark population pdd0");
        return analytic_balanced_max(p, *pdd0);
    case Regime::balanced_subcritical: return analytic_balanced(p);
    case Regime::independent: return analytic_independent(p);
    case Regime::trapped_kappa0: return analytic_trapped(p);
    case Regime::collective_max: return analytic_collective_max(p);
    case Regime::general: return analytic_general(p);
    }
    throw DomainError("unreachable regime");
}

namespace detail {

using MatL = Eigen::Matrix<long double, 7, 7>;
using VecL = Eigen::Matrix<long double, 7, 1>;

// Stationary equations in the excited-state unknowns z = (rho44, Y2, ..., Y7),
// with Y1 = 1 - rho22 - rho33 - rho44 substituted. Solving for rho11 directly
// makes every 1 - rho11 in M Y + P cancel, which costs all relative accuracy on
// the small coherences when rho11 is near 1. The shifted drive M e1 + P is
// exact in floating point.
struct ExcitedSystem {
    MatL a;
    VecL b;  // a z = b
};

inline ExcitedSystem excited_system(const SystemParams& p) {
    const Generator<long double> g = generator<long double>(p);
    ExcitedSystem e;
    e.a = g.m;
    e.a.col(0) = -g.m.col(0);
    e.a.col(1) = g.m.col(1) - g.m.col(0);
    e.a.col(2) = g.m.col(2) - g.m.col(0);
    e.b = -(g.m.col(0) + g.p);
    return e;
}

inline XDensityMatrix unpack_excited(const VecL& z) {
    const Vec7 y = z.cast<double>();
    XDensityMatrix r;
    r.p44 = y(0);
    r.p22 = y(1);
    r.p33 = y(2);
    r.p11 = static_cast<double>(1.0L - z(0) - z(1) - z(2));
    r.rho23 = cplx(y(3) / 2.0, -y(4) / 2.0);
    r.rho14 = cplx(y(5) / 2.0, -y(6) / 2.0);
    return r;
}

} // namespace detail

/// Solves M Y = -P (in extended precision, for the excited-state unknowns).
/// In the singular balanced regime the conserved dark population is appended
/// as an extra equation, c.Y = pdd0, and the (consistent) 8x7 system is
/// solved by column-pivoted QR.
inline SteadyStateResult numeric_steady(const SystemParams& params,
                                        std::optional<double> pdd0 = std::nullopt) {
    const SystemParams p = validate(params);
    detail::require_damping(p);
    const LinearSystem sys = build(p);
    const Regime regime = classify(p);

    SteadyStateResult r;
    r.regime = regime;
    r.denominator = regime_denominator(p, regime);
    const detail::ExcitedSystem ex = detail::excited_system(p);

    if (regime == Regime::balanced_collective_max) {
        if (!pdd0) throw MissingInitialCondition("singular regime needs the initial dark population pdd0");
        if (!(*pdd0 >= 0.0 && *pdd0 <= 1.0)) throw DomainError("pdd0 must lie in [0, 1]");
        // c.Y does not involve Y1, so the extra row carries over unchanged.
        Eigen::Matrix<long double, 8, 7> a;
        Eigen::Matrix<long double, 8, 1> b;
        a.topRows<7>() = ex.a;
        a.row(7) = dark_population_functional(p).cast<long double>().transpose();
        b.head<7>() = ex.b;
        b(7) = *pdd0;
        r.rho = detail::unpack_excited(a.colPivHouseholderQr().solve(b));
        r.singular = true;
        r.initial_pdd = pdd0;
        return r;
    }

    if (singularity(sys).singular) {
        throw SingularRegimeError("numeric_steady: generator is numerically singular; steady state not unique");
    }
    const detail::VecL z = ex.a.fullPivLu().solve(ex.b);
    if (!z.allFinite()) throw NonFiniteError("numeric_steady: non-finite solution");
    r.rho = detail::unpack_excited(z);
    return r;
}

struct PopulationRatios {
    double ratio_24{0.0};
    double ratio_34{0.0};
};

/// rho22/rho44 and rho33/rho44 for independent decay, by substitution of the
/// gamma = 0 steady state: 1 +- g(gA - gB)/(4 kappa^2 + gA gB).
inline PopulationRatios population_ratios_independent(const SystemParams& p) {
    const double den = 4.0 * p.kappa * p.kappa + p.gamma_a * p.gamma_b;
    if (!(den > 0.0)) throw DomainError("population ratios undefined: 4 kappa^2 + gamma_a gamma_b = 0");
    return {1.0 + p.gamma_a * (p.gamma_a - p.gamma_b) / den,
            1.0 - p.gamma_b * (p.gamma_a - p.gamma_b) / den};
}

/// rho22/rho44 and rho33/rho44 at the collective maximum: 1 + g gamma0/(2 kappa^2).
inline PopulationRatios population_ratios_collective(const SystemParams& p) {
    if (!(p.kappa > 0.0)) throw DomainError("population ratios undefined at kappa = 0 (rho44 = 0)");
    const double g0 = gamma0_of(p);
    return {1.0 + p.gamma_a * g0 / (2.0 * p.kappa * p.kappa),
            1.0 + p.gamma_b * g0 / (2.0 * p.kappa * p.kappa)};
}

inline const char* steady_csv_header() {
    return "source,regime,denominator,singular,initial_pdd,p11,p22,p33,p44,re_rho23,im_rho23,re_rho14,"
           "im_rho14";
}

inline std::string to_csv_row(const std::string& source, const SteadyStateResult& r) {
    return source + ',' + to_string(r.regime) + ',' + fmt_num(r.denominator) + ',' +
           (r.singular ? "1" : "0") + ',' + (r.initial_pdd ? fmt_num(*r.initial_pdd) : "nan") + ',' +
           to_csv_row(r.rho);
}

} // namespace modecoupler

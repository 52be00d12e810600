// validation.hpp: seeded self-checks behind `modecoupler validate`

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "modecoupler/dynamics.hpp"
#include "modecoupler/format.hpp"
#include "modecoupler/observables.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/steadystate.hpp"

namespace modecoupler {

/// Log-uniform draw in [lo, hi].
inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

/// Random parameters with omega = 1 and every rate log-uniform in [1e-3, 2];
/// the cross rate is redrawn until gamma^2 <= gamma_a gamma_b.
inline SystemParams random_params(std::mt19937_64& rng) {
    SystemParams p;
    p.omega = 1.0;
    p.kappa = log_uniform(rng, 1e-3, 2.0);
    p.epsilon = log_uniform(rng, 1e-3, 2.0);
    p.gamma_a = log_uniform(rng, 1e-3, 2.0);
    p.gamma_b = log_uniform(rng, 1e-3, 2.0);
    do {
        p.gamma = log_uniform(rng, 1e-3, 2.0);
    } while (p.gamma * p.gamma > p.gamma_a * p.gamma_b);
    return p;
}

/// Largest entrywise relative deviation |a - b| / max(|a|, |b|) over the
/// eight real components of two X states. Entries that vanish in both count as equal.
inline double max_rel_diff(const XDensityMatrix& a, const XDensityMatrix& b) {
    const double av[8] = {a.p11, a.p22, a.p33, a.p44, a.rho23.real(), a.rho23.imag(), a.rho14.real(), a.rho14.imag()};
    const double bv[8] = {b.p11, b.p22, b.p33, b.p44, b.rho23.real(), b.rho23.imag(), b.rho14.real(), b.rho14.imag()};
    double m = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double s = std::max(std::abs(av[i]), std::abs(bv[i]));
        if (s > 0.0) m = std::max(m, std::abs(av[i] - bv[i]) / s);
    }
    return m;
}

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed{false};
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    std::size_t passed() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }));
    }
    std::size_t failed() const { return checks.size() - passed(); }
    bool ok() const { return failed() == 0; }
};

struct ValidationOptions {
    std::uint64_t seed{42};
    int steady_draws{20};
    int oracle_draws{5};
    double steady_tol{1e-10};
    double oracle_tol{1e-6};
};

namespace detail {

inline void check_steady(ValidationReport& rep, std::mt19937_64& rng, const ValidationOptions& o) {
    for (int k = 0; k < o.steady_draws; ++k) {
        const SystemParams p = random_params(rng);
        CheckResult c{"steady", "analytic_vs_numeric#" + std::to_string(k), false, ""};
        try {
            const auto a = analytic_general(p);
            const auto n = numeric_steady(p);
            const double d = max_rel_diff(a.rho, n.rho);
            c.passed = d <= o.steady_tol && a.rho.is_physical(1e-6, 1e-8);
            c.detail = "max_rel=" + fmt_num(d);
        } catch (const std::exception& e) {
            c.detail = e.what();
        }
        rep.checks.push_back(std::move(c));
    }
}

inline void check_oracle(ValidationReport& rep, std::mt19937_64& rng, const ValidationOptions& o) {
    for (int k = 0; k < o.oracle_draws; ++k) {
        SystemParams p = random_params(rng);
        if (k % 2 == 0) p.gamma = 0.0;
        CheckResult c{"oracle", "fock_nmax1#" + std::to_string(k), false, ""};
        try {
            IntegrationOptions opt;
            opt.dt = std::min(0.01, max_step(p));
            opt.sample_every = 10;
            const double t_end = 5.0;
            const Trajectory y = integrate_linear(p, vacuum(), t_end, opt);
            const FockTrajectory f = evolve_fock(p, 1, embed(vacuum(), 1), t_end, opt);
            double d = 0.0;
            for (std::size_t s = 0; s < y.states.size(); ++s) {
                const XDensityMatrix a = y.states[s];
                const XDensityMatrix b = low_sector(f.states[s]);
                d = std::max({d, std::abs(a.p11 - b.p11), std::abs(a.p22 - b.p22), std::abs(a.p33 - b.p33),
                              std::abs(a.p44 - b.p44), std::abs(a.rho23 - b.rho23),
                              std::abs(std::abs(a.rho14) - std::abs(b.rho14))});
            }
            c.passed = d <= o.oracle_tol;
            c.detail = "max_abs=" + fmt_num(d);
        } catch (const std::exception& e) {
            c.detail = e.what();
        }
        rep.checks.push_back(std::move(c));
    }
}

inline void check_visibility(ValidationReport& rep) {
    const int n = 64;
    double vmax = 0.0, r_at = 0.0, u_at = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double r = 2.0 * i / (n - 1), u = static_cast<double>(j) / (n - 1);
            const double v = visibility_separate(r, u);
            if (v > vmax) {
                vmax = v;
                r_at = r;
                u_at = u;
            }
        }
    }
    rep.checks.push_back({"visibility", "bound_gamma0", vmax <= 0.5 + 1e-12,
                          "max=" + fmt_num(vmax) + " at R=" + fmt_num(r_at) + " u=" + fmt_num(u_at)});

    double cmax = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            cmax = std::max(cmax, visibility_common(2.0 * i / (n - 1), static_cast<double>(j) / (n - 1)));
        }
    }
    rep.checks.push_back({"visibility", "bound_collective", cmax <= 1.0 + 1e-12, "max=" + fmt_num(cmax)});
}

} // namespace detail

inline ValidationReport run_validation(const ValidationOptions& o = {}) {
    std::mt19937_64 rng(o.seed);
    ValidationReport rep;
    detail::check_steady(rep, rng, o);
    detail::check_oracle(rep, rng, o);
    detail::check_visibility(rep);
    return rep;
}

} // namespace modecoupler

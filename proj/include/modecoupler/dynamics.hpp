// dynamics.hpp: fixed-step RK4 integration of the 7-variable system, the
// reduced bright/dark system, and a truncated two-mode Fock-space Lindblad
// oracle in the interaction picture

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "modecoupler/errors.hpp"
#include "modecoupler/format.hpp"
#include "modecoupler/liouvillian.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/statespace.hpp"

namespace modecoupler {

struct IntegrationOptions {
    double dt{0.01};
    std::size_t sample_every{1};       // record every n-th step (the final state is always kept)
    bool stop_when_stationary{false};  // stop once |dY/dt| < stationary_tol
    double stationary_tol{1e-10};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<XDensityMatrix> states;
    std::optional<SystemParams> params{};
    double dt{0.0};
    std::string method;

    const XDensityMatrix& final_state() const { return states.back(); }
};

/// Time samples of a real affine system (used for the Y and reduced systems).
struct AffineTrajectory {
    std::vector<double> times;
    std::vector<Vec7> values;
};

inline constexpr double step_guard_factor = 0.05;

/// Largest admissible step, 0.05 / max(omega, kappa, epsilon, gamma0).
inline double max_step(const SystemParams& p) {
    const double rate = std::max({p.omega, p.kappa, p.epsilon, gamma0_of(p)});
    return step_guard_factor / rate;
}

namespace detail {

inline void check_step(double dt, double max_dt) {
    if (!(dt > 0.0)) throw StepSizeError("time step must be positive");
    if (dt > max_dt * (1.0 + 1e-12)) {
        std::ostringstream os;
        os.precision(output_digits);
        os << "time step " << dt << " exceeds stability guard " << max_dt;
        throw StepSizeError(os.str());
    }
}

// Uniform step count covering [0, t_end] with steps no longer than dt.
inline long step_count(double t_end, double dt) {
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be finite and >= 0");
    if (t_end == 0.0) return 0;
    return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

// Rate scale hidden in a built Y-system: omega, kappa, epsilon, gamma0.
inline double guard_rate(const LinearSystem& s) {
    const double w = s.at(6, 7) / 2.0;
    const double k = s.at(2, 5);
    const double e = s.at(1, 7);
    const double g0 = -s.at(4, 4);
    return std::max({w, k, e, g0});
}

} // namespace detail

/// Classical fourth-order Runge-Kutta step for any vector space type.
template <class State, class Deriv>
State rk4_step(const State& y, double t, double h, Deriv&& f) {
    const State k1 = f(t, y);
    const State k2 = f(t + h / 2.0, State(y + (h / 2.0) * k1));
    const State k3 = f(t + h / 2.0, State(y + (h / 2.0) * k2));
    const State k4 = f(t + h, State(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrates dZ/dt = m Z + p with fixed RK4 steps of length <= dt.
inline AffineTrajectory integrate_affine(const Mat7& m, const Vec7& p, const Vec7& z0, double t_end,
                                         const IntegrationOptions& opt) {
    const long n = detail::step_count(t_end, opt.dt);
    const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;
    const std::size_t every = std::max<std::size_t>(opt.sample_every, 1);
    auto f = [&](double, const Vec7& z) -> Vec7 { return m * z + p; };

    AffineTrajectory tr;
    tr.times.push_back(0.0);
    tr.values.push_back(z0);
    Vec7 z = z0;
    for (long k = 1; k <= n; ++k) {
        z = rk4_step(z, static_cast<double>(k - 1) * h, h, f);
        if (!z.allFinite()) throw NonFiniteError("integration produced non-finite values");
        const double t = static_cast<double>(k) * h;
        const bool stationary = opt.stop_when_stationary && f(t, z).norm() < opt.stationary_tol;
        if (k == n || stationary || static_cast<std::size_t>(k) % every == 0) {
            tr.times.push_back(t);
            tr.values.push_back(z);
        }
        if (stationary) break;
    }
    return tr;
}

/// RK4 trajectory of dY/dt = M Y + P from y0.
inline Trajectory integrate_linear(const LinearSystem& sys, const Vec7& y0, double t_end,
                                   const IntegrationOptions& opt) {
    detail::check_step(opt.dt, step_guard_factor / detail::guard_rate(sys));
    const AffineTrajectory a = integrate_affine(sys.m, sys.p, y0, t_end, opt);
    Trajectory tr;
    tr.times = a.times;
    tr.states.reserve(a.values.size());
    for (const Vec7& y : a.values) tr.states.push_back(unpack(y));
    const long n = detail::step_count(t_end, opt.dt);
    tr.dt = n > 0 ? t_end / static_cast<double>(n) : 0.0;
    tr.method = "rk4-linear";
    return tr;
}

inline Trajectory integrate_linear(const SystemParams& params, const XDensityMatrix& rho0,
                                   double t_end, const IntegrationOptions& opt) {
    Trajectory tr = integrate_linear(build(params), pack(rho0), t_end, opt);
    tr.params = params;
    return tr;
}

/// RK4 trajectory of the reduced bright/dark system (gamma_a = gamma_b = gamma),
/// returned in the product basis.
inline Trajectory integrate_reduced(const SystemParams& params, const XDensityMatrix& rho0,
                                    double t_end, const IntegrationOptions& opt) {
    detail::check_step(opt.dt, max_step(params));
    const ReducedSystem sys = build_reduced(params);
    const Vec7 z0 = pack_reduced(to_bd(rho0, params.gamma_a, params.gamma_b));
    const AffineTrajectory a = integrate_affine(sys.m, sys.p, z0, t_end, opt);
    Trajectory tr;
    tr.times = a.times;
    for (const Vec7& z : a.values) {
        tr.states.push_back(from_bd(unpack_reduced(z), params.gamma_a, params.gamma_b));
    }
    tr.params = params;
    tr.method = "rk4-reduced";
    return tr;
}

/// Default horizon for reaching the steady state: 50 / (smallest positive rate).
inline double default_settle_time(const SystemParams& p) {
    double m = std::numeric_limits<double>::infinity();
    for (double r : {p.omega, p.kappa, p.epsilon, p.gamma_a, p.gamma_b, p.gamma, gamma0_of(p)}) {
        if (r > 0.0) m = std::min(m, r);
    }
    return 50.0 / m;
}

/// Long-time limit of the Y-system from rho0, stopping early once
/// |dY/dt| < 1e-10.
inline XDensityMatrix settle(const SystemParams& params, const XDensityMatrix& rho0,
                             std::optional<double> t_end = std::nullopt,
                             std::optional<double> dt = std::nullopt) {
    IntegrationOptions opt;
    opt.dt = dt.value_or(max_step(params));
    opt.sample_every = std::numeric_limits<std::size_t>::max();
    opt.stop_when_stationary = true;
    return integrate_linear(params, rho0, t_end.value_or(default_settle_time(params)), opt).final_state();
}

// ---------------------------------------------------------------------------
// Truncated Fock-space oracle. Basis index = nA * (n_max + 1) + nB, so for
// n_max = 1 the ordering is |00>, |01>, |10>, |11> = |1>, |2>, |3>, |4>.

struct FockState {
    int n_max{1};
    Eigen::MatrixXcd rho;
    static constexpr const char* frame = "interaction_picture";

    int dim() const { return (n_max + 1) * (n_max + 1); }
    int index(int na, int nb) const { return na * (n_max + 1) + nb; }
};

namespace detail {

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace detail

/// Truncated annihilation operator on n_max + 1 levels, <n-1|a|n> = sqrt(n).
inline Eigen::MatrixXcd annihilation(int n_max) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// Right-hand side of the two-mode master equation with resonant (kappa) and
/// antiresonant (epsilon, rotating at 2 omega) couplings, local damping
/// gamma_a, gamma_b and cross damping gamma.
class FockGenerator {
public:
    FockGenerator(const SystemParams& params, int n_max) : p_(validate(params)), n_max_(n_max) {
        if (n_max < 1) throw DomainError("n_max must be >= 1");
        const Eigen::MatrixXcd a = annihilation(n_max);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
        aa_ = detail::kron(a, id);
        ab_ = detail::kron(id, a);
        aad_ = aa_.adjoint();
        abd_ = ab_.adjoint();
        hop_ = aa_ * abd_ + aad_ * ab_;
        pair_down_ = aa_ * ab_;
        pair_up_ = abd_ * aad_;
        na_ = aad_ * aa_;
        nb_ = abd_ * ab_;
        ad_a_b_ = aad_ * ab_;
        ad_b_a_ = abd_ * aa_;
    }

    int n_max() const { return n_max_; }
    int dim() const { return static_cast<int>(aa_.rows()); }
    const Eigen::MatrixXcd& a_a() const { return aa_; }
    const Eigen::MatrixXcd& a_b() const { return ab_; }

    Eigen::MatrixXcd hamiltonian(double t) const {
        const cplx ph = std::polar(1.0, 2.0 * p_.omega * t);
        return p_.kappa * hop_ + p_.epsilon * (ph * pair_down_ + std::conj(ph) * pair_up_);
    }

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho, double t) const {
        const cplx i(0.0, 1.0);
        const Eigen::MatrixXcd h = hamiltonian(t);
        Eigen::MatrixXcd d = -i * (h * rho - rho * h);
        d += p_.gamma_a * (aa_ * rho * aad_ - 0.5 * (na_ * rho + rho * na_));
        d += p_.gamma_b * (ab_ * rho * abd_ - 0.5 * (nb_ * rho + rho * nb_));
        if (p_.gamma != 0.0) {
            // i = A, j = B and i = B, j = A
            d += p_.gamma * (ab_ * rho * aad_ - 0.5 * (ad_a_b_ * rho + rho * ad_a_b_));
            d += p_.gamma * (aa_ * rho * abd_ - 0.5 * (ad_b_a_ * rho + rho * ad_b_a_));
        }
        return d;
    }

private:
    SystemParams p_;
    int n_max_;
    Eigen::MatrixXcd aa_, ab_, aad_, abd_, hop_, pair_down_, pair_up_, na_, nb_, ad_a_b_, ad_b_a_;
};

inline FockState fock_liouvillian(const SystemParams& params, const FockState& rho, double t) {
    FockGenerator gen(params, rho.n_max);
    return FockState{rho.n_max, gen.apply(rho.rho, t)};
}

/// Embeds an X state into the Fock space of the given truncation.
inline FockState embed(const XDensityMatrix& x, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    FockState f;
    f.n_max = n_max;
    f.rho = Eigen::MatrixXcd::Zero(f.dim(), f.dim());
    const int i1 = f.index(0, 0), i2 = f.index(0, 1), i3 = f.index(1, 0), i4 = f.index(1, 1);
    f.rho(i1, i1) = x.p11;
    f.rho(i2, i2) = x.p22;
    f.rho(i3, i3) = x.p33;
    f.rho(i4, i4) = x.p44;
    f.rho(i2, i3) = x.rho23;
    f.rho(i3, i2) = std::conj(x.rho23);
    f.rho(i1, i4) = x.rho14;
    f.rho(i4, i1) = std::conj(x.rho14);
    return f;
}

/// Low-sector elements of a Fock state, with rho14 left in the interaction picture.
inline XDensityMatrix low_sector(const FockState& f) {
    const int i1 = f.index(0, 0), i2 = f.index(0, 1), i3 = f.index(1, 0), i4 = f.index(1, 1);
    XDensityMatrix x;
    x.p11 = f.rho(i1, i1).real();
    x.p22 = f.rho(i2, i2).real();
    x.p33 = f.rho(i3, i3).real();
    x.p44 = f.rho(i4, i4).real();
    x.rho23 = f.rho(i2, i3);
    x.rho14 = f.rho(i1, i4);
    return x;
}

/// The slowly varying two-photon coherence of the Y-system, recovered from the
/// interaction-picture one: -conj(rho14 exp(-2 i omega t)).
inline cplx rotating_two_photon_coherence(const FockState& f, double omega, double t) {
    const cplx r = low_sector(f).rho14 * std::polar(1.0, -2.0 * omega * t);
    return -std::conj(r);
}

/// Largest coherence in the 4x4 low sector outside the X pattern.
inline double max_off_x_coherence(const FockState& f) {
    const int idx[4] = {f.index(0, 0), f.index(0, 1), f.index(1, 0), f.index(1, 1)};
    double m = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const bool x_entry = r == c || (r == 1 && c == 2) || (r == 2 && c == 1) || (r == 0 && c == 3) ||
                                 (r == 3 && c == 0);
            if (!x_entry) m = std::max(m, std::abs(f.rho(idx[r], idx[c])));
        }
    }
    return m;
}

struct FockTrajectory {
    std::vector<double> times;
    std::vector<FockState> states;
    SystemParams params;
    double dt{0.0};
};

/// RK4 evolution of the full truncated density matrix; the time-dependent
/// generator is evaluated at t, t + h/2 and t + h.
inline FockTrajectory evolve_fock(const SystemParams& params, int n_max, const FockState& rho0,
                                  double t_end, const IntegrationOptions& opt) {
    detail::check_step(opt.dt, max_step(params));
    if (rho0.n_max != n_max) throw DomainError("initial Fock state has a different truncation");
    const FockGenerator gen(params, n_max);
    const long n = detail::step_count(t_end, opt.dt);
    const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;
    const std::size_t every = std::max<std::size_t>(opt.sample_every, 1);
    auto f = [&gen](double t, const Eigen::MatrixXcd& r) -> Eigen::MatrixXcd { return gen.apply(r, t); };

    FockTrajectory tr;
    tr.params = params;
    tr.dt = h;
    tr.times.push_back(0.0);
    tr.states.push_back(rho0);
    Eigen::MatrixXcd rho = rho0.rho;
    for (long k = 1; k <= n; ++k) {
        rho = rk4_step(rho, static_cast<double>(k - 1) * h, h, f);
        if (!rho.allFinite()) throw NonFiniteError("Fock evolution produced non-finite values");
        if (k == n || static_cast<std::size_t>(k) % every == 0) {
            tr.times.push_back(static_cast<double>(k) * h);
            tr.states.push_back(FockState{n_max, rho});
        }
    }
    return tr;
}

inline std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << "time," << xdensity_csv_header() << '\n';
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        os << fmt_num(tr.times[i]) << ',' << to_csv_row(tr.states[i]) << '\n';
    }
    return os.str();
}

/// Full density-matrix dump of a Fock trajectory (n_max <= 3 only).
inline nlohmann::json fock_trajectory_json(const FockTrajectory& tr) {
    if (tr.states.empty()) return nlohmann::json::object();
    const int n_max = tr.states.front().n_max;
    if (n_max > 3) throw DomainError("Fock JSON dump is limited to n_max <= 3");
    nlohmann::json out;
    out["n_max"] = n_max;
    out["frame"] = FockState::frame;
    out["basis"] = "index = nA*(n_max+1) + nB";
    out["samples"] = nlohmann::json::array();
    for (std::size_t s = 0; s < tr.times.size(); ++s) {
        const auto& m = tr.states[s].rho;
        nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                rr.push_back(m(r, c).real());
                ir.push_back(m(r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ir);
        }
        out["samples"].push_back({{"time", tr.times[s]}, {"re", re}, {"im", im}});
    }
    return out;
}

} // namespace modecoupler

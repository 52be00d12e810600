// liouvillian.hpp: the 7-variable linear generator dY/dt = M Y + P and the
// reduced bright/dark generator of the balanced, maximally collective regime

#pragma once

#include <optional>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "modecoupler/format.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/statespace.hpp"

namespace modecoupler {

using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat7 = Eigen::Matrix<double, 7, 7>;

// Index convention: the printed 1-based row/column k of M (and component Y_k)
// is stored at zero-based index k-1. This is the only place the mapping lives.
//   Y1 = rho11, Y2 = rho22, Y3 = rho33, Y4 = rho23 + rho32,
//   Y5 = i(rho23 - rho32), Y6 = rho14 + rho41, Y7 = i(rho14 - rho41)
constexpr int yi(int printed) { return printed - 1; }

struct LinearSystem {
    Mat7 m = Mat7::Zero();
    Vec7 p = Vec7::Zero();

    /// Printed (1-based) accessor.
    double at(int row, int col) const { return m(yi(row), yi(col)); }
    double drive(int k) const { return p(yi(k)); }
};

/// M and P assembled in scalar type T. Rates such as gamma0 are formed in T,
/// so an extended-precision solve sees the parameters without double rounding.
template <class T>
struct Generator {
    Eigen::Matrix<T, 7, 7> m = Eigen::Matrix<T, 7, 7>::Zero();
    Eigen::Matrix<T, 7, 1> p = Eigen::Matrix<T, 7, 1>::Zero();
};

template <class T>
Generator<T> generator(const SystemParams& params) {
    const SystemParams q = validate(params);
    const T ga = q.gamma_a, gb = q.gamma_b, g = q.gamma;
    const T g0 = (ga + gb) / T(2);
    const T k = q.kappa, e = q.epsilon, w = q.omega;

    Generator<T> s;
    auto set = [&s](int r, int c, T v) { s.m(yi(r), yi(c)) = v; };

    set(1, 2, gb);
    set(1, 3, ga);
    set(1, 4, g);
    set(1, 7, e);

    set(2, 1, -ga);
    set(2, 2, -2 * g0);
    set(2, 3, -ga);
    set(2, 4, -g / 2);
    set(2, 5, k);

    set(3, 1, -gb);
    set(3, 2, -gb);
    set(3, 3, -2 * g0);
    set(3, 4, -g / 2);
    set(3, 5, -k);

    set(4, 1, -2 * g);
    set(4, 2, -3 * g);
    set(4, 3, -3 * g);
    set(4, 4, -g0);

    set(5, 2, -2 * k);
    set(5, 3, 2 * k);
    set(5, 5, -g0);

    set(6, 6, -g0);
    set(6, 7, 2 * w);

    set(7, 1, -4 * e);
    set(7, 2, -2 * e);
    set(7, 3, -2 * e);
    set(7, 6, -2 * w);
    set(7, 7, -g0);

    s.p(yi(2)) = ga;
    s.p(yi(3)) = gb;
    s.p(yi(4)) = 2 * g;
    s.p(yi(7)) = 2 * e;
    return s;
}

inline LinearSystem build(const SystemParams& params) {
    const Generator<double> g = generator<double>(params);
    LinearSystem s;
    s.m = g.m;
    s.p = g.p;
    return s;
}

inline Vec7 rhs(const LinearSystem& sys, const Vec7& y) { return sys.m * y + sys.p; }

inline Vec7 pack(const XDensityMatrix& r) {
    Vec7 y;
    y << r.p11, r.p22, r.p33, 2.0 * r.rho23.real(), -2.0 * r.rho23.imag(), 2.0 * r.rho14.real(),
        -2.0 * r.rho14.imag();
    return y;
}

/// Inverse of pack; rho44 comes from the closure relation.
inline XDensityMatrix unpack(const Vec7& y) {
    XDensityMatrix r;
    r.p11 = y(0);
    r.p22 = y(1);
    r.p33 = y(2);
    r.p44 = 1.0 - y(0) - y(1) - y(2);
    r.rho23 = cplx(y(3) / 2.0, -y(4) / 2.0);
    r.rho14 = cplx(y(5) / 2.0, -y(6) / 2.0);
    return r;
}

/// Time derivative of the X-state elements coded directly from the
/// element-wise equations of motion (independent of the matrix form). The
/// returned p44 is -(dp11 + dp22 + dp33).
inline XDensityMatrix rhs_elementwise(const SystemParams& q, const XDensityMatrix& r) {
    const double ga = q.gamma_a, gb = q.gamma_b, g = q.gamma;
    const double g0 = gamma0_of(q);
    const double k = q.kappa, e = q.epsilon, w = q.omega;
    const cplx i(0.0, 1.0);
    const cplx r32 = std::conj(r.rho23), r41 = std::conj(r.rho14);

    XDensityMatrix d;
    d.p11 = (gb * r.p22 + ga * r.p33 + g * (r.rho23 + r32) + i * e * (r.rho14 - r41)).real();
    d.p22 = (ga - 2.0 * g0 * r.p22 - ga * (r.p11 + r.p33) - 0.5 * (g - 2.0 * i * k) * r.rho23 -
             0.5 * (g + 2.0 * i * k) * r32)
                .real();
    d.p33 = (gb - 2.0 * g0 * r.p33 - gb * (r.p11 + r.p22) - 0.5 * (g + 2.0 * i * k) * r.rho23 -
             0.5 * (g - 2.0 * i * k) * r32)
                .real();
    d.p44 = -(d.p11 + d.p22 + d.p33);
    d.rho23 = g - g0 * r.rho23 - g * (r.p11 + r.p22 + r.p33) - 0.5 * (g - 2.0 * i * k) * r.p22 -
              0.5 * (g + 2.0 * i * k) * r.p33;
    d.rho14 = -i * e - (g0 - 2.0 * i * w) * r.rho14 + i * e * (2.0 * r.p11 + r.p22 + r.p33);
    return d;
}

struct SingularityReport {
    bool singular{false};
    double sigma_ratio{0.0};          // sigma_min / sigma_max
    std::optional<Vec7> conserved{};  // c with c^T M = 0, so d(c.Y)/dt = c.P
};

inline constexpr double singular_sigma_ratio = 1e-10;

/// SVD rank test on M. When singular, the left null vector identifies the
/// conserved linear combination of Y (the dark-state population in the
/// balanced, maximally collective regime).
inline SingularityReport singularity(const LinearSystem& sys) {
    Eigen::JacobiSVD<Mat7> svd(sys.m, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    SingularityReport rep;
    rep.sigma_ratio = sv(0) > 0.0 ? sv(6) / sv(0) : 0.0;
    rep.singular = rep.sigma_ratio < singular_sigma_ratio;
    if (rep.singular) rep.conserved = svd.matrixU().col(6);
    return rep;
}

/// Dark-state population as a linear functional of Y:
/// rho_dd = (gA Y2 + gB Y3 - sqrt(gA gB) Y4) / (2 g0).
inline Vec7 dark_population_functional(const SystemParams& q) {
    const double g0 = gamma0_of(q);
    if (!(g0 > 0.0)) throw DomainError("dark-state population needs gamma_a + gamma_b > 0");
    Vec7 c = Vec7::Zero();
    c(yi(2)) = q.gamma_a / (2.0 * g0);
    c(yi(3)) = q.gamma_b / (2.0 * g0);
    c(yi(4)) = -std::sqrt(q.gamma_a * q.gamma_b) / (2.0 * g0);
    return c;
}

inline std::string dump_csv(const LinearSystem& sys) {
    std::ostringstream os;
    os << "row,m1,m2,m3,m4,m5,m6,m7,p\n";
    for (int r = 0; r < 7; ++r) {
        os << r + 1;
        for (int c = 0; c < 7; ++c) os << ',' << fmt_num(sys.m(r, c));
        os << ',' << fmt_num(sys.p(r)) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Reduced system for gamma_a = gamma_b = gamma. Variables, packed like Y:
//   Z1 = rho_dd, Z2 = rho_bb, Z3 = rho_bd + rho_db, Z4 = i(rho_bd - rho_db),
//   Z5 = rho11, Z6 = rho14 + rho41, Z7 = i(rho14 - rho41)
// The bright-state row carries -4 g0 rho_bb: |b> decays at 2 g0 and is fed
// from |4> at 2 g0, with rho44 = 1 - rho_dd - rho_bb - rho11.

struct ReducedSystem {
    Mat7 m = Mat7::Zero();
    Vec7 p = Vec7::Zero();
    static constexpr int conserved_index = 0;  // rho_dd row is identically zero
};

inline ReducedSystem build_reduced(const SystemParams& params) {
    const SystemParams q = validate(params);
    const double g0 = gamma0_of(q);
    if (!is_balanced(q) || std::abs(q.gamma - g0) > regime_rel_tol * g0 || !(g0 > 0.0)) {
        throw DomainError("build_reduced requires gamma_a = gamma_b = gamma > 0");
    }
    const double k = q.kappa, e = q.epsilon, w = q.omega;
    ReducedSystem s;
    auto set = [&s](int r, int c, double v) { s.m(yi(r), yi(c)) = v; };

    set(2, 1, -2.0 * g0);
    set(2, 2, -4.0 * g0);
    set(2, 5, -2.0 * g0);

    set(3, 3, -g0);
    set(3, 4, -2.0 * k);
    set(4, 3, 2.0 * k);
    set(4, 4, -g0);

    set(5, 2, 2.0 * g0);
    set(5, 7, e);

    set(6, 6, -g0);
    set(6, 7, 2.0 * w);

    set(7, 1, -2.0 * e);
    set(7, 2, -2.0 * e);
    set(7, 5, -4.0 * e);
    set(7, 6, -2.0 * w);
    set(7, 7, -g0);

    s.p(yi(2)) = 2.0 * g0;
    s.p(yi(7)) = 2.0 * e;
    return s;
}

inline Vec7 rhs(const ReducedSystem& sys, const Vec7& z) { return sys.m * z + sys.p; }

inline Vec7 pack_reduced(const BdDensity& bd) {
    Vec7 z;
    z << bd.p_dd, bd.p_bb, 2.0 * bd.rho_bd.real(), -2.0 * bd.rho_bd.imag(), bd.p11,
        2.0 * bd.rho14.real(), -2.0 * bd.rho14.imag();
    return z;
}

inline BdDensity unpack_reduced(const Vec7& z) {
    BdDensity bd;
    bd.p_dd = z(0);
    bd.p_bb = z(1);
    bd.rho_bd = cplx(z(2) / 2.0, -z(3) / 2.0);
    bd.p11 = z(4);
    bd.rho14 = cplx(z(5) / 2.0, -z(6) / 2.0);
    bd.p44 = 1.0 - bd.p_dd - bd.p_bb - bd.p11;
    return bd;
}

} // namespace modecoupler

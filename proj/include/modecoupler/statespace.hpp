// statespace.hpp: the four low-excitation states, X-shaped density matrices,
// and the bright/dark single-excitation basis

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "modecoupler/errors.hpp"
#include "modecoupler/format.hpp"

namespace modecoupler {

using cplx = std::complex<double>;

// |1> = |0A,0B>, |2> = |0A,1B>, |3> = |1A,0B>, |4> = |1A,1B>.
enum class BasisLabel : int { S1 = 0, S2 = 1, S3 = 2, S4 = 3 };

inline constexpr int basis_size = 4;

/// Density matrix restricted to the X pattern: four populations, the
/// one-photon coherence rho23 and the two-photon coherence rho14. rho32 and
/// rho41 follow from Hermiticity; every other coherence is zero.
struct XDensityMatrix {
    double p11{1.0};
    double p22{0.0};
    double p33{0.0};
    double p44{0.0};
    cplx rho23{};
    cplx rho14{};

    double trace() const { return p11 + p22 + p33 + p44; }

    /// Dense 4x4 matrix in the |1>..|4> ordering.
    Eigen::Matrix4cd dense() const {
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        m(0, 0) = p11;
        m(1, 1) = p22;
        m(2, 2) = p33;
        m(3, 3) = p44;
        m(1, 2) = rho23;
        m(2, 1) = std::conj(rho23);
        m(0, 3) = rho14;
        m(3, 0) = std::conj(rho14);
        return m;
    }

    /// Smallest of the two X-block positivity margins,
    /// min(p22*p33 - |rho23|^2, p11*p44 - |rho14|^2). Exact for X states
    /// together with non-negative populations.
    double x_positivity_margin() const {
        return std::min(p22 * p33 - std::norm(rho23), p11 * p44 - std::norm(rho14));
    }

    double min_population() const { return std::min(std::min(p11, p22), std::min(p33, p44)); }

    bool is_physical(double trace_tol, double pos_tol) const {
        return std::abs(trace() - 1.0) <= trace_tol && min_population() >= -pos_tol &&
               x_positivity_margin() >= -pos_tol;
    }

    friend bool operator==(const XDensityMatrix&, const XDensityMatrix&) = default;
};

inline XDensityMatrix vacuum() { return XDensityMatrix{}; }

/// Largest absolute entrywise difference between two X states.
inline double max_abs_diff(const XDensityMatrix& a, const XDensityMatrix& b) {
    double m = std::abs(a.p11 - b.p11);
    m = std::max(m, std::abs(a.p22 - b.p22));
    m = std::max(m, std::abs(a.p33 - b.p33));
    m = std::max(m, std::abs(a.p44 - b.p44));
    m = std::max(m, std::abs(a.rho23 - b.rho23));
    m = std::max(m, std::abs(a.rho14 - b.rho14));
    return m;
}

/// Same state written in {|1>, |b>, |d>, |4>} with
///   |b> = (sqrt(gA)|3> + sqrt(gB)|2>) / sqrt(2 g0)
///   |d> = (sqrt(gB)|3> - sqrt(gA)|2>) / sqrt(2 g0).
struct BdDensity {
    double p11{1.0};
    double p_bb{0.0};
    double p_dd{0.0};
    double p44{0.0};
    cplx rho_bd{};
    cplx rho14{};

    double trace() const { return p11 + p_bb + p_dd + p44; }
};

namespace detail {

// Rows are <b| and <d| expressed in the (|2>, |3>) basis.
inline Eigen::Matrix2d bd_rotation(double gamma_a, double gamma_b) {
    if (!(gamma_a >= 0.0 && gamma_b >= 0.0) || !(gamma_a + gamma_b > 0.0)) {
        throw DomainError("bright/dark basis needs non-negative rates with gamma_a + gamma_b > 0");
    }
    const double n = std::sqrt(gamma_a + gamma_b);
    const double sa = std::sqrt(gamma_a) / n;
    const double sb = std::sqrt(gamma_b) / n;
    Eigen::Matrix2d u;
    u << sb, sa, -sa, sb;
    return u;
}

} // namespace detail

inline BdDensity to_bd(const XDensityMatrix& rho, double gamma_a, double gamma_b) {
    const Eigen::Matrix2d u = detail::bd_rotation(gamma_a, gamma_b);
    Eigen::Matrix2cd s;
    s << rho.p22, rho.rho23, std::conj(rho.rho23), rho.p33;
    const Eigen::Matrix2cd t = u.cast<cplx>() * s * u.transpose().cast<cplx>();
    BdDensity bd;
    bd.p11 = rho.p11;
    bd.p44 = rho.p44;
    bd.p_bb = t(0, 0).real();
    bd.p_dd = t(1, 1).real();
    bd.rho_bd = t(0, 1);
    bd.rho14 = rho.rho14;
    return bd;
}

inline XDensityMatrix from_bd(const BdDensity& bd, double gamma_a, double gamma_b) {
    const Eigen::Matrix2d u = detail::bd_rotation(gamma_a, gamma_b);
    Eigen::Matrix2cd t;
    t << bd.p_bb, bd.rho_bd, std::conj(bd.rho_bd), bd.p_dd;
    const Eigen::Matrix2cd s = u.transpose().cast<cplx>() * t * u.cast<cplx>();
    XDensityMatrix rho;
    rho.p11 = bd.p11;
    rho.p44 = bd.p44;
    rho.p22 = s(0, 0).real();
    rho.p33 = s(1, 1).real();
    rho.rho23 = s(0, 1);
    rho.rho14 = bd.rho14;
    return rho;
}

/// Mixture (1 - p_dd) |1><1| + p_dd |d><d|, the natural initial state for the
/// singular balanced regime.
inline XDensityMatrix vacuum_dark_mixture(double p_dd, double gamma_a, double gamma_b) {
    if (!(p_dd >= 0.0 && p_dd <= 1.0)) throw DomainError("p_dd must lie in [0, 1]");
    BdDensity bd;
    bd.p11 = 1.0 - p_dd;
    bd.p_dd = p_dd;
    return from_bd(bd, gamma_a, gamma_b);
}

inline const char* xdensity_csv_header() {
    return "p11,p22,p33,p44,re_rho23,im_rho23,re_rho14,im_rho14";
}

inline std::string to_csv_row(const XDensityMatrix& r) {
    return join_csv({r.p11, r.p22, r.p33, r.p44, r.rho23.real(), r.rho23.imag(), r.rho14.real(),
                     r.rho14.imag()});
}

} // namespace modecoupler

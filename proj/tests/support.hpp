#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "modecoupler.hpp"

namespace testing_support {

using modecoupler::cplx;
using modecoupler::SystemParams;
using modecoupler::XDensityMatrix;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random valid X state: random 2x2 PSD blocks, normalized.
inline XDensityMatrix random_x_state(std::mt19937_64& rng) {
    auto block = [&](double& a, double& b, cplx& c) {
        Eigen::Matrix2cd g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
        const Eigen::Matrix2cd m = g * g.adjoint();
        a = m(0, 0).real();
        b = m(1, 1).real();
        c = m(0, 1);
    };
    XDensityMatrix x;
    block(x.p22, x.p33, x.rho23);
    block(x.p11, x.p44, x.rho14);
    const double t = x.trace();
    x.p11 /= t;
    x.p22 /= t;
    x.p33 /= t;
    x.p44 /= t;
    x.rho23 /= t;
    x.rho14 /= t;
    return x;
}

/// Parameters on the general branch with moderate rates (all in [0.05, 2]).
inline SystemParams moderate_params(std::mt19937_64& rng) {
    SystemParams p;
    p.omega = uniform(rng, 0.5, 2.0);
    p.kappa = uniform(rng, 0.05, 2.0);
    p.epsilon = uniform(rng, 0.05, 2.0);
    p.gamma_a = uniform(rng, 0.05, 2.0);
    p.gamma_b = uniform(rng, 0.05, 2.0);
    p.gamma = uniform(rng, 0.0, 0.95) * std::sqrt(p.gamma_a * p.gamma_b);
    return p;
}

inline double max_abs(const modecoupler::Vec7& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace testing_support

// Steady state, visibility and concurrence for the three damping regimes.

#include <cstdio>

#include "modecoupler.hpp"

int main() {
    using namespace modecoupler;
    SystemParams p;
    p.kappa = 0.5;
    p.epsilon = 0.8;
    p.gamma_a = 0.2;
    p.gamma_b = 0.01;

    for (double frac : {0.0, 0.5, 1.0}) {
        p.gamma = frac * max_collective_rate(p);
        const SteadyStateResult s = numeric_steady(p);
        const ConcurrenceResult c = concurrence(s.rho);
        std::printf("gamma=%.4f  regime=%-16s  V=%.6f  C=%.6f (C1=%.6f, C2=%.6f)  g2=%.6f\n", p.gamma,
                    to_string(s.regime), visibility_from_state(s.rho), c.c, c.c1, c.c2, g2(s.rho));
    }

    // balanced decay into a common reservoir: the dark state is never reached from vacuum
    SystemParams q{1.0, 0.5, 0.8, 0.1, 0.1, 0.1};
    for (double pdd0 : {0.0, 0.5, 1.0}) {
        const SteadyStateResult s = numeric_steady(q, pdd0);
        std::printf("pdd0=%.1f  C=%.6f  V=%.6f\n", pdd0, concurrence(s.rho).c, visibility_from_state(s.rho));
    }
    return 0;
}

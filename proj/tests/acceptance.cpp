// acceptance: one PASS/FAIL line per acceptance criterion.
//   acceptance               run all criteria
//   acceptance --criterion N run one (exit status reflects that criterion)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "modecoupler.hpp"

using namespace modecoupler;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

// Every state produced by criteria 1-10, inspected by criterion 11.
struct Collected {
    std::string origin;
    XDensityMatrix rho;
};
std::vector<Collected> g_states;

void keep(const std::string& origin, const XDensityMatrix& r) { g_states.push_back({origin, r}); }
void keep(const std::string& origin, const Trajectory& tr) {
    for (const auto& s : tr.states) keep(origin, s);
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Entrywise absolute difference, the scale for regime identities.
double entry_diff(const XDensityMatrix& a, const XDensityMatrix& b) { return max_abs_diff(a, b); }

Outcome criterion_1() {
    std::mt19937_64 rng(42);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const SystemParams p = random_params(rng);
        const auto a = analytic_general(p);
        const auto n = numeric_steady(p);
        keep("c1 analytic", a.rho);
        keep("c1 numeric", n.rho);
        worst = std::max(worst, max_rel_diff(a.rho, n.rho));
    }
    return {worst <= 1e-10, "20 draws, max relative deviation " + num(worst) + " (tol 1e-10)"};
}

Outcome criterion_2() {
    std::mt19937_64 rng(4242);
    double worst_ind = 0.0, worst_col = 0.0;
    for (int k = 0; k < 20; ++k) {
        SystemParams p = random_params(rng);
        p.gamma = 0.0;
        const auto g = analytic_general(p);
        const auto i = analytic_independent(p);
        keep("c2 independent", g.rho);
        worst_ind = std::max(worst_ind, entry_diff(g.rho, i.rho));
    }
    for (int k = 0; k < 20; ++k) {
        SystemParams p = random_params(rng);
        while (is_balanced(p)) p = random_params(rng);
        p.gamma = max_collective_rate(p);
        if (p.kappa == 0.0) p.kappa = 1e-3;
        const auto g = analytic_general(p);
        const auto c = analytic_collective_max(p);
        keep("c2 collective", g.rho);
        worst_col = std::max(worst_col, entry_diff(g.rho, c.rho));
    }
    return {worst_ind <= 1e-12 && worst_col <= 1e-12,
            "independent max |diff| " + num(worst_ind) + ", collective max |diff| " + num(worst_col) +
                " (tol 1e-12)"};
}

Outcome criterion_3() {
    const std::vector<SystemParams> sets = {
        {1.0, 0.5, 0.0, 0.2, 0.01, 0.0},
        {1.0, 1.0, 0.0, 1.0, 1.0, 0.0},
        {2.0, 0.3, 0.0, 0.2, 0.1, std::sqrt(0.02)},
        {1.0, 0.7, 0.0, 0.4, 0.4, 0.2},
    };
    int exact = 0, total = 0;
    std::string bad;
    for (const auto& p : sets) {
        const auto a = analytic_steady(p);
        const auto n = numeric_steady(p);
        IntegrationOptions opt;
        opt.dt = max_step(p);
        opt.sample_every = 50;
        const Trajectory tr = integrate_linear(p, vacuum(), 100.0, opt);
        keep("c3 analytic", a.rho);
        keep("c3 numeric", n.rho);
        keep("c3 ode", tr);
        for (const auto& [what, v] : {std::pair{"analytic", a.rho.p11}, std::pair{"numeric", n.rho.p11},
                                      std::pair{"ode", tr.final_state().p11}}) {
            ++total;
            if (v == 1.0) {
                ++exact;
            } else {
                bad += std::string(" ") + what + "=" + num(v - 1.0);
            }
        }
    }
    return {exact == total, std::to_string(exact) + "/" + std::to_string(total) + " paths give rho11 == 1" + bad};
}

Outcome criterion_4() {
    const double ga = 0.2, gb = 0.05, gmax = std::sqrt(ga * gb);
    const std::vector<SystemParams> sets = {
        {1.0, 0.5, 0.8, ga, gb, 0.0},
        {1.0, 0.5, 0.8, ga, gb, gmax},
        {1.0, 1.2, 0.4, 0.3, 0.3, 0.0},
        {1.0, 0.3, 1.1, 0.1, 0.4, std::sqrt(0.04)},
        {1.0, 0.8, 0.6, ga, gb, 0.5 * gmax},
    };
    IntegrationOptions opt;
    opt.dt = 0.01;
    opt.sample_every = 20;
    const double t_end = 20.0;
    double worst = 0.0;
    std::size_t samples = 0;
    for (const auto& p : sets) {
        const Trajectory lin = integrate_linear(p, vacuum(), t_end, opt);
        const FockTrajectory fock = evolve_fock(p, 1, embed(vacuum(), 1), t_end, opt);
        keep("c4 linear", lin);
        if (lin.states.size() != fock.states.size()) return {false, "sample grids differ"};
        for (std::size_t k = 1; k < lin.states.size(); ++k) {
            const XDensityMatrix& y = lin.states[k];
            const XDensityMatrix f = low_sector(fock.states[k]);
            keep("c4 fock", f);
            const double d = std::max({std::abs(y.p11 - f.p11), std::abs(y.p22 - f.p22), std::abs(y.p33 - f.p33),
                                       std::abs(y.p44 - f.p44), std::abs(y.rho23 - f.rho23),
                                       std::abs(std::abs(y.rho14) - std::abs(f.rho14))});
            worst = std::max(worst, d);
        }
        samples = lin.states.size() - 1;
    }
    return {worst <= 1e-6 && samples == 100,
            "5 sets x " + std::to_string(samples) + " samples, max deviation " + num(worst) + " (tol 1e-6)"};
}

Outcome criterion_5() {
    const SystemParams p{1.0, 0.5, 0.8, 0.5, 0.5, 0.5};
    double worst_limit = 0.0, worst_drift = 0.0;
    for (double pdd0 : {0.0, 0.3, 1.0}) {
        IntegrationOptions opt;
        opt.dt = max_step(p);
        opt.sample_every = 25;
        const Trajectory tr = integrate_linear(p, vacuum_dark_mixture(pdd0, p.gamma_a, p.gamma_b), 200.0, opt);
        keep("c5 ode", tr);
        for (const auto& s : tr.states) {
            worst_drift = std::max(worst_drift, std::abs(to_bd(s, p.gamma_a, p.gamma_b).p_dd - pdd0));
        }
        const auto ref = analytic_balanced_max(p, pdd0);
        keep("c5 analytic", ref.rho);
        worst_limit = std::max(worst_limit, entry_diff(tr.final_state(), ref.rho));
    }
    return {worst_limit <= 1e-8 && worst_drift <= 1e-9,
            "limit vs closed form " + num(worst_limit) + " (tol 1e-8), dark population drift " + num(worst_drift) +
                " (tol 1e-9)"};
}

Outcome criterion_6() {
    const int n = 64;
    double vmax = -1.0, arg_r = 0.0, arg_u = 0.0, worst_formula = 0.0;
    bool bounded = true;
    for (int i = 0; i < n; ++i) {
        const double r = 2.0 * i / (n - 1);
        for (int j = 0; j < n; ++j) {
            const double u = 1.0 * j / (n - 1);
            const SystemParams p{1.0, r, 0.7, 1.0 + u, 1.0 - u, 0.0};
            const auto st = numeric_steady(p);
            keep("c6 numeric", st.rho);
            const double v = visibility_from_state(st.rho);
            worst_formula = std::max(worst_formula, std::abs(v - visibility_separate(r, u)));
            bounded = bounded && v <= 0.5 + 1e-12;
            if (v > vmax) {
                vmax = v;
                arg_r = r;
                arg_u = u;
            }
        }
    }
    const double cell_r = 2.0 / (n - 1), cell_u = 1.0 / (n - 1);
    const bool located = std::abs(arg_r - 0.5) <= cell_r && std::abs(arg_u - 1.0) <= cell_u;
    return {bounded && located && std::abs(vmax - 0.5) <= 1e-3,
            "max V " + num(vmax) + " at (R, |u|) = (" + num(arg_r) + ", " + num(arg_u) + "), state vs closed form " +
                num(worst_formula)};
}

Outcome criterion_7() {
    const std::vector<SystemParams> sets = {
        {1.0, 0.5, 0.8, 0.5, 0.5, 0.5},
        {2.0, 0.1, 0.3, 0.01, 0.01, 0.01},
        {0.5, 1.5, 2.0, 1.2, 1.2, 1.2},
    };
    double worst = 0.0;
    for (const auto& p : sets) {
        for (const auto& [pdd0, want] : {std::pair{0.0, 1.0 / 3.0}, std::pair{1.0, 1.0}}) {
            const double v = visibility_analytic(p, pdd0);
            const auto st = analytic_balanced_max(p, pdd0);
            keep("c7 analytic", st.rho);
            worst = std::max({worst, std::abs(v - want), std::abs(visibility_from_state(st.rho) - want)});
        }
    }
    return {worst <= 1e-12, "3 triples, max |V - target| " + num(worst) + " (tol 1e-12)"};
}

Outcome criterion_8() {
    // (a) golden section of c2 over epsilon at gamma_d = 0, gamma = 0
    const double w = 1.0, g0 = 0.01;
    auto c2_at = [&](double e) {
        const auto st = analytic_steady(SystemParams{w, 0.5, e, g0, g0, 0.0});
        keep("c8 analytic", st.rho);
        return concurrence(st.rho).c2;
    };
    const double s = std::sqrt(4.0 * w * w + g0 * g0);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = s;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = c2_at(x1), f2 = c2_at(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = c2_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = c2_at(x1);
        }
    }
    const double e_star = 0.5 * (lo + hi), c_star = c2_at(e_star);
    const bool a_ok = std::abs(c_star - 0.3) <= 1e-3 && std::abs(e_star - s / 4.0) <= 1e-3;

    // (b), (c) kappa = 0 at the collective maximum
    const double ga = 0.2, gb = 0.01;
    const double want = std::sqrt(ga * gb) / gamma0_of(SystemParams{1.0, 0.0, 0.0, ga, gb, 0.0});
    double worst_b = 0.0, worst_c = 0.0;
    for (double e : {0.3, 1.0, 1.7}) {
        const SystemParams p{1.0, 0.0, e, ga, gb, std::sqrt(ga * gb)};
        const auto st = analytic_steady(p);
        keep("c8 trapped", st.rho);
        const double c1 = concurrence(st.rho).c1;
        worst_b = std::max(worst_b, std::abs(c1 - want));
        worst_c = std::max(worst_c, std::abs(c1 - visibility_analytic(p)));
    }
    const bool b_ok = worst_b <= 1e-12, c_ok = worst_c <= 1e-12;
    std::ostringstream os;
    os << "(a) " << (a_ok ? "ok" : "FAIL") << ": max c2 " << num(c_star) << " at eps " << num(e_star) << ", target 0.3 at "
       << num(s / 4.0) << " (tol 1e-3); (b) " << (b_ok ? "ok" : "FAIL") << ": |c1 - sqrt(gA gB)/g0| " << num(worst_b)
       << "; (c) " << (c_ok ? "ok" : "FAIL") << ": |c1 - V| " << num(worst_c);
    return {a_ok && b_ok && c_ok, os.str()};
}

Outcome criterion_9() {
    const SweepTable t = figure_dataset(FigureId::fig3b, 48);
    int n1 = 0, n2 = 0, bad = 0;
    for (const auto& r : t.rows) {
        if (r.status != RowStatus::ok) {
            ++bad;
            continue;
        }
        keep("c9 sweep", r.steady->rho);
        const auto& o = r.observables;
        if (o.concurrence.c1 > 1e-9) {
            ++n1;
            if (!(o.g2 && *o.g2 < 1.0)) ++bad;
        }
        if (o.concurrence.c2 > 1e-9) {
            ++n2;
            if (!(o.g2 && *o.g2 > 1.0)) ++bad;
        }
    }
    return {bad == 0 && t.rows.size() == 48u * 48u,
            std::to_string(n1) + " one-photon and " + std::to_string(n2) + " two-photon points, " +
                std::to_string(bad) + " violations"};
}

Outcome criterion_10() {
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double w = log_uniform(rng, 0.1, 10.0);
        const double g0 = log_uniform(rng, 1e-3, 2.0);
        const double e = log_uniform(rng, 1e-2, 2.0);
        const SystemParams p{w, 0.5 * w, e, g0, g0, 0.0};
        const auto st = numeric_steady(p);
        keep("c10 numeric", st.rho);
        const double want = 1.0 + (4.0 * w * w + g0 * g0) / (4.0 * e * e);
        worst = std::max(worst, rel(g2(st.rho), want));
    }
    return {worst <= 1e-12, "10 draws, max relative deviation " + num(worst) + " (tol 1e-12)"};
}

Outcome criterion_12() {
    const SweepTable f2 = figure_dataset(FigureId::fig2, 64);
    std::size_t mid = f2.rows.size() / 2, arg = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < f2.rows.size(); ++k) {
        const double v = std::abs(f2.rows[k].steady->rho.rho14);
        if (v > best) {
            best = v;
            arg = k;
        }
    }
    const bool fig2_ok = f2.rows[mid].coords[0] == 0.0 && std::abs(f2.rows[mid].steady->rho.rho23) <= 1e-15 && arg == mid;
    std::string detail = std::string("fig2 ") + (fig2_ok ? "ok" : "FAIL");

    bool ok = fig2_ok;
    const int n = 512;
    for (FigureId id : {FigureId::fig3b, FigureId::fig3c}) {
        const SweepTable t = figure_dataset(id, n);
        // branch label per cell: 0 none, 1 one-photon, 2 two-photon
        std::vector<int> lab(t.rows.size(), 0);
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
            const auto& c = t.rows[k].observables.concurrence;
            if (c.c > 1e-9) lab[k] = c.c1 > c.c2 ? 1 : 2;
        }
        const long c1 = std::count(lab.begin(), lab.end(), 1);
        const long c2 = std::count(lab.begin(), lab.end(), 2);
        long touching = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const int a = lab[static_cast<std::size_t>(i * n + j)];
                if (a == 0) continue;
                if (i + 1 < n) {
                    const int b = lab[static_cast<std::size_t>((i + 1) * n + j)];
                    touching += b != 0 && b != a;
                }
                if (j + 1 < n) {
                    const int b = lab[static_cast<std::size_t>(i * n + j + 1)];
                    touching += b != 0 && b != a;
                }
            }
        }
        const bool this_ok = c1 > 0 && c2 > 0 && touching == 0;
        ok = ok && this_ok;
        detail += "; " + to_string(id) + " one-photon " + std::to_string(c1) + " cells, two-photon " +
                  std::to_string(c2) + " cells, adjacent pairs " + std::to_string(touching);
    }
    return {ok, detail};
}

Outcome criterion_11();

const std::vector<std::function<Outcome()>> criteria = {
    criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5,  criterion_6,
    criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12,
};

Outcome criterion_11() {
    g_states.clear();
    for (int k = 0; k < 10; ++k) criteria[static_cast<std::size_t>(k)]();
    double worst_trace = 0.0, worst_pos = 0.0;
    std::string where;
    for (const auto& c : g_states) {
        worst_trace = std::max(worst_trace, std::abs(c.rho.trace() - 1.0));
        const double neg = -std::min(c.rho.min_population(), c.rho.x_positivity_margin());
        if (neg > worst_pos) {
            worst_pos = neg;
            where = c.origin;
        }
    }
    return {worst_trace <= 1e-6 && worst_pos <= 1e-8,
            std::to_string(g_states.size()) + " states, max |trace - 1| " + num(worst_trace) +
                ", max positivity violation " + num(worst_pos) + (where.empty() ? "" : " (" + where + ")")};
}

bool report(int n) {
    Outcome o;
    try {
        o = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str());
    std::fflush(stdout);
    return o.pass;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a == "--criterion" && k + 1 < argc) {
            const int n = std::atoi(argv[++k]);
            if (n < 1 || n > static_cast<int>(criteria.size())) {
                std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
                return 2;
            }
            which.push_back(n);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
            return 2;
        }
    }
    if (which.empty()) {
        for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) which.push_back(n);
    }
    int failed = 0;
    for (int n : which) failed += report(n) ? 0 : 1;
    return failed == 0 ? 0 : 1;
}

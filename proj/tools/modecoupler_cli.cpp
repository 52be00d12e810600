// modecoupler: command-line front end: steady, evolve, sweep, figure, validate

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modecoupler.hpp"

namespace mc = modecoupler;

namespace {

struct ParamFlags {
    std::optional<double> omega, kappa, epsilon, gamma_a, gamma_b, gamma, theta;
    std::string params_file;
    bool normalized{false};

    void attach(CLI::App* app) {
        app->add_option("--omega", omega, "mode frequency");
        app->add_option("--kappa", kappa, "resonant coupling");
        app->add_option("--epsilon", epsilon, "antiresonant coupling");
        app->add_option("--gamma-a", gamma_a, "damping rate of mode A");
        app->add_option("--gamma-b", gamma_b, "damping rate of mode B");
        app->add_option("--gamma", gamma, "cross damping rate");
        app->add_option("--theta", theta, "reservoir angle; gamma = sqrt(gamma_a gamma_b) cos(theta)");
        app->add_option("--params", params_file, "JSON parameter file (flags override its values)");
        app->add_flag("--normalized", normalized, "rates are given in units of omega (omega = 1)");
    }

    mc::SystemParams resolve(bool require_all = true) const {
        mc::SystemParams p;
        bool have[5] = {false, false, false, false, false};
        std::optional<double> th = theta;
        std::optional<double> g = gamma;
        if (!params_file.empty()) {
            std::ifstream in(params_file);
            if (!in) throw mc::IoError("cannot read parameter file '" + params_file + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw mc::DomainError("parameter file '" + params_file + "' is not valid JSON: " + e.what());
            }
            p = mc::params_from_json(j);
            for (bool& h : have) h = true;
            if (j.contains("gamma") && !g) g = p.gamma;
            if (p.theta && !th) th = p.theta;
            if (!g && !th) g = p.gamma;
        }
        auto set = [&](const std::optional<double>& v, double& field, bool& h) {
            if (v) {
                field = *v;
                h = true;
            }
        };
        set(omega, p.omega, have[0]);
        set(kappa, p.kappa, have[1]);
        set(epsilon, p.epsilon, have[2]);
        set(gamma_a, p.gamma_a, have[3]);
        set(gamma_b, p.gamma_b, have[4]);
        if (normalized) {
            if (omega && *omega != 1.0) throw mc::DomainError("--omega must be 1 (or omitted) with --normalized");
            p.omega = 1.0;
            have[0] = true;
        }
        if (!have[0]) {
            p.omega = 1.0;
            have[0] = true;
        }
        if (require_all) {
            static const char* names[5] = {"omega", "kappa", "epsilon", "gamma-a", "gamma-b"};
            for (int i = 0; i < 5; ++i) {
                if (!have[i]) throw mc::DomainError(std::string("missing parameter --") + names[i]);
            }
        }
        p.theta = th;
        if (g) {
            p.gamma = *g;
        } else if (th) {
            return mc::with_theta(p, *th);
        } else {
            p.gamma = 0.0;
        }
        return mc::validate(p);
    }
};

struct Output {
    std::string path;
    std::string format{"csv"};

    void attach(CLI::App* app) {
        app->add_option("--out", path, "output file (default: stdout)");
        app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    }

    bool json() const { return format == "json"; }

    void write(const std::string& text, const std::string& suffix = "") const {
        if (path.empty()) {
            if (suffix.empty()) std::cout << text;
            return;
        }
        const std::string target = path + suffix;
        std::ofstream out(target, std::ios::binary);
        if (!out) throw mc::IoError("cannot open '" + target + "' for writing");
        out << text;
        if (!out) throw mc::IoError("write to '" + target + "' failed");
    }
};

nlohmann::json state_json(const mc::XDensityMatrix& r) {
    return {{"p11", mc::json_num(r.p11)},
            {"p22", mc::json_num(r.p22)},
            {"p33", mc::json_num(r.p33)},
            {"p44", mc::json_num(r.p44)},
            {"rho23", {mc::json_num(r.rho23.real()), mc::json_num(r.rho23.imag())}},
            {"rho14", {mc::json_num(r.rho14.real()), mc::json_num(r.rho14.imag())}}};
}

nlohmann::json steady_json(const mc::SteadyStateResult& r) {
    nlohmann::json j{{"regime", mc::to_string(r.regime)},
                     {"denominator", mc::json_num(r.denominator)},
                     {"singular", r.singular},
                     {"rho", state_json(r.rho)}};
    j["initial_pdd"] = r.initial_pdd ? mc::json_num(*r.initial_pdd) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json rounded_params(const mc::SystemParams& p) {
    nlohmann::json j = mc::params_to_json(p);
    for (auto& [k, v] : j.items()) v = mc::json_num(v.get<double>());
    return j;
}

int cmd_steady(const ParamFlags& pf, const Output& out, std::optional<double> pdd0) {
    const mc::SystemParams p = pf.resolve();
    const mc::SteadyStateResult num = mc::numeric_steady(p, pdd0);
    std::optional<mc::SteadyStateResult> ana;
    std::string ana_note;
    try {
        ana = mc::analytic_steady(p, pdd0);
    } catch (const mc::SingularRegimeError& e) {
        ana_note = e.what();
    }
    const double dev = ana ? mc::max_abs_diff(ana->rho, num.rho) : std::numeric_limits<double>::quiet_NaN();
    const mc::ObservableSet obs = mc::evaluate(num.rho);

    if (out.json()) {
        nlohmann::json j;
        j["params"] = rounded_params(p);
        j["numeric"] = steady_json(num);
        j["analytic"] = ana ? steady_json(*ana) : nlohmann::json(nullptr);
        if (!ana_note.empty()) j["analytic_note"] = ana_note;
        j["max_abs_deviation"] = mc::json_num(dev);
        nlohmann::json o;
        for (const auto& c : mc::observable_columns()) o[c] = mc::json_num(mc::observable_value(obs, c));
        j["observables"] = o;
        out.write(j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream os;
    os << mc::steady_csv_header() << ",max_abs_deviation\n";
    if (ana) os << mc::to_csv_row("analytic", *ana) << ',' << mc::fmt_num(dev) << '\n';
    os << mc::to_csv_row("numeric", num) << ',' << mc::fmt_num(dev) << '\n';
    out.write(os.str());
    return 0;
}

struct EvolveFlags {
    double t_end{0.0};
    std::optional<double> dt;
    std::size_t sample_every{1};
    std::optional<double> pdd0;
    bool oracle{false};
    int n_max{1};
};

int cmd_evolve(const ParamFlags& pf, const Output& out, const EvolveFlags& ef) {
    const mc::SystemParams p = pf.resolve();
    mc::XDensityMatrix rho0 = mc::vacuum();
    if (ef.pdd0) rho0 = mc::vacuum_dark_mixture(*ef.pdd0, p.gamma_a, p.gamma_b);
    mc::IntegrationOptions opt;
    opt.dt = ef.dt.value_or(std::min(0.01, mc::max_step(p)));
    opt.sample_every = ef.sample_every;

    if (!ef.oracle) {
        const mc::Trajectory tr = mc::integrate_linear(p, rho0, ef.t_end, opt);
        if (out.json()) {
            nlohmann::json j;
            j["params"] = rounded_params(p);
            j["method"] = tr.method;
            j["dt"] = mc::json_num(tr.dt);
            j["samples"] = nlohmann::json::array();
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                j["samples"].push_back({{"time", mc::json_num(tr.times[i])}, {"rho", state_json(tr.states[i])}});
            }
            out.write(j.dump(2) + "\n");
        } else {
            out.write(mc::trajectory_csv(tr));
        }
        return 0;
    }

    const mc::FockTrajectory tr = mc::evolve_fock(p, ef.n_max, mc::embed(rho0, ef.n_max), ef.t_end, opt);
    if (out.json()) {
        out.write(mc::fock_trajectory_json(tr).dump(2) + "\n");
        return 0;
    }
    std::ostringstream os;
    os << "time," << mc::xdensity_csv_header() << ",max_off_x\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        mc::XDensityMatrix x = mc::low_sector(tr.states[i]);
        x.rho14 = mc::rotating_two_photon_coherence(tr.states[i], p.omega, tr.times[i]);
        os << mc::fmt_num(tr.times[i]) << ',' << mc::to_csv_row(x) << ','
           << mc::fmt_num(mc::max_off_x_coherence(tr.states[i])) << '\n';
    }
    out.write(os.str());
    return 0;
}

mc::Axis parse_axis(const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ':');) f.push_back(tok);
    if (f.size() < 4 || f.size() > 5 || (f.size() == 5 && f[4] != "log" && f[4] != "lin")) {
        throw mc::DomainError("axis '" + s + "' must look like name:min:max:count[:log]");
    }
    mc::Axis a;
    a.name = f[0];
    try {
        a.min = std::stod(f[1]);
        a.max = std::stod(f[2]);
        a.count = std::stoi(f[3]);
    } catch (const std::exception&) {
        throw mc::DomainError("axis '" + s + "' has a non-numeric field");
    }
    a.log = f.size() == 5 && f[4] == "log";
    return a;
}

std::pair<double, double> parse_range(const std::string& s) {
    const auto c = s.find(':');
    if (c == std::string::npos) throw mc::DomainError("range '" + s + "' must look like min:max");
    try {
        return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
    } catch (const std::exception&) {
        throw mc::DomainError("range '" + s + "' is not numeric");
    }
}

void emit_table(const mc::SweepTable& t, const Output& out) {
    const nlohmann::json meta = mc::table_sidecar(t);
    if (out.json()) {
        nlohmann::json j = meta;
        j["csv"] = mc::table_csv(t);
        out.write(j.dump(2) + "\n");
        return;
    }
    out.write(mc::table_csv(t));
    out.write(meta.dump(2) + "\n", ".json");
}

int cmd_sweep(const ParamFlags& pf, const Output& out, const std::vector<std::string>& axes,
              const std::vector<std::string>& outputs, std::optional<double> pdd0) {
    mc::SweepSpec spec;
    spec.base = pf.resolve(false);
    for (const auto& a : axes) spec.axes.push_back(parse_axis(a));
    spec.outputs = outputs;
    // singular points in a general sweep default to the vacuum-reachable branch
    spec.pdd0 = pdd0.value_or(0.0);
    emit_table(mc::run_sweep(spec), out);
    return 0;
}

int cmd_figure(const std::string& id, const Output& out, int resolution, const std::string& xr,
               const std::string& yr) {
    mc::FigureOptions fo;
    fo.resolution = resolution;
    if (!xr.empty()) fo.x_range = parse_range(xr);
    if (!yr.empty()) fo.y_range = parse_range(yr);
    mc::SweepSpec spec = mc::figure_spec(mc::parse_figure(id), fo);
    emit_table(mc::run_sweep(spec), out);
    return 0;
}

int cmd_validate(const Output& out, std::uint64_t seed) {
    mc::ValidationOptions vo;
    vo.seed = seed;
    const mc::ValidationReport rep = mc::run_validation(vo);
    std::ostringstream os;
    if (out.json()) {
        nlohmann::json j;
        j["seed"] = seed;
        j["passed"] = rep.passed();
        j["failed"] = rep.failed();
        j["checks"] = nlohmann::json::array();
        for (const auto& c : rep.checks) {
            j["checks"].push_back({{"suite", c.suite}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        os << j.dump(2) << '\n';
    } else {
        os << "suite,name,result,detail\n";
        for (const auto& c : rep.checks) {
            os << c.suite << ',' << c.name << ',' << (c.passed ? "pass" : "FAIL") << ',' << c.detail << '\n';
        }
        os << "# passed " << rep.passed() << ", failed " << rep.failed() << '\n';
    }
    out.write(os.str());
    return rep.ok() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady states, dynamics and correlations of two coupled damped bosonic modes"};
    app.set_version_flag("--version", std::string(mc::tool_version));
    app.require_subcommand(1);

    ParamFlags steady_p, evolve_p, sweep_p;
    Output steady_o, evolve_o, sweep_o, figure_o, validate_o;

    auto* steady = app.add_subcommand("steady", "analytic and numeric steady state");
    steady_p.attach(steady);
    steady_o.attach(steady);
    std::optional<double> steady_pdd0;
    steady->add_option("--pdd0", steady_pdd0, "initial dark-state population (singular regime)");

    auto* evolve = app.add_subcommand("evolve", "time evolution from vacuum or a vacuum/dark mixture");
    evolve_p.attach(evolve);
    evolve_o.attach(evolve);
    EvolveFlags ef;
    evolve->add_option("--t-end", ef.t_end, "final time")->required();
    evolve->add_option("--dt", ef.dt, "RK4 step");
    evolve->add_option("--sample-every", ef.sample_every, "record every n-th step");
    evolve->add_option("--pdd0", ef.pdd0, "start from (1 - pdd0)|00><00| + pdd0 |d><d|");
    evolve->add_flag("--oracle", ef.oracle, "evolve the truncated Fock-space master equation");
    evolve->add_option("--n-max", ef.n_max, "Fock truncation per mode (with --oracle)");

    auto* sweep = app.add_subcommand("sweep", "steady-state observables on a 1-D or 2-D grid");
    sweep_p.attach(sweep);
    sweep_o.attach(sweep);
    std::vector<std::string> axes, outputs;
    std::optional<double> sweep_pdd0;
    sweep->add_option("--axis", axes, "name:min:max:count[:log], one or two")->required();
    sweep->add_option("--outputs", outputs, "observable columns (default: all)");
    sweep->add_option("--pdd0", sweep_pdd0, "dark population for singular points (default 0)");

    auto* figure = app.add_subcommand("figure", "dataset for one of the reference figures");
    figure_o.attach(figure);
    std::string fig_id, xr, yr;
    int resolution = 64;
    figure->add_option("id", fig_id, "fig2, fig3a..c, fig4a..c, fig5, fig6a..c")->required();
    figure->add_option("--resolution", resolution, "grid points per axis (>= 16)");
    figure->add_option("--x-range", xr, "min:max of the first axis");
    figure->add_option("--y-range", yr, "min:max of the second axis");

    auto* validate = app.add_subcommand("validate", "seeded self-check suite");
    validate_o.attach(validate);
    std::uint64_t seed = 42;
    validate->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*steady) return cmd_steady(steady_p, steady_o, steady_pdd0);
        if (*evolve) return cmd_evolve(evolve_p, evolve_o, ef);
        if (*sweep) return cmd_sweep(sweep_p, sweep_o, axes, outputs, sweep_pdd0);
        if (*figure) return cmd_figure(fig_id, figure_o, resolution, xr, yr);
        if (*validate) return cmd_validate(validate_o, seed);
    } catch (const mc::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const mc::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

// sweep.hpp: parameter grids, steady-state tables and the figure datasets

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "modecoupler/errors.hpp"
#include "modecoupler/format.hpp"
#include "modecoupler/observables.hpp"
#include "modecoupler/params.hpp"
#include "modecoupler/statespace.hpp"
#include "modecoupler/steadystate.hpp"
#include "modecoupler/version.hpp"

namespace modecoupler {

inline const std::vector<std::string>& axis_names() {
    static const std::vector<std::string> names{"omega", "kappa", "epsilon", "gamma_a", "gamma_b",
                                                "gamma", "theta", "gamma_d", "pdd0"};
    return names;
}

struct Axis {
    std::string name;
    double min{0.0};
    double max{1.0};
    int count{2};
    bool log{false};

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / (count - 1);
            if (log) {
                v[i] = std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
            } else {
                v[i] = min + f * (max - min);
            }
        }
        // pin the end points so that e.g. a symmetric axis hits 0 exactly in the middle
        v.front() = min;
        v.back() = max;
        if (!log && count % 2 == 1 && min == -max) v[count / 2] = 0.0;
        return v;
    }
};

struct SweepSpec {
    SystemParams base;
    std::vector<Axis> axes;
    std::vector<std::string> outputs;  // empty: every observable column
    std::optional<double> pdd0;
};

inline void validate_spec(const SweepSpec& s) {
    validate(s.base);
    if (s.axes.empty() || s.axes.size() > 2) throw DomainError("sweep needs one or two axes");
    for (std::size_t i = 0; i < s.axes.size(); ++i) {
        const Axis& a = s.axes[i];
        const auto& names = axis_names();
        if (std::find(names.begin(), names.end(), a.name) == names.end()) {
            throw DomainError("unknown axis '" + a.name + "'");
        }
        if (a.count < 2) throw DomainError("axis '" + a.name + "': count must be >= 2");
        if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw DomainError("axis '" + a.name + "': range not finite");
        if (a.log && !(a.min > 0.0 && a.max > 0.0)) throw DomainError("axis '" + a.name + "': log axis needs positive range");
        if (i == 1 && a.name == s.axes[0].name) throw DomainError("axes must be distinct");
    }
    for (const auto& o : s.outputs) {
        const auto& cols = observable_columns();
        if (std::find(cols.begin(), cols.end(), o) == cols.end()) throw DomainError("unknown output column '" + o + "'");
    }
    if (s.pdd0 && !(*s.pdd0 >= 0.0 && *s.pdd0 <= 1.0)) throw DomainError("pdd0 must lie in [0, 1]");
}

enum class RowStatus { ok, unevaluated, error };

inline const char* to_string(RowStatus s) {
    switch (s) {
    case RowStatus::ok: return "ok";
    case RowStatus::unevaluated: return "unevaluated";
    case RowStatus::error: return "error";
    }
    return "?";
}

struct SweepRow {
    std::vector<double> coords;
    SystemParams params;
    RowStatus status{RowStatus::ok};
    std::string message;
    std::optional<Regime> regime;
    std::optional<SteadyStateResult> steady;
    ObservableSet observables;
};

struct SweepTable {
    SweepSpec spec;
    std::vector<SweepRow> rows;  // row-major: last axis fastest

    std::vector<std::string> output_columns() const {
        return spec.outputs.empty() ? observable_columns() : spec.outputs;
    }
};

namespace detail {

inline void apply_axis(SystemParams& p, std::optional<double>& pdd0, const std::string& name, double v) {
    if (name == "omega") p.omega = v;
    else if (name == "kappa") p.kappa = v;
    else if (name == "epsilon") p.epsilon = v;
    else if (name == "gamma_a") p.gamma_a = v;
    else if (name == "gamma_b") p.gamma_b = v;
    else if (name == "gamma") p.gamma = v;
    else if (name == "theta") p = with_theta(p, v);
    else if (name == "gamma_d") {
        const double g0 = gamma0_of(p);
        p.gamma_a = g0 + v;
        p.gamma_b = g0 - v;
    } else if (name == "pdd0") pdd0 = v;
}

inline SweepRow evaluate_point(const SweepSpec& spec, const std::vector<double>& coords) {
    SweepRow row;
    row.coords = coords;
    row.params = spec.base;
    std::optional<double> pdd0 = spec.pdd0;
    try {
        for (std::size_t i = 0; i < coords.size(); ++i) apply_axis(row.params, pdd0, spec.axes[i].name, coords[i]);
        const SystemParams p = validate(row.params);
        row.regime = classify(p);
        if (*row.regime == Regime::balanced_collective_max && !pdd0) {
            row.status = RowStatus::unevaluated;
            row.message = "singular regime: no pdd0 supplied";
            return row;
        }
        row.steady = numeric_steady(p, pdd0);
        row.observables = evaluate(row.steady->rho);
    } catch (const DomainError& e) {
        row.status = RowStatus::error;
        row.message = e.what();
    } catch (const NonFiniteError& e) {
        row.status = RowStatus::error;
        row.message = e.what();
    }
    return row;
}

inline unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MODECOUPLER_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) n = static_cast<unsigned>(v);
    }
    return n;
}

} // namespace detail

inline std::vector<std::vector<double>> grid_points(const SweepSpec& spec) {
    std::vector<std::vector<double>> pts;
    const auto v0 = spec.axes[0].values();
    if (spec.axes.size() == 1) {
        for (double a : v0) pts.push_back({a});
        return pts;
    }
    const auto v1 = spec.axes[1].values();
    pts.reserve(v0.size() * v1.size());
    for (double a : v0)
        for (double b : v1) pts.push_back({a, b});
    return pts;
}

struct SweepOptions {
    unsigned threads{0};                             // 0: hardware, capped by MODECOUPLER_THREADS
    std::optional<std::vector<std::size_t>> order;   // evaluation order; results are stored by index regardless
};

inline SweepTable run_sweep(const SweepSpec& spec, const SweepOptions& opt = {}) {
    validate_spec(spec);
    const auto pts = grid_points(spec);
    SweepTable table{spec, std::vector<SweepRow>(pts.size())};

    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (opt.order) {
        if (opt.order->size() != pts.size()) throw DomainError("evaluation order has the wrong length");
        order = *opt.order;
    }

    unsigned threads = opt.threads ? std::min(opt.threads, detail::thread_cap()) : detail::thread_cap();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, pts.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < order.size();) {
            const std::size_t i = order[k];
            table.rows.at(i) = detail::evaluate_point(spec, pts[i]);
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return table;
}

inline std::string table_csv(const SweepTable& t) {
    std::vector<std::string> head{"index"};
    for (const auto& a : t.spec.axes) head.push_back("axis_" + a.name);
    for (const char* c : {"omega", "kappa", "epsilon", "gamma_a", "gamma_b", "gamma", "status", "regime", "singular",
                          "p11", "p22", "p33", "p44", "re_rho23", "im_rho23", "re_rho14", "im_rho14", "abs_rho23",
                          "abs_rho14"})
        head.emplace_back(c);
    const auto outs = t.output_columns();
    head.insert(head.end(), outs.begin(), outs.end());

    std::string csv = join_csv(head) + "\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const SweepRow& r = t.rows[i];
        std::vector<std::string> cells{std::to_string(i)};
        for (double c : r.coords) cells.push_back(fmt_num(c));
        for (double v : {r.params.omega, r.params.kappa, r.params.epsilon, r.params.gamma_a, r.params.gamma_b,
                         r.params.gamma})
            cells.push_back(fmt_num(v));
        cells.emplace_back(to_string(r.status));
        cells.emplace_back(r.regime ? to_string(*r.regime) : "none");
        cells.emplace_back(r.steady && r.steady->singular ? "1" : "0");
        if (r.steady) {
            const XDensityMatrix& x = r.steady->rho;
            for (double v : {x.p11, x.p22, x.p33, x.p44, x.rho23.real(), x.rho23.imag(), x.rho14.real(),
                             x.rho14.imag(), std::abs(x.rho23), std::abs(x.rho14)})
                cells.push_back(fmt_num(v));
            for (const auto& o : outs) cells.push_back(fmt_num(observable_value(r.observables, o)));
        } else {
            for (int k = 0; k < 10; ++k) cells.push_back(fmt_num(nan));
            for (std::size_t k = 0; k < outs.size(); ++k) cells.push_back(fmt_num(nan));
        }
        csv += join_csv(cells) + "\n";
    }
    return csv;
}

inline nlohmann::json spec_to_json(const SweepSpec& s) {
    nlohmann::json j;
    j["base"] = params_to_json(s.base);
    j["axes"] = nlohmann::json::array();
    for (const auto& a : s.axes) {
        j["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"log", a.log}});
    }
    j["outputs"] = s.outputs;
    j["pdd0"] = s.pdd0 ? nlohmann::json(*s.pdd0) : nlohmann::json(nullptr);
    return j;
}

inline nlohmann::json table_sidecar(const SweepTable& t) {
    nlohmann::json j;
    j["tool"] = tool_name;
    j["version"] = tool_version;
    j["spec"] = spec_to_json(t.spec);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json e{{"status", to_string(r.status)}, {"regime", r.regime ? to_string(*r.regime) : "none"}};
        if (!r.message.empty()) e["message"] = r.message;
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    return j;
}

// ---- figure datasets --------------------------------------------------------

enum class FigureId { fig2, fig3a, fig3b, fig3c, fig4a, fig4b, fig4c, fig5, fig6a, fig6b, fig6c };

inline const std::vector<std::pair<FigureId, std::string>>& figure_ids() {
    static const std::vector<std::pair<FigureId, std::string>> ids{
        {FigureId::fig2, "fig2"},   {FigureId::fig3a, "fig3a"}, {FigureId::fig3b, "fig3b"}, {FigureId::fig3c, "fig3c"},
        {FigureId::fig4a, "fig4a"}, {FigureId::fig4b, "fig4b"}, {FigureId::fig4c, "fig4c"}, {FigureId::fig5, "fig5"},
        {FigureId::fig6a, "fig6a"}, {FigureId::fig6b, "fig6b"}, {FigureId::fig6c, "fig6c"}};
    return ids;
}

inline std::string to_string(FigureId id) {
    for (const auto& [k, v] : figure_ids())
        if (k == id) return v;
    return "?";
}

inline FigureId parse_figure(const std::string& s) {
    for (const auto& [k, v] : figure_ids())
        if (v == s) return k;
    throw DomainError("unknown figure '" + s + "'");
}

struct FigureOptions {
    int resolution{64};
    std::optional<std::pair<double, double>> x_range;  // first axis
    std::optional<std::pair<double, double>> y_range;  // second axis
};

inline SweepSpec figure_spec(FigureId id, const FigureOptions& opt = {}) {
    if (opt.resolution < 16) throw DomainError("resolution must be >= 16");
    const int n = opt.resolution;
    SweepSpec s;
    s.base.omega = 1.0;
    auto xr = opt.x_range.value_or(std::pair{0.0, 2.0});
    auto yr = opt.y_range.value_or(std::pair{0.0, 2.0});
    auto kappa_epsilon = [&] {
        s.axes = {{"kappa", xr.first, xr.second, n}, {"epsilon", yr.first, yr.second, n}};
    };
    const double gb = 0.01;
    switch (id) {
    case FigureId::fig2: {
        s.base.kappa = s.base.epsilon = 1.0;
        s.base.gamma_a = s.base.gamma_b = 1.0;
        s.base.gamma = 0.0;
        const auto r = opt.x_range.value_or(std::pair{-1.0, 1.0});
        // odd count so that gamma_d = 0 is a grid point
        s.axes = {{"gamma_d", r.first, r.second, n % 2 ? n : n + 1}};
        s.outputs = {"visibility", "c", "c1", "c2"};
        return s;
    }
    case FigureId::fig3a:
    case FigureId::fig6a: s.base.gamma_a = 0.01; break;
    case FigureId::fig3b:
    case FigureId::fig6b: s.base.gamma_a = 0.1; break;
    case FigureId::fig3c:
    case FigureId::fig6c: s.base.gamma_a = 0.2; break;
    case FigureId::fig4a:
    case FigureId::fig4b:
    case FigureId::fig4c: s.base.gamma_a = 0.2; break;
    case FigureId::fig5: {
        s.base.gamma_a = s.base.gamma_b = s.base.gamma = 0.01;
        s.base.kappa = 0.5;
        const auto pr = opt.y_range.value_or(std::pair{0.0, 1.0});
        s.axes = {{"epsilon", xr.first, xr.second, n}, {"pdd0", pr.first, pr.second, n}};
        s.outputs = {"c", "c1", "c2"};
        return s;
    }
    }
    s.base.gamma_b = gb;
    const double gmax = std::sqrt(s.base.gamma_a * gb);
    s.base.gamma = id == FigureId::fig4b ? 0.5 * gmax : id == FigureId::fig4c ? gmax : 0.0;
    kappa_epsilon();
    const bool g2fig = id == FigureId::fig6a || id == FigureId::fig6b || id == FigureId::fig6c;
    s.outputs = g2fig ? std::vector<std::string>{"g2", "c1", "c2"} : std::vector<std::string>{"c", "c1", "c2", "g2"};
    return s;
}

inline SweepTable figure_dataset(FigureId id, int resolution, const SweepOptions& sopt = {}) {
    FigureOptions o;
    o.resolution = resolution;
    return run_sweep(figure_spec(id, o), sopt);
}

inline SweepTable figure_dataset(FigureId id, const FigureOptions& opt, const SweepOptions& sopt = {}) {
    return run_sweep(figure_spec(id, opt), sopt);
}

} // namespace modecoupler

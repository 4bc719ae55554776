#include "tipping/scenario.hpp"

#include "tipping/csv.hpp"
#include "tipping/dynamics.hpp"
#include "tipping/equilibrium.hpp"
#include "tipping/error.hpp"
#include "tipping/figures.hpp"
#include "tipping/model.hpp"
#include "tipping/plot.hpp"
#include "tipping/policy.hpp"
#include "tipping/sensitivity.hpp"
#include "tipping/version.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace tipping {

namespace fs = std::filesystem;

std::vector<double> GridSpec::values() const { return linspace(lo, hi, steps); }

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(std::string_view text) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw Error(ErrorKind::Parse, "expected a number, got '" + std::string(text) + "'");
    return v;
}

template <typename Int>
Int to_integer(std::string_view text) {
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(ErrorKind::Parse, "expected an integer, got '" + std::string(text) + "'");
    return v;
}

using Setter = std::function<void(Scenario&, std::string_view)>;

Setter number(double EcosystemConfig::*field) {
    return [field](Scenario& s, std::string_view v) { s.config.*field = to_double(v); };
}

Setter restaurant(Side side, double Restaurant::*field) {
    return [side, field](Scenario& s, std::string_view v) {
        s.config.side(side).*field = to_double(v);
    };
}

Setter both(double Restaurant::*field) {
    return [field](Scenario& s, std::string_view v) {
        s.config.own.*field = s.config.rival.*field = to_double(v);
    };
}

const std::vector<std::pair<std::string_view, Setter>>& setters() {
    static const std::vector<std::pair<std::string_view, Setter>> table = {
        {"name", [](Scenario& s, std::string_view v) { s.name = std::string(v); }},
        {"m", both(&Restaurant::menu_price)},
        {"m1", restaurant(Side::Own, &Restaurant::menu_price)},
        {"m2", restaurant(Side::Rival, &Restaurant::menu_price)},
        {"T", both(&Restaurant::tip_rate)},
        {"T1", restaurant(Side::Own, &Restaurant::tip_rate)},
        {"T2", restaurant(Side::Rival, &Restaurant::tip_rate)},
        {"bW", both(&Restaurant::waiter_wage)},
        {"bW1", restaurant(Side::Own, &Restaurant::waiter_wage)},
        {"bW2", restaurant(Side::Rival, &Restaurant::waiter_wage)},
        {"bC", both(&Restaurant::cook_wage)},
        {"bC1", restaurant(Side::Own, &Restaurant::cook_wage)},
        {"bC2", restaurant(Side::Rival, &Restaurant::cook_wage)},
        {"r", number(&EcosystemConfig::food_weight)},
        {"rCW", number(&EcosystemConfig::cooks_per_waiter)},
        {"rDW", number(&EcosystemConfig::diners_per_waiter)},
        {"minWageTipped", number(&EcosystemConfig::min_wage_tipped)},
        {"minWageUntipped", number(&EcosystemConfig::min_wage_untipped)},
        {"wageCap", number(&EcosystemConfig::wage_cap)},
        {"quality",
         [](Scenario& s, std::string_view v) { s.config.quality = parse_quality_model(v); }},
        {"gratuity",
         [](Scenario& s, std::string_view v) { s.config.gratuity = parse_gratuity_convention(v); }},
        {"D0", [](Scenario& s, std::string_view v) { s.initial.diners = to_double(v); }},
        {"W0", [](Scenario& s, std::string_view v) { s.initial.waiters = to_double(v); }},
        {"C0", [](Scenario& s, std::string_view v) { s.initial.cooks = to_double(v); }},
        {"command", [](Scenario& s, std::string_view v) { s.run.command = std::string(v); }},
        {"seed",
         [](Scenario& s, std::string_view v) { s.run.seed = to_integer<std::uint64_t>(v); }},
        {"n", [](Scenario& s, std::string_view v) { s.run.n = to_integer<std::size_t>(v); }},
        {"grid", [](Scenario& s, std::string_view v) { s.run.grid = parse_grid(v); }},
        {"figure", [](Scenario& s, std::string_view v) { s.run.figure = std::string(v); }},
        {"out", [](Scenario& s, std::string_view v) { s.run.out_dir = std::string(v); }},
        {"tEnd", [](Scenario& s, std::string_view v) { s.run.t_end = to_double(v); }},
        {"maxStep", [](Scenario& s, std::string_view v) { s.run.max_step = to_double(v); }},
        {"sweepParameter",
         [](Scenario& s, std::string_view v) { s.run.sweep_parameter = std::string(v); }},
        {"sensitivityTarget",
         [](Scenario& s, std::string_view v) { s.run.sensitivity_target = std::string(v); }},
        {"optimizerGrid",
         [](Scenario& s, std::string_view v) { s.run.optimizer_grid = to_integer<int>(v); }},
    };
    return table;
}

} // namespace

GridSpec parse_grid(std::string_view text) {
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos)
        throw Error(ErrorKind::Parse, "grid must look like lo:hi:steps, got '" + std::string(text) + "'");
    GridSpec g{to_double(trim(text.substr(0, a))), to_double(trim(text.substr(a + 1, b - a - 1))),
               to_integer<int>(trim(text.substr(b + 1)))};
    if (g.steps < 2 || !(g.lo < g.hi))
        throw Error(ErrorKind::Parse, "grid needs lo < hi and at least 2 steps");
    return g;
}

const std::vector<std::string_view>& scenario_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> k;
        for (const auto& [key, setter] : setters()) k.push_back(key);
        return k;
    }();
    return keys;
}

Scenario parse_scenario(std::istream& in, std::string_view source) {
    Scenario s;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        auto where = [&] { return std::string(source) + ":" + std::to_string(number) + ": "; };
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorKind::Parse, where() + "expected 'key = value'");
        const auto key = trim(view.substr(0, eq));
        const auto value = trim(view.substr(eq + 1));
        const auto& table = setters();
        const auto it = std::find_if(table.begin(), table.end(),
                                     [&](const auto& entry) { return entry.first == key; });
        if (it == table.end())
            throw Error(ErrorKind::Parse, where() + "unknown key '" + std::string(key) + "'");
        if (value.empty()) throw Error(ErrorKind::Parse, where() + "missing value for " + std::string(key));
        try {
            it->second(s, value);
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, where() + e.what());
        }
    }
    validate(s.config);
    validate_state(s.initial);
    return s;
}

Scenario load_scenario(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read scenario " + path.string());
    return parse_scenario(in, path.string());
}

void write_resolved_scenario(std::ostream& out, const Scenario& s) {
    const auto& c = s.config;
    auto kv = [&](std::string_view key, const auto& value) {
        out << key << " = ";
        if constexpr (std::is_floating_point_v<std::decay_t<decltype(value)>>)
            out << csv::number(value);
        else
            out << value;
        out << '\n';
    };
    kv("name", s.name);
    kv("m1", c.own.menu_price);
    kv("m2", c.rival.menu_price);
    kv("T1", c.own.tip_rate);
    kv("T2", c.rival.tip_rate);
    kv("bW1", c.own.waiter_wage);
    kv("bW2", c.rival.waiter_wage);
    kv("bC1", c.own.cook_wage);
    kv("bC2", c.rival.cook_wage);
    kv("r", c.food_weight);
    kv("rCW", c.cooks_per_waiter);
    kv("rDW", c.diners_per_waiter);
    kv("minWageTipped", c.min_wage_tipped);
    kv("minWageUntipped", c.min_wage_untipped);
    kv("wageCap", c.wage_cap);
    kv("quality", to_string(c.quality));
    kv("gratuity", to_string(c.gratuity));
    kv("D0", s.initial.diners);
    kv("W0", s.initial.waiters);
    kv("C0", s.initial.cooks);
    if (!s.run.command.empty()) kv("command", s.run.command);
    kv("seed", s.run.seed);
    kv("n", s.run.n);
    if (s.run.grid)
        out << "grid = " << csv::number(s.run.grid->lo) << ':' << csv::number(s.run.grid->hi) << ':'
            << s.run.grid->steps << '\n';
    if (!s.run.figure.empty()) kv("figure", s.run.figure);
    kv("out", s.run.out_dir.generic_string());
    kv("tEnd", s.run.t_end);
    kv("maxStep", s.run.max_step);
    kv("sweepParameter", s.run.sweep_parameter);
    kv("sensitivityTarget", s.run.sensitivity_target);
    kv("optimizerGrid", s.run.optimizer_grid);
}

namespace {

class Artifacts {
public:
    explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir_.string());
    }

    template <typename Write>
    void emit(const std::string& name, Write&& write) {
        std::ofstream out(dir_ / name, std::ios::binary);
        if (!out) throw Error(ErrorKind::Io, "cannot write " + (dir_ / name).string());
        write(out);
        if (!out) throw Error(ErrorKind::Io, "write failed for " + (dir_ / name).string());
        summary.artifacts.emplace_back(name);
    }

    void fact(std::string key, std::string value) {
        summary.facts.emplace_back(std::move(key), std::move(value));
    }

    const fs::path& dir() const { return dir_; }

    RunSummary summary;

private:
    fs::path dir_;
};

std::string describe(const EcosystemConfig& c) {
    std::ostringstream out;
    out << "m1=" << csv::number(c.own.menu_price) << " m2=" << csv::number(c.rival.menu_price)
        << " T1=" << csv::number(c.own.tip_rate) << " T2=" << csv::number(c.rival.tip_rate)
        << " bW1=" << csv::number(c.own.waiter_wage) << " bW2=" << csv::number(c.rival.waiter_wage)
        << " bC1=" << csv::number(c.own.cook_wage) << " bC2=" << csv::number(c.rival.cook_wage)
        << " r=" << csv::number(c.food_weight) << " rCW=" << csv::number(c.cooks_per_waiter)
        << " rDW=" << csv::number(c.diners_per_waiter) << " wageCap=" << csv::number(c.wage_cap)
        << " quality=" << to_string(c.quality) << " gratuity=" << to_string(c.gratuity);
    return out.str();
}

svg::Series series(std::string label, std::vector<double> x, std::vector<double> y,
                   std::string color, bool dashed = false) {
    return {std::move(label), std::move(x), std::move(y), std::move(color), dashed};
}

void emit_trajectory(Artifacts& a, const std::string& stem, const EcosystemConfig& config,
                     const State& initial, double t_end, double max_step) {
    IntegrateOptions opts;
    opts.max_step = max_step;
    opts.stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 / max_step)));
    const Trajectory traj = integrate(config, initial, t_end, opts);
    a.fact(stem + ".config", describe(config));
    a.emit(stem + ".csv", [&](std::ostream& out) { write_trajectory_csv(out, traj); });
    std::vector<double> d, w, c;
    for (const auto& s : traj.states) {
        d.push_back(s.diners);
        w.push_back(s.waiters);
        c.push_back(s.cooks);
    }
    svg::LineChart chart{stem, "time", "fraction at our restaurant", {}, {}};
    chart.series = {series("diners D", traj.times, d, "black"),
                    series("waiters W", traj.times, w, "red", true),
                    series("cooks C", traj.times, c, "steelblue")};
    a.emit(stem + ".svg", [&](std::ostream& out) { svg::write_line_chart(out, chart); });
    const State& last = traj.states.back();
    a.fact(stem + ".final", csv::number(last.diners) + "," + csv::number(last.waiters) + "," +
                                csv::number(last.cooks));
}

PolicyProblem policy_problem(const Scenario& s) {
    OptimizerOptions opts;
    opts.grid_n = s.run.optimizer_grid;
    return make_policy_problem(s.config, opts);
}

template <typename Pick>
svg::LineChart curve_chart(const ThresholdResult& r, std::string title, std::string y_label,
                           Pick&& pick) {
    std::vector<double> t, allow, forbid;
    for (const auto& p : r.points) {
        t.push_back(p.tip_rate);
        allow.push_back(pick(p, true));
        forbid.push_back(pick(p, false));
    }
    svg::LineChart chart{std::move(title), "conventional tip rate", std::move(y_label), {}, {}};
    chart.series = {series("allow tipping", t, allow, "black"),
                    series("forbid tipping", t, forbid, "red", true)};
    if (r.critical.tc) chart.vertical_lines.push_back({*r.critical.tc, "Tc", "steelblue"});
    return chart;
}

void emit_threshold(Artifacts& a, const std::string& stem, const PolicyProblem& problem,
                    const std::vector<double>& grid) {
    a.fact(stem + ".config", describe(problem.base));
    const auto r = threshold_analysis(problem, grid);
    a.emit(stem + ".csv", [&](std::ostream& out) { write_threshold_csv(out, r); });
    const auto chart = curve_chart(r, stem + ": optimized profit", "profit per waiter ($/hr)",
                                   [](const CurvePoint& p, bool allow) {
                                       return allow ? p.allow.profit : p.forbid.profit;
                                   });
    a.emit(stem + ".svg", [&](std::ostream& out) { svg::write_line_chart(out, chart); });
    a.fact(stem + ".Tc", csv::number(r.critical.tc));
    a.fact(stem + ".outcome", std::string(to_string(r.critical.outcome)));
}

void emit_threshold_diagnostics(Artifacts& a, const ThresholdResult& r) {
    struct Panel {
        const char* stem;
        const char* label;
        double (*pick)(const CurvePoint&, bool);
    };
    static const Panel panels[] = {
        {"fig3b", "optimal cook pay ($/hr)",
         [](const CurvePoint& p, bool al) { return al ? p.allow.cook_wage : p.forbid.cook_wage; }},
        {"fig3c", "waiter total pay ($/hr)",
         [](const CurvePoint& p, bool al) {
             return (al ? p.allow_diagnostics : p.forbid_diagnostics).waiter_total_pay;
         }},
        {"fig3d", "quality ratio q1/q2",
         [](const CurvePoint& p, bool al) {
             return (al ? p.allow_diagnostics : p.forbid_diagnostics).quality_ratio;
         }},
        {"fig3e", "effective price ratio",
         [](const CurvePoint& p, bool al) {
             return (al ? p.allow_diagnostics : p.forbid_diagnostics).price_ratio;
         }},
        {"fig3f", "value ratio v1/v2",
         [](const CurvePoint& p, bool al) {
             return (al ? p.allow_diagnostics : p.forbid_diagnostics).value_ratio;
         }},
    };
    for (const auto& panel : panels) {
        const auto chart = curve_chart(r, panel.stem, panel.label, panel.pick);
        a.emit(std::string(panel.stem) + ".svg",
               [&](std::ostream& out) { svg::write_line_chart(out, chart); });
    }
}

void emit_sweep(Artifacts& a, const std::string& stem, const EcosystemConfig& base,
                SweepParameter p, const std::vector<double>& grid,
                const OptimizerOptions& opts = {}) {
    a.fact(stem + ".config", describe(base));
    const auto sweep = local_sweep(base, p, grid, opts);
    a.emit(stem + ".csv", [&](std::ostream& out) { write_sweep_csv(out, p, sweep); });
    std::vector<double> x, y;
    for (const auto& s : sweep) {
        x.push_back(s.value);
        y.push_back(s.critical.tc ? *s.critical.tc : std::nan(""));
    }
    svg::LineChart chart{stem, std::string(to_string(p)), "critical tip rate Tc", {}, {}};
    chart.series = {series("Tc", x, y, "black")};
    a.emit(stem + ".svg", [&](std::ostream& out) { svg::write_line_chart(out, chart); });
}

void emit_sensitivity(Artifacts& a, const std::string& stem, const SensitivityReport& rep) {
    a.emit(stem + "_prcc.csv", [&](std::ostream& out) { write_prcc_csv(out, rep); });
    a.emit(stem + "_samples.csv", [&](std::ostream& out) { write_samples_csv(out, rep); });
    for (std::size_t o = 0; o < rep.outputs.size(); ++o) {
        svg::BarChart chart;
        chart.title = stem + ": PRCC with " + rep.outputs[o];
        chart.y_label = "PRCC";
        for (std::size_t j = 0; j < rep.parameters.size(); ++j) {
            const auto& cell = rep.cells[o][j];
            const auto stars = significance_stars(cell);
            chart.bars.push_back({rep.parameters[j], cell.coefficient.value_or(std::nan("")),
                                  stars == "ns" || stars == "undefined" ? "" : std::string(stars)});
        }
        std::string suffix = rep.outputs[o];
        suffix.erase(std::remove(suffix.begin(), suffix.end(), '*'), suffix.end());
        a.emit(stem + "_" + suffix + ".svg",
               [&](std::ostream& out) { svg::write_bar_chart(out, chart); });
    }
    for (const auto& note : rep.notes) a.fact(stem + ".note", note);
    a.fact(stem + ".excluded", std::to_string(rep.excluded));
}

void emit_phase_portrait(Artifacts& a, const std::string& stem, const EcosystemConfig& config,
                         const State& seed) {
    const auto report = find_equilibrium(config, seed);
    a.fact(stem + ".config", describe(config));
    a.emit(stem + "_equilibrium.txt",
           [&](std::ostream& out) { write_equilibrium_report(out, report); });
    const auto lines = nullclines(config, report.fixed_point.cooks, 201);
    a.emit(stem + "_nullclines.csv", [&](std::ostream& out) {
        out << "nullcline,D,W\n";
        for (const auto& [d, w] : lines.diner) csv::row(out, "dD/dt=0", d, w);
        for (const auto& [d, w] : lines.waiter) csv::row(out, "dW/dt=0", d, w);
    });
    auto split = [](const Polyline& l) {
        std::pair<std::vector<double>, std::vector<double>> xy;
        for (const auto& [d, w] : l) {
            xy.first.push_back(d);
            xy.second.push_back(w);
        }
        return xy;
    };
    auto [dd, dw] = split(lines.diner);
    auto [wd, ww] = split(lines.waiter);
    svg::LineChart chart{stem + ": nullclines", "diners D", "waiters W", {}, {}};
    chart.series = {series("dD/dt = 0", dd, dw, "blue"), series("dW/dt = 0", wd, ww, "red")};
    chart.vertical_lines.push_back({report.fixed_point.diners, "D*", "gray"});
    a.emit(stem + ".svg", [&](std::ostream& out) { svg::write_line_chart(out, chart); });
    a.fact(stem + ".fixed_point", csv::number(report.fixed_point.diners) + "," +
                                      csv::number(report.fixed_point.waiters) + "," +
                                      csv::number(report.fixed_point.cooks));
    a.fact(stem + ".classification", std::string(to_string(report.classification)));
}

void reproduce_figure(Artifacts& a, const Scenario& s) {
    const std::string& fig = s.run.figure;
    const State start{0.5, 0.5, 0.5};
    if (fig == "fig2") {
        for (const auto& v : figures::simulation_variants())
            emit_trajectory(a, v.name, v.config, start, s.run.t_end, s.run.max_step);
    } else if (fig == "fig3" || fig == "figS1" || fig == "figS2") {
        const auto problem = make_policy_problem(threshold_ecosystem());
        a.fact(fig + ".config", describe(problem.base));
        const auto r = threshold_analysis(problem, figures::threshold_tip_grid());
        if (fig == "fig3") {
            a.emit("fig3.csv", [&](std::ostream& out) { write_threshold_csv(out, r); });
            a.emit("fig3a.svg", [&](std::ostream& out) {
                svg::write_line_chart(out, curve_chart(r, "fig3a: optimized profit",
                                                       "profit per waiter ($/hr)",
                                                       [](const CurvePoint& p, bool allow) {
                                                           return allow ? p.allow.profit
                                                                        : p.forbid.profit;
                                                       }));
            });
            a.fact("fig3.Tc", csv::number(r.critical.tc));
            a.fact("fig3.outcome", std::string(to_string(r.critical.outcome)));
            emit_threshold_diagnostics(a, r);
        } else if (fig == "figS1") {
            a.emit("figS1.csv", [&](std::ostream& out) { write_threshold_csv(out, r); });
            const auto chart = curve_chart(r, "figS1: optimal waiter base pay", "bW1 ($/hr)",
                                           [](const CurvePoint& p, bool al) {
                                               return al ? p.allow.waiter_wage : p.forbid.waiter_wage;
                                           });
            a.emit("figS1.svg", [&](std::ostream& out) { svg::write_line_chart(out, chart); });
        } else {
            a.emit("figS2.csv", [&](std::ostream& out) { write_threshold_csv(out, r); });
            const auto chart = curve_chart(
                r, "figS2: base pay fraction of waiter pay", "bW1 / (bW1 + g1)",
                [](const CurvePoint& p, bool al) {
                    return (al ? p.allow_diagnostics : p.forbid_diagnostics).base_pay_fraction;
                });
            a.emit("figS2.svg", [&](std::ostream& out) { svg::write_line_chart(out, chart); });
        }
    } else if (fig == "fig4") {
        SensitivityOptions opts{s.run.n, s.run.seed, 0};
        a.fact("fig4.config", describe(local_sweep_ecosystem()));
        emit_sensitivity(a, "fig4", threshold_sensitivity(threshold_ranges(), opts));
    } else if (fig == "fig5") {
        for (auto p : {SweepParameter::MenuPrice, SweepParameter::FoodWeight,
                       SweepParameter::DinersPerWaiter, SweepParameter::CooksPerWaiter}) {
            emit_sweep(a, "fig5_" + std::string(to_string(p)), local_sweep_ecosystem(), p,
                       figures::sweep_grid(p));
        }
    } else if (fig == "figS3" || fig == "figS4") {
        const auto config = fig == "figS3" ? figures::staff_pay_variant()
                                           : figures::staff_count_times_pay_variant();
        emit_threshold(a, fig, make_policy_problem(config), figures::threshold_tip_grid());
    } else if (fig == "figS5") {
        emit_phase_portrait(a, "figS5", figures::phase_portrait(), start);
    } else if (fig == "figS6") {
        SensitivityOptions opts{s.run.n, s.run.seed, 0};
        emit_sensitivity(a, "figS6", equilibrium_sensitivity(equilibrium_ranges(), opts));
    } else {
        throw Error(ErrorKind::Usage, "unknown figure '" + fig +
                                          "' (fig2 fig3 fig4 fig5 figS1 figS2 figS3 figS4 figS5 figS6)");
    }
}

} // namespace

RunSummary run_command(const Scenario& s) {
    const auto started = std::chrono::steady_clock::now();
    const std::string& cmd = s.run.command;
    if (std::find(std::begin(kCommands), std::end(kCommands), cmd) == std::end(kCommands))
        throw Error(ErrorKind::Usage, "unknown command '" + cmd + "'");
    validate(s.config);
    validate_state(s.initial);

    Artifacts a(s.run.out_dir);
    if (cmd == "simulate") {
        emit_trajectory(a, "trajectory", s.config, s.initial, s.run.t_end, s.run.max_step);
    } else if (cmd == "equilibrium") {
        emit_phase_portrait(a, "equilibrium", s.config, s.initial);
    } else if (cmd == "optimize") {
        const auto problem = policy_problem(s);
        const auto opt = optimize_wages(problem, s.config.own.tip_rate);
        const auto diag = diagnose(problem, opt);
        a.emit("optimize.csv", [&](std::ostream& out) {
            out << "T1,T2,bW1,bC1,profit,D,W,C,waiterTotalPay,valueRatio\n";
            csv::row(out, opt.own_tip, problem.base.rival.tip_rate, opt.waiter_wage, opt.cook_wage,
                     opt.profit, opt.equilibrium.diners, opt.equilibrium.waiters,
                     opt.equilibrium.cooks, diag.waiter_total_pay, diag.value_ratio);
        });
    } else if (cmd == "threshold") {
        const auto grid = s.run.grid ? s.run.grid->values() : figures::threshold_tip_grid();
        emit_threshold(a, "threshold", policy_problem(s), grid);
    } else if (cmd == "sweep") {
        const auto p = parse_sweep_parameter(s.run.sweep_parameter);
        const auto grid = s.run.grid ? s.run.grid->values() : figures::sweep_grid(p);
        OptimizerOptions opts;
        opts.grid_n = s.run.optimizer_grid;
        emit_sweep(a, "sweep_" + s.run.sweep_parameter, s.config, p, grid, opts);
    } else if (cmd == "sensitivity") {
        SensitivityOptions opts{s.run.n, s.run.seed, 0};
        if (s.run.sensitivity_target == "equilibrium") {
            emit_sensitivity(a, "equilibrium", equilibrium_sensitivity(equilibrium_ranges(), opts, s.config));
        } else if (s.run.sensitivity_target == "threshold") {
            OptimizerOptions optimizer;
            optimizer.grid_n = s.run.optimizer_grid;
            emit_sensitivity(a, "threshold",
                             threshold_sensitivity(threshold_ranges(), opts, s.config, optimizer));
        } else {
            throw Error(ErrorKind::Usage, "sensitivityTarget must be 'equilibrium' or 'threshold'");
        }
    } else {
        reproduce_figure(a, s);
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    RunSummary summary = std::move(a.summary);
    summary.manifest = s.run.out_dir / "manifest.txt";
    std::ofstream out(summary.manifest, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + summary.manifest.string());
    out << "tool = tipping\n"
        << "version = " << kVersion << '\n';
    write_resolved_scenario(out, s);
    for (const auto& [k, v] : summary.facts) out << k << " = " << v << '\n';
    out << "elapsed_seconds = " << elapsed << '\n';
    for (const auto& f : summary.artifacts) out << "artifact = " << f.generic_string() << '\n';
    return summary;
}

} // namespace tipping

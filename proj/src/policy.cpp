#include "tipping/policy.hpp"

#include "tipping/csv.hpp"
#include "tipping/equilibrium.hpp"
#include "tipping/error.hpp"
#include "tipping/model.hpp"
#include "tipping/parallel.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace tipping {

PolicyProblem make_policy_problem(EcosystemConfig config, OptimizerOptions options) {
    config.own.menu_price = config.rival.menu_price;
    validate(config);
    if (options.grid_n < 2) throw Error(ErrorKind::Usage, "optimizer grid needs at least 2 points");
    if (!(options.wage_tol > 0)) throw Error(ErrorKind::Usage, "wage tolerance must be positive");
    if (!(options.grid_phase >= 0 && options.grid_phase < 1))
        throw Error(ErrorKind::Usage, "grid phase must lie in [0, 1)");
    return {config, options};
}

EcosystemConfig threshold_ecosystem() {
    EcosystemConfig c;
    c.own.menu_price = c.rival.menu_price = 10;
    c.food_weight = 4;
    c.rival.waiter_wage = 10;
    c.rival.cook_wage = 25;
    c.diners_per_waiter = 10;
    c.cooks_per_waiter = 1;
    c.min_wage_tipped = 2.13;
    c.min_wage_untipped = 7.25;
    return c;
}

EcosystemConfig local_sweep_ecosystem() {
    EcosystemConfig c;
    c.own.menu_price = c.rival.menu_price = 10;
    c.food_weight = 12;
    c.rival.waiter_wage = 5;
    c.rival.cook_wage = 10;
    c.diners_per_waiter = 12;
    c.cooks_per_waiter = 0.5;
    return c;
}

namespace {

// Equilibrium profit for a wage pair; warm-starts from the last solution.
class ProfitProbe {
public:
    ProfitProbe(const EcosystemConfig& base, double own_tip) : config_(base) {
        config_.own.tip_rate = own_tip;
    }

    double operator()(double waiter_wage, double cook_wage) {
        config_.own.waiter_wage = waiter_wage;
        config_.own.cook_wage = cook_wage;
        try {
            last_ = find_fixed_point(config_, last_).state;
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << e.what() << " at probe bW1=" << waiter_wage << ", bC1=" << cook_wage
                << ", T1=" << config_.own.tip_rate;
            throw Error(ErrorKind::Solver, msg.str());
        }
        return profit(config_, last_);
    }

    const State& last() const { return last_; }

private:
    EcosystemConfig config_;
    State last_{};
};

struct Candidate {
    double waiter = 0, cook = 0, profit = -std::numeric_limits<double>::infinity();
};

// Higher profit wins; exact ties go to the smaller wage bill.
bool better(const Candidate& a, const Candidate& b) {
    if (a.profit != b.profit) return a.profit > b.profit;
    return a.waiter + a.cook < b.waiter + b.cook;
}

std::vector<double> axis(double lo, double hi, int n, double phase) {
    if (hi <= lo) return {lo};
    const double h = (hi - lo) / (n - 1);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        const double x = lo + (i + phase) * h;
        if (x > hi + 1e-12 * h) break;
        out.push_back(std::min(x, hi));
    }
    return out;
}

// Golden-section maximization of f on [lo, hi] to width tol; both ends are
// also tried so that optima on the bracket boundary are found exactly.
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
    const double inv_phi = 1.0 / std::numbers::phi;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    std::pair<double, double> best = f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
    for (double end : {lo, hi}) {
        const double fe = f(end);
        if (fe > best.second || (fe == best.second && end < best.first)) best = {end, fe};
    }
    return best;
}

} // namespace

WageOptimum optimize_wages(const PolicyProblem& problem, double own_tip) {
    if (!(own_tip >= 0 && own_tip < 1)) throw Error(ErrorKind::Usage, "own tip rate out of [0, 1)");
    const EcosystemConfig& base = problem.base;
    const OptimizerOptions& opt = problem.options;
    const double waiter_lo = own_tip > 0 ? base.min_wage_tipped : base.min_wage_untipped;
    const double cook_lo = base.min_wage_untipped;
    const double hi = base.wage_cap;

    ProfitProbe probe(base, own_tip);
    const auto waiters = axis(waiter_lo, hi, opt.grid_n, opt.grid_phase);
    const auto cooks = axis(cook_lo, hi, opt.grid_n, opt.grid_phase);

    Candidate best;
    for (double w : waiters) {
        for (double c : cooks) {
            const Candidate cand{w, c, probe(w, c)};
            if (better(cand, best)) best = cand;
        }
    }

    const double waiter_cell = hi > waiter_lo ? (hi - waiter_lo) / (opt.grid_n - 1) : 0;
    const double cook_cell = hi > cook_lo ? (hi - cook_lo) / (opt.grid_n - 1) : 0;
    for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
        const Candidate before = best;
        if (waiter_cell > 0) {
            const double lo = std::max(waiter_lo, best.waiter - waiter_cell);
            const double up = std::min(hi, best.waiter + waiter_cell);
            const auto [x, fx] = golden_max([&](double w) { return probe(w, best.cook); }, lo, up,
                                            opt.wage_tol);
            const Candidate cand{x, best.cook, fx};
            if (better(cand, best)) best = cand;
        }
        if (cook_cell > 0) {
            const double lo = std::max(cook_lo, best.cook - cook_cell);
            const double up = std::min(hi, best.cook + cook_cell);
            const auto [x, fx] = golden_max([&](double c) { return probe(best.waiter, c); }, lo, up,
                                            opt.wage_tol);
            const Candidate cand{best.waiter, x, fx};
            if (better(cand, best)) best = cand;
        }
        if (std::abs(best.waiter - before.waiter) < opt.wage_tol &&
            std::abs(best.cook - before.cook) < opt.wage_tol)
            break;
    }

    WageOptimum out;
    out.own_tip = own_tip;
    out.waiter_wage = best.waiter;
    out.cook_wage = best.cook;
    out.profit = probe(best.waiter, best.cook);
    out.equilibrium = probe.last();
    return out;
}

PolicyDiagnostics diagnose(const PolicyProblem& problem, const WageOptimum& optimum) {
    EcosystemConfig c = problem.base;
    c.own.tip_rate = optimum.own_tip;
    c.own.waiter_wage = optimum.waiter_wage;
    c.own.cook_wage = optimum.cook_wage;
    const auto q = evaluate(c, optimum.equilibrium);
    PolicyDiagnostics d;
    d.waiter_total_pay = optimum.waiter_wage + q.gratuity_own;
    d.quality_ratio = q.quality_own / q.quality_rival;
    d.price_ratio = c.own.menu_price * (1 + c.own.tip_rate) /
                    (c.rival.menu_price * (1 + c.rival.tip_rate));
    d.value_ratio = q.value_own / q.value_rival;
    d.base_pay_fraction = d.waiter_total_pay > 0 ? optimum.waiter_wage / d.waiter_total_pay : 1.0;
    return d;
}

std::string_view to_string(ThresholdOutcome o) {
    switch (o) {
    case ThresholdOutcome::Crossing: return "crossing";
    case ThresholdOutcome::MultipleCrossings: return "multiple-crossings";
    case ThresholdOutcome::AlwaysAllow: return "always-allow";
    case ThresholdOutcome::AlwaysForbid: return "always-forbid";
    }
    return "?";
}

namespace {

PolicyProblem at_conventional_rate(const PolicyProblem& problem, double rate) {
    PolicyProblem p = problem;
    p.base.rival.tip_rate = rate;
    return p;
}

double forbid_advantage(const PolicyProblem& problem, double rate) {
    const PolicyProblem p = at_conventional_rate(problem, rate);
    return optimize_wages(p, 0.0).profit - optimize_wages(p, rate).profit;
}

// Counts changes of the winning policy along the grid and bisects the first.
CriticalRate locate_crossing(const PolicyProblem& problem, const std::vector<double>& rates,
                             const std::vector<double>& advantage) {
    CriticalRate out;
    std::size_t first = rates.size();
    for (std::size_t i = 1; i < rates.size(); ++i) {
        if ((advantage[i - 1] > 0) != (advantage[i] > 0)) {
            ++out.crossings;
            if (first == rates.size()) first = i - 1;
        }
    }
    if (out.crossings == 0) {
        out.outcome = advantage.front() > 0 ? ThresholdOutcome::AlwaysForbid
                                            : ThresholdOutcome::AlwaysAllow;
        out.diagnostic = "no threshold in range";
        return out;
    }

    double lo = rates[first], hi = rates[first + 1];
    const bool forbid_at_lo = advantage[first] > 0;
    while (hi - lo >= 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if ((forbid_advantage(problem, mid) > 0) == forbid_at_lo)
            lo = mid;
        else
            hi = mid;
    }
    out.tc = 0.5 * (lo + hi);
    if (out.crossings > 1) {
        out.outcome = ThresholdOutcome::MultipleCrossings;
        std::ostringstream msg;
        msg << out.crossings << " policy switches on the scan grid; reporting the first";
        out.diagnostic = msg.str();
    } else {
        out.outcome = ThresholdOutcome::Crossing;
        if (forbid_at_lo) out.diagnostic = "forbid wins below the crossing";
    }
    return out;
}

void check_tip_grid(const std::vector<double>& grid) {
    if (grid.size() < 2) throw Error(ErrorKind::Usage, "tip grid needs at least 2 points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0 && grid[i] < 1))
            throw Error(ErrorKind::Usage, "tip grid values must lie in (0, 1)");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw Error(ErrorKind::Usage, "tip grid must be strictly ascending");
    }
}

} // namespace

std::vector<CurvePoint> profit_curves(const PolicyProblem& problem,
                                      const std::vector<double>& tip_grid) {
    check_tip_grid(tip_grid);
    std::vector<CurvePoint> points(tip_grid.size());
    parallel_for(
        tip_grid.size(),
        [&](std::size_t i) {
            const PolicyProblem p = at_conventional_rate(problem, tip_grid[i]);
            CurvePoint& pt = points[i];
            pt.tip_rate = tip_grid[i];
            try {
                pt.allow = optimize_wages(p, tip_grid[i]);
                pt.forbid = optimize_wages(p, 0.0);
            } catch (const Error& e) {
                std::ostringstream msg;
                msg << "tip grid index " << i << " (T=" << tip_grid[i] << "): " << e.what();
                throw Error(e.kind(), msg.str());
            }
            pt.allow_diagnostics = diagnose(p, pt.allow);
            pt.forbid_diagnostics = diagnose(p, pt.forbid);
        },
        problem.options.threads);
    return points;
}

ThresholdResult threshold_analysis(const PolicyProblem& problem,
                                   const std::vector<double>& tip_grid) {
    ThresholdResult result;
    result.points = profit_curves(problem, tip_grid);
    std::vector<double> advantage;
    for (const auto& p : result.points) advantage.push_back(p.advantage_of_forbidding());
    result.critical = locate_crossing(problem, tip_grid, advantage);
    return result;
}

CriticalRate critical_tip_rate(const PolicyProblem& problem, TipBracket bracket,
                               int scan_points) {
    if (!(bracket.lo > 0 && bracket.hi < 1 && bracket.lo < bracket.hi))
        throw Error(ErrorKind::Usage, "tip bracket must satisfy 0 < lo < hi < 1");
    const auto rates = linspace(bracket.lo, bracket.hi, std::max(scan_points, 2));
    std::vector<double> advantage(rates.size());
    parallel_for(
        rates.size(), [&](std::size_t i) { advantage[i] = forbid_advantage(problem, rates[i]); },
        problem.options.threads);
    return locate_crossing(problem, rates, advantage);
}

double require_critical_tip_rate(const PolicyProblem& problem, TipBracket bracket) {
    const CriticalRate r = critical_tip_rate(problem, bracket);
    if (!r.tc) {
        throw Error(ErrorKind::NoThreshold,
                    std::string("no threshold in range (") + std::string(to_string(r.outcome)) + ")");
    }
    return *r.tc;
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
    case SweepParameter::MenuPrice: return "m";
    case SweepParameter::FoodWeight: return "r";
    case SweepParameter::DinersPerWaiter: return "rDW";
    case SweepParameter::CooksPerWaiter: return "rCW";
    }
    return "?";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "m") return SweepParameter::MenuPrice;
    if (name == "r") return SweepParameter::FoodWeight;
    if (name == "rDW") return SweepParameter::DinersPerWaiter;
    if (name == "rCW") return SweepParameter::CooksPerWaiter;
    throw Error(ErrorKind::Usage, "sweep parameter must be one of m, r, rDW, rCW");
}

EcosystemConfig with_parameter(EcosystemConfig c, SweepParameter p, double value) {
    switch (p) {
    case SweepParameter::MenuPrice: c.own.menu_price = c.rival.menu_price = value; break;
    case SweepParameter::FoodWeight: c.food_weight = value; break;
    case SweepParameter::DinersPerWaiter: c.diners_per_waiter = value; break;
    case SweepParameter::CooksPerWaiter: c.cooks_per_waiter = value; break;
    }
    return c;
}

std::vector<SweepPoint> local_sweep(const EcosystemConfig& base, SweepParameter parameter,
                                    const std::vector<double>& grid,
                                    const OptimizerOptions& options) {
    std::vector<SweepPoint> out(grid.size());
    OptimizerOptions inner = options;
    inner.threads = 1;
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
            const auto problem = make_policy_problem(with_parameter(base, parameter, grid[i]), inner);
            out[i] = {grid[i], critical_tip_rate(problem)};
        },
        options.threads);
    return out;
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2) return {lo};
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        out[static_cast<std::size_t>(i)] = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
    return out;
}

void write_threshold_csv(std::ostream& out, const ThresholdResult& result) {
    out << "tipRate,policy,profit,bW1,bC1,D,W,C,waiterTotalPay,qualityRatio,priceRatio,"
           "valueRatio,basePayFraction\n";
    for (const auto& p : result.points) {
        for (const auto* branch : {&p.allow, &p.forbid}) {
            const bool allow = branch == &p.allow;
            const auto& d = allow ? p.allow_diagnostics : p.forbid_diagnostics;
            csv::row(out, p.tip_rate, allow ? "allow" : "forbid", branch->profit,
                     branch->waiter_wage, branch->cook_wage, branch->equilibrium.diners,
                     branch->equilibrium.waiters, branch->equilibrium.cooks, d.waiter_total_pay,
                     d.quality_ratio, d.price_ratio, d.value_ratio, d.base_pay_fraction);
        }
    }
    out << "# Tc," << csv::number(result.critical.tc) << ','
        << to_string(result.critical.outcome) << '\n';
}

void write_sweep_csv(std::ostream& out, SweepParameter parameter,
                     const std::vector<SweepPoint>& sweep) {
    out << "parameter,value,Tc,outcome\n";
    for (const auto& s : sweep) {
        csv::row(out, to_string(parameter), s.value, s.critical.tc, to_string(s.critical.outcome));
    }
}

} // namespace tipping

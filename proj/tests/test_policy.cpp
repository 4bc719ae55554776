#include "tipping/equilibrium.hpp"
#include "tipping/error.hpp"
#include "tipping/figures.hpp"
#include "tipping/model.hpp"
#include "tipping/policy.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace tipping;

namespace {

// Frozen from the first verified run of the threshold analysis.
constexpr double kFig3Tc = 0.248827;

const ThresholdResult& fig3() {
    static const ThresholdResult r =
        threshold_analysis(make_policy_problem(threshold_ecosystem()), figures::threshold_tip_grid());
    return r;
}

double brute_force_best(const PolicyProblem& p, double own_tip, int n) {
    const auto& c = p.base;
    const double w_lo = own_tip > 0 ? c.min_wage_tipped : c.min_wage_untipped;
    const double k_lo = c.min_wage_untipped;
    double best = -1e300;
    State seed;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            auto trial = c;
            trial.own.tip_rate = own_tip;
            trial.own.waiter_wage = w_lo + (c.wage_cap - w_lo) * i / (n - 1);
            trial.own.cook_wage = k_lo + (c.wage_cap - k_lo) * j / (n - 1);
            const auto fp = find_fixed_point(trial, seed);
            seed = fp.state;
            best = std::max(best, profit(trial, fp.state));
        }
    }
    return best;
}

} // namespace

TEST_SUITE("policy") {

TEST_CASE("problem construction") {
    auto c = threshold_ecosystem();
    c.own.menu_price = 3;
    const auto p = make_policy_problem(c);
    CHECK(p.base.own.menu_price == p.base.rival.menu_price);
    c.rival.tip_rate = 2;
    CHECK_THROWS_AS(make_policy_problem(c), Error);
}

TEST_CASE("tipped waiters get the tipped minimum at low rates") {
    auto c = threshold_ecosystem();
    c.rival.tip_rate = 0.15;
    const auto opt = optimize_wages(make_policy_problem(c), 0.15);
    CHECK(opt.waiter_wage == doctest::Approx(2.13).epsilon(1e-12));
}

TEST_CASE("optimizer matches a dense grid") {
    auto c = threshold_ecosystem();
    c.rival.tip_rate = 0;
    c.rival.waiter_wage = c.min_wage_untipped;
    c.rival.cook_wage = c.min_wage_untipped;
    const auto p = make_policy_problem(c);
    const auto opt = optimize_wages(p, 0);
    CHECK(brute_force_best(p, 0, 129) <= opt.profit + 1e-6);

    auto tipped = threshold_ecosystem();
    tipped.rival.tip_rate = 0.2;
    const auto q = make_policy_problem(tipped);
    CHECK(brute_force_best(q, 0.2, 129) <= optimize_wages(q, 0.2).profit + 1e-6);
}

TEST_CASE("coarse grid phase does not matter") {
    for (double tip : {0.05, 0.2, 0.4}) {
        auto c = threshold_ecosystem();
        c.rival.tip_rate = tip;
        OptimizerOptions shifted;
        shifted.grid_phase = 0.5;
        for (double own : {0.0, tip}) {
            const double a = optimize_wages(make_policy_problem(c), own).profit;
            const double b = optimize_wages(make_policy_problem(c, shifted), own).profit;
            CHECK(std::abs(a - b) < 1e-5);
        }
    }
}

TEST_CASE("wage floors bind") {
    for (const auto& pt : fig3().points) {
        CHECK(pt.allow.waiter_wage >= 2.13);
        CHECK(pt.forbid.waiter_wage >= 7.25);
        CHECK(pt.allow.cook_wage >= 7.25);
        CHECK(pt.forbid.cook_wage >= 7.25);
        CHECK(pt.allow.cook_wage <= 50);
    }
}

TEST_CASE("degenerate wage box returns the floors") {
    auto c = threshold_ecosystem();
    c.wage_cap = c.min_wage_untipped;
    c.rival.waiter_wage = c.rival.cook_wage = c.wage_cap;
    const auto opt = optimize_wages(make_policy_problem(c), 0);
    CHECK(opt.waiter_wage == 7.25);
    CHECK(opt.cook_wage == 7.25);
}

TEST_CASE("profit curve diagnostics") {
    const auto& r = fig3();
    REQUIRE(r.points.size() == 25);
    const auto& first = r.points.front();
    const auto& last = r.points.back();
    CHECK(first.allow.profit >= first.forbid.profit);
    CHECK(last.forbid.profit >= last.allow.profit);

    for (const auto& pt : r.points) {
        CHECK(pt.forbid.cook_wage < pt.allow.cook_wage);
        CHECK(pt.forbid_diagnostics.waiter_total_pay < pt.allow_diagnostics.waiter_total_pay);
        CHECK(pt.forbid_diagnostics.base_pay_fraction == doctest::Approx(1));
    }
    for (std::size_t i = 1; i < r.points.size(); ++i) {
        CHECK(r.points[i].forbid.waiter_wage >= r.points[i - 1].forbid.waiter_wage - 1e-3);
        CHECK(r.points[i].allow_diagnostics.base_pay_fraction <
              r.points[i - 1].allow_diagnostics.base_pay_fraction);
    }
    CHECK(last.forbid.waiter_wage > first.forbid.waiter_wage + 0.5);
}

TEST_CASE("fig3 threshold") {
    const auto& r = fig3();
    REQUIRE(r.critical.outcome == ThresholdOutcome::Crossing);
    CHECK(*r.critical.tc > 0.01);
    CHECK(*r.critical.tc < 0.5);
    CHECK(*r.critical.tc == doctest::Approx(kFig3Tc).epsilon(2e-4 / kFig3Tc));

    const auto direct = critical_tip_rate(make_policy_problem(threshold_ecosystem()));
    REQUIRE(direct.tc);
    CHECK(std::abs(*direct.tc - kFig3Tc) < 1e-4);
    CHECK(std::abs(*direct.tc - *r.critical.tc) < 2e-4);

    for (const auto& pt : r.points) {
        if (pt.tip_rate < *r.critical.tc - 1e-3) CHECK(pt.advantage_of_forbidding() <= 0);
        if (pt.tip_rate > *r.critical.tc + 1e-3) CHECK(pt.advantage_of_forbidding() >= 0);
    }
}

TEST_CASE("no threshold when forbidding never pays") {
    auto c = local_sweep_ecosystem();
    c.food_weight = 4;
    const auto p = make_policy_problem(c);
    const auto cr = critical_tip_rate(p);
    CHECK(cr.outcome == ThresholdOutcome::AlwaysAllow);
    CHECK(!cr.tc);
    try {
        require_critical_tip_rate(p);
        FAIL("expected no threshold");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoThreshold);
        CHECK(std::string(e.what()).find("no threshold in range") != std::string::npos);
    }
}

TEST_CASE("alternative quality measures keep a threshold") {
    for (const auto& c : {figures::staff_pay_variant(), figures::staff_count_times_pay_variant()}) {
        const auto cr = critical_tip_rate(make_policy_problem(c));
        CHECK(cr.outcome == ThresholdOutcome::Crossing);
        REQUIRE(cr.tc);
        CHECK(*cr.tc > 0.01);
        CHECK(*cr.tc < 0.5);
    }
}

TEST_CASE("threshold is invariant to the price level") {
    const auto base = make_policy_problem(threshold_ecosystem());
    const auto scaled = make_policy_problem(scale_prices(threshold_ecosystem(), 3));
    const auto a = critical_tip_rate(base);
    const auto b = critical_tip_rate(scaled);
    REQUIRE(a.tc);
    REQUIRE(b.tc);
    CHECK(std::abs(*a.tc - *b.tc) < 1e-6);

    auto c = threshold_ecosystem();
    c.rival.tip_rate = 0.3;
    const auto p1 = optimize_wages(make_policy_problem(c), 0);
    const auto p3 = optimize_wages(make_policy_problem(scale_prices(c, 3)), 0);
    CHECK(p3.profit == doctest::Approx(3 * p1.profit).epsilon(1e-9));
}

TEST_CASE("local sweeps move the threshold in the expected direction") {
    const auto base = local_sweep_ecosystem();
    auto tc = [&](SweepParameter p, double v) {
        return critical_tip_rate(make_policy_problem(with_parameter(base, p, v))).tc.value();
    };
    CHECK(tc(SweepParameter::MenuPrice, 15) > tc(SweepParameter::MenuPrice, 8));
    CHECK(tc(SweepParameter::FoodWeight, 16) < tc(SweepParameter::FoodWeight, 10));
    CHECK(tc(SweepParameter::DinersPerWaiter, 18) > tc(SweepParameter::DinersPerWaiter, 10));
    CHECK(tc(SweepParameter::CooksPerWaiter, 1.5) < tc(SweepParameter::CooksPerWaiter, 0.75));

    CHECK(parse_sweep_parameter("rDW") == SweepParameter::DinersPerWaiter);
    CHECK_THROWS_AS(parse_sweep_parameter("q"), Error);
    CHECK(with_parameter(base, SweepParameter::MenuPrice, 7).rival.menu_price == 7);
}

TEST_CASE("threshold csv") {
    std::ostringstream out;
    write_threshold_csv(out, fig3());
    const auto text = out.str();
    CHECK(text.rfind("tipRate,policy,profit,bW1,bC1,D,W,C,", 0) == 0);
    CHECK(text.find("# Tc,") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 50 + 1);
}

} // TEST_SUITE

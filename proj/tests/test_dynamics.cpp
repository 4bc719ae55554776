#include "tipping/dynamics.hpp"
#include "tipping/error.hpp"
#include "tipping/figures.hpp"
#include "tipping/model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace tipping;

namespace {

double max_diff(const State& a, const State& b) {
    return std::max({std::abs(a.diners - b.diners), std::abs(a.waiters - b.waiters),
                     std::abs(a.cooks - b.cooks)});
}

const EcosystemConfig& variant(const std::string& name) {
    static const auto all = figures::simulation_variants();
    for (const auto& v : all)
        if (v.name == name) return v.config;
    throw std::out_of_range(name);
}

double min_waiters(const Trajectory& t) {
    double m = 1;
    for (const auto& s : t.states) m = std::min(m, s.waiters);
    return m;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("symmetric start stays put") {
    const auto t = integrate(baseline_config(), {0.5, 0.5, 0.5}, 50);
    for (const auto& s : t.states) CHECK(max_diff(s, {0.5, 0.5, 0.5}) == 0);
    CHECK(t.times.back() == doctest::Approx(50));
    CHECK(t.max_clamp == 0);
}

TEST_CASE("time grid honours the step limit and stride") {
    IntegrateOptions opts;
    opts.max_step = 0.03;
    opts.stride = 4;
    const auto t = integrate(baseline_config(), {0.2, 0.7, 0.4}, 1.0, opts);
    CHECK(t.times.front() == 0);
    CHECK(t.times.back() == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 1; i + 1 < t.times.size(); ++i)
        CHECK(t.times[i] - t.times[i - 1] <= 4 * 0.03 + 1e-12);
    CHECK_THROWS_AS(integrate(baseline_config(), {0.5, 0.5, 0.5}, -1), Error);
    CHECK_THROWS_AS(integrate(baseline_config(), {1.5, 0.5, 0.5}, 1), Error);
}

TEST_CASE("fig2a: waiters leave, diners prefer us") {
    const auto& c = variant("fig2a");
    CHECK(c.own.tip_rate == 0.2);
    CHECK(c.rival.tip_rate == 0.25);
    const auto end = integrate(c, {0.5, 0.5, 0.5}, 50).states.back();
    CHECK(end.diners > 0.5);
    CHECK(end.waiters < 0.5);
}

TEST_CASE("fig2b: waiters dip and return") {
    const auto& c = variant("fig2b");
    const auto t = integrate(c, {0.5, 0.5, 0.5}, 50);
    CHECK(min_waiters(t) < 0.5 - 1e-3);
    CHECK(t.states.back().waiters > min_waiters(t) + 1e-3);
    CHECK(t.states.back().diners > 0.5);
}

TEST_CASE("fig2c: cooks, then diners, then waiters leave") {
    const auto end = settle(variant("fig2c"), {0.5, 0.5, 0.5}).state;
    CHECK(end.cooks < 0.5);
    CHECK(end.diners < 0.5);
    CHECK(end.waiters < 0.5);
}

TEST_CASE("fig2d: better pay keeps cooks and diners") {
    const auto t = integrate(variant("fig2d"), {0.5, 0.5, 0.5}, 50);
    const auto end = t.states.back();
    CHECK(end.cooks > 0.5);
    CHECK(end.diners > 0.5);
    CHECK(min_waiters(t) < 0.5 - 1e-3);
    CHECK(end.waiters > min_waiters(t) + 1e-3);
}

TEST_CASE("settle") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 5; ++i) {
        const auto r = settle(baseline_config(), {u(rng), u(rng), u(rng)});
        CHECK(max_diff(r.state, {0.5, 0.5, 0.5}) < 1e-9);
        CHECK(r.residual < 1e-10);
    }

    auto c = baseline_config();
    c.own.cook_wage = 10;
    c.rival.cook_wage = 20;
    for (double c0 : {0.0, 0.3, 1.0})
        CHECK(settle(c, {0.5, 0.5, c0}).state.cooks == doctest::Approx(1.0 / 3).epsilon(1e-9));

    SettleOptions quick;
    quick.t_max = 0.5;
    CHECK_THROWS_AS(settle(c, {0.1, 0.9, 0.1}, quick), Error);
}

TEST_CASE("halving the step barely moves the settled state") {
    for (const auto& v : figures::simulation_variants()) {
        SettleOptions coarse, fine;
        fine.max_step = coarse.max_step / 2;
        const auto a = settle(v.config, {0.5, 0.5, 0.5}, coarse).state;
        const auto b = settle(v.config, {0.5, 0.5, 0.5}, fine).state;
        CHECK(max_diff(a, b) < 1e-8);
    }
}

TEST_CASE("settled state does not depend on the interior start") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 10; ++k) {
        EcosystemConfig c;
        c.own = {5 + 15 * u(rng), 0.01 + 0.49 * u(rng), 2.13 + 22 * u(rng), 7.25 + 17 * u(rng)};
        c.rival = {c.own.menu_price, 0.01 + 0.49 * u(rng), 2.13 + 22 * u(rng), 7.25 + 17 * u(rng)};
        c.food_weight = 4 + 16 * u(rng);
        c.cooks_per_waiter = 0.5 + 1.5 * u(rng);
        c.diners_per_waiter = 1 + 19 * u(rng);
        const auto ref = settle(c, {0.5, 0.5, 0.5}).state;
        for (int j = 0; j < 4; ++j) {
            const State start{0.02 + 0.96 * u(rng), 0.02 + 0.96 * u(rng), 0.02 + 0.96 * u(rng)};
            CHECK(max_diff(settle(c, start).state, ref) < 1e-6);
        }
    }
}

TEST_CASE("cook share relaxes exponentially") {
    auto c = baseline_config();
    c.own.cook_wage = 9;
    c.rival.cook_wage = 21;
    const double target = 9.0 / 30;
    const auto t = integrate(c, {0.3, 0.6, 0.9}, 8);
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        const double exact = target + (0.9 - target) * std::exp(-t.times[i]);
        CHECK(t.states[i].cooks == doctest::Approx(exact).epsilon(1e-9).scale(1));
    }
}

TEST_CASE("trajectory csv") {
    IntegrateOptions opts;
    opts.stride = 100;
    const auto t = integrate(baseline_config(), {0.4, 0.5, 0.6}, 2, opts);
    std::ostringstream out;
    write_trajectory_csv(out, t);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,D,W,C,v1,v2,g1,g2,P");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == static_cast<int>(t.states.size()));
}

} // TEST_SUITE

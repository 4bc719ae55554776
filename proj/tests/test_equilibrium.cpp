#include "tipping/dynamics.hpp"
#include "tipping/equilibrium.hpp"
#include "tipping/error.hpp"
#include "tipping/figures.hpp"
#include "tipping/model.hpp"
#include "tipping/sensitivity.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace tipping;

namespace {

std::vector<EcosystemConfig> lhs_configs(std::size_t n, std::uint64_t seed) {
    const auto ranges = equilibrium_ranges();
    const auto x = lhs_sample(ranges, n, seed);
    std::vector<EcosystemConfig> out;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        auto c = baseline_config();
        for (std::size_t j = 0; j < ranges.size(); ++j)
            apply_parameter(c, ranges[j].name, x(i, static_cast<Eigen::Index>(j)));
        out.push_back(c);
    }
    return out;
}

Matrix3 from_eigen(const Eigen::Matrix3d& m) {
    Matrix3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = m(i, j);
    return out;
}

} // namespace

TEST_SUITE("equilibrium") {

TEST_CASE("cook equilibrium") {
    auto c = baseline_config();
    CHECK(cook_equilibrium(c) == 0.5);
    c.own.cook_wage = 10;
    c.rival.cook_wage = 25;
    CHECK(cook_equilibrium(c) == doctest::Approx(2.0 / 7).epsilon(1e-15));
    c.rival.cook_wage = 0;
    CHECK(cook_equilibrium(c) == 1);
    c.own.cook_wage = 0;
    CHECK_THROWS_AS(cook_equilibrium(c), Error);
}

TEST_CASE("identical restaurants") {
    const auto r = find_equilibrium(baseline_config());
    CHECK(r.fixed_point.diners == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.fixed_point.waiters == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.fixed_point.cooks == 0.5);
    CHECK(r.classification == Stability::StableSink);
}

TEST_CASE("phase portrait fixed point") {
    const auto c = figures::phase_portrait();
    const auto r = find_equilibrium(c);
    CHECK(std::round(r.fixed_point.diners * 100) / 100 == doctest::Approx(0.51));
    CHECK(std::round(r.fixed_point.waiters * 100) / 100 == doctest::Approx(0.49));
    CHECK(std::round(r.fixed_point.cooks * 100) / 100 == doctest::Approx(0.50));
    CHECK(r.residual < kEquilibriumTol);

    const auto lines = nullclines(c, r.fixed_point.cooks);
    CHECK(distance_to(lines.diner, r.fixed_point.diners, r.fixed_point.waiters) < 1e-3);
    CHECK(distance_to(lines.waiter, r.fixed_point.diners, r.fixed_point.waiters) < 1e-3);

    auto printed = c;
    printed.gratuity = GratuityConvention::AsPrinted;
    const auto p = find_fixed_point(printed);
    CHECK(p.residual < kEquilibriumTol);
    CHECK(p.state.waiters < r.fixed_point.waiters);
}

TEST_CASE("jacobian cook row") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const auto c = figures::phase_portrait();
    for (int i = 0; i < 20; ++i) {
        const auto j = jacobian(c, {u(rng), u(rng), u(rng)});
        CHECK(j[2][0] == 0);
        CHECK(j[2][1] == 0);
        CHECK(j[2][2] == doctest::Approx(-1).epsilon(1e-8));
    }
}

TEST_CASE("jacobian against finite differences of an independent step") {
    const auto c = figures::phase_portrait();
    const State s{0.3, 0.6, 0.4};
    const auto j = jacobian(c, s);
    const double h = 1e-5;
    for (int col = 0; col < 3; ++col) {
        auto up = as_array(s), down = as_array(s);
        up[col] += h;
        down[col] -= h;
        const auto a = as_array(rhs(c, from_array(up)));
        const auto b = as_array(rhs(c, from_array(down)));
        for (int row = 0; row < 3; ++row)
            CHECK(j[row][col] == doctest::Approx((a[row] - b[row]) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("eigenvalues agree with a general eigensolver") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 300; ++trial) {
        Eigen::Matrix3d m;
        for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = n(rng);
        if (trial % 3 == 0) m.row(2) << 0, 0, -1;
        const auto mine = eigenvalues(from_eigen(m));
        auto want = Eigen::EigenSolver<Eigen::Matrix3d>(m).eigenvalues();
        std::vector<std::complex<double>> rest(want.begin(), want.end());
        for (const auto& z : mine) {
            auto best = std::min_element(rest.begin(), rest.end(), [&](auto a, auto b) {
                return std::abs(a - z) < std::abs(b - z);
            });
            CHECK(std::abs(*best - z) < 1e-8 * (1 + std::abs(z)));
            rest.erase(best);
        }
    }
}

TEST_CASE("stability classes") {
    Matrix3 diag{};
    diag[0][0] = -1;
    diag[1][1] = -2;
    diag[2][2] = -3;
    CHECK(classify_stability(eigenvalues(diag)) == Stability::StableSink);

    Matrix3 unstable = diag;
    unstable[1][1] = 1;
    CHECK(classify_stability(eigenvalues(unstable)) == Stability::Unstable);

    Matrix3 spiral{};
    spiral[0][0] = -0.5;
    spiral[0][1] = 2;
    spiral[1][0] = -2;
    spiral[1][1] = -0.5;
    spiral[2][2] = -1;
    CHECK(classify_stability(eigenvalues(spiral)) == Stability::StableSpiral);

    Matrix3 marginal = diag;
    marginal[0][0] = 0;
    CHECK(classify_stability(eigenvalues(marginal)) == Stability::Marginal);
}

TEST_CASE("nullclines of identical restaurants cross at parity") {
    const auto lines = nullclines(baseline_config(), 0.5);
    CHECK(!lines.diner.empty());
    CHECK(!lines.waiter.empty());
    CHECK(distance_to(lines.diner, 0.5, 0.5) < 1e-3);
    CHECK(distance_to(lines.waiter, 0.5, 0.5) < 1e-3);
}

TEST_CASE("diner flow changes sign once along each waiter level") {
    for (const auto& c : {baseline_config(), figures::phase_portrait()}) {
        for (double w : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            int flips = 0;
            double prev = rhs(c, {0, w, 0.5}).diners;
            for (int i = 1; i <= 10000; ++i) {
                const double d = rhs(c, {i / 10000.0, w, 0.5}).diners;
                if ((d > 0) != (prev > 0)) ++flips;
                prev = d;
            }
            CHECK(flips == 1);
        }
    }
}

TEST_CASE("properties over sampled configurations") {
    const auto configs = lhs_configs(100, 1);
    for (const auto& c : configs) {
        const auto newton = find_fixed_point(c);
        CHECK(newton.residual < kEquilibriumTol);
        CHECK(in_unit_cube(newton.state));
        CHECK(newton.state.cooks == doctest::Approx(cook_equilibrium(c)).epsilon(1e-12));

        const auto slow = settle(c, {0.5, 0.5, 0.5}).state;
        CHECK(std::abs(slow.diners - newton.state.diners) < 1e-6);
        CHECK(std::abs(slow.waiters - newton.state.waiters) < 1e-6);

        const auto mirror = find_fixed_point(swap_restaurants(c));
        CHECK(std::abs(mirror.state.diners - (1 - newton.state.diners)) < 1e-8);
        CHECK(std::abs(mirror.state.waiters - (1 - newton.state.waiters)) < 1e-8);
        CHECK(std::abs(mirror.state.cooks - (1 - newton.state.cooks)) < 1e-8);

        CHECK(classify_stability(eigenvalues(jacobian(c, newton.state))) == Stability::StableSink);
    }
}

TEST_CASE("report text") {
    std::ostringstream out;
    write_equilibrium_report(out, find_equilibrium(baseline_config()));
    const auto text = out.str();
    CHECK(text.find("classification = StableSink") != std::string::npos);
    CHECK(text.find("D = ") != std::string::npos);
}

} // TEST_SUITE

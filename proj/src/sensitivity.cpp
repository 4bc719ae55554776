#include "tipping/sensitivity.hpp"

#include "tipping/csv.hpp"
#include "tipping/equilibrium.hpp"
#include "tipping/error.hpp"
#include "tipping/parallel.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace tipping {

void apply_parameter(EcosystemConfig& c, std::string_view name, double v) {
    if (name == "m") c.own.menu_price = c.rival.menu_price = v;
    else if (name == "m1") c.own.menu_price = v;
    else if (name == "m2") c.rival.menu_price = v;
    else if (name == "T") c.own.tip_rate = c.rival.tip_rate = v;
    else if (name == "T1") c.own.tip_rate = v;
    else if (name == "T2") c.rival.tip_rate = v;
    else if (name == "bW") c.own.waiter_wage = c.rival.waiter_wage = v;
    else if (name == "bW1") c.own.waiter_wage = v;
    else if (name == "bW2") c.rival.waiter_wage = v;
    else if (name == "bC") c.own.cook_wage = c.rival.cook_wage = v;
    else if (name == "bC1") c.own.cook_wage = v;
    else if (name == "bC2") c.rival.cook_wage = v;
    else if (name == "r") c.food_weight = v;
    else if (name == "rCW") c.cooks_per_waiter = v;
    else if (name == "rDW") c.diners_per_waiter = v;
    else throw Error(ErrorKind::Usage, "unknown sensitivity parameter '" + std::string(name) + "'");
}

void validate_ranges(const ParameterRanges& ranges) {
    if (ranges.empty()) throw Error(ErrorKind::Usage, "no parameter ranges given");
    std::set<std::string> seen;
    EcosystemConfig probe;
    for (const auto& r : ranges) {
        apply_parameter(probe, r.name, r.low);
        if (!(r.low < r.high))
            throw Error(ErrorKind::Usage, "range for " + r.name + " must have low < high");
        if (!seen.insert(r.name).second)
            throw Error(ErrorKind::Usage, "duplicate range for " + r.name);
    }
}

ParameterRanges equilibrium_ranges() {
    return {{"m", 5, 20},       {"T1", 0.01, 0.5}, {"T2", 0.01, 0.5}, {"bW1", 2.13, 25},
            {"bW2", 2.13, 25},  {"bC1", 7.25, 25}, {"bC2", 7.25, 25}, {"r", 4, 20},
            {"rCW", 0.5, 2},    {"rDW", 1, 20}};
}

ParameterRanges threshold_ranges() {
    return {{"m", 5, 20}, {"r", 4, 20}, {"rDW", 1, 20}, {"rCW", 0.5, 2}};
}

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Unbiased integer in [0, bound).
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace

Eigen::MatrixXd lhs_sample(const ParameterRanges& ranges, std::size_t n, std::uint64_t seed) {
    validate_ranges(ranges);
    if (n < 2) throw Error(ErrorKind::Usage, "Latin hypercube needs at least 2 samples");
    std::mt19937_64 rng(seed);
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd out(rows, static_cast<Eigen::Index>(ranges.size()));
    std::vector<std::size_t> strata(n);
    for (std::size_t j = 0; j < ranges.size(); ++j) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        for (std::size_t i = n - 1; i > 0; --i) std::swap(strata[i], strata[below(rng, i + 1)]);
        const auto& r = ranges[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(strata[i]) + unit_uniform(rng)) /
                             static_cast<double>(n);
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                r.low + u * (r.high - r.low);
        }
    }
    return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace {

Eigen::VectorXd centered_ranks(std::span<const double> values) {
    const auto ranks = average_ranks(values);
    Eigen::VectorXd v(static_cast<Eigen::Index>(ranks.size()));
    double sum = 0;
    for (double r : ranks) sum += r;
    const double mean = sum / static_cast<double>(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = ranks[i] - mean;
    return v;
}

// Correlation of two zero-mean vectors; empty when either is (numerically)
// constant relative to its scale before residualization.
std::optional<double> residual_correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                           double x_scale, double y_scale) {
    const double sxx = x.squaredNorm(), syy = y.squaredNorm();
    if (!(sxx > 1e-20 * x_scale) || !(syy > 1e-20 * y_scale)) return std::nullopt;
    const double rho = x.dot(y) / std::sqrt(sxx * syy);
    return std::clamp(rho, -1.0, 1.0);
}

std::optional<double> two_sided_p(double rho, double dof) {
    if (std::abs(rho) >= 1.0) return 0.0;
    const double t = rho * std::sqrt(dof / (1.0 - rho * rho));
    boost::math::students_t dist(dof);
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
}

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(ErrorKind::Usage, "spearman needs two equal-length samples");
    const Eigen::VectorXd rx = centered_ranks(x), ry = centered_ranks(y);
    const auto rho = residual_correlation(rx, ry, rx.squaredNorm(), ry.squaredNorm());
    return rho ? *rho : std::numeric_limits<double>::quiet_NaN();
}

std::vector<PrccCell> prcc(const Eigen::MatrixXd& samples, std::span<const double> output) {
    const auto n = samples.rows();
    const auto k = samples.cols();
    if (static_cast<std::size_t>(n) != output.size())
        throw Error(ErrorKind::Usage, "output length does not match sample rows");
    if (n <= k + 2) throw Error(ErrorKind::Usage, "PRCC needs more than k + 2 samples");

    Eigen::MatrixXd ranks(n, k);
    std::vector<double> column(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = samples(i, j);
        ranks.col(j) = centered_ranks(column);
    }
    const Eigen::VectorXd y = centered_ranks(output);
    const double dof = static_cast<double>(n - 2 - (k - 1));

    std::vector<PrccCell> cells(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        Eigen::VectorXd ex = ranks.col(j);
        Eigen::VectorXd ey = y;
        if (k > 1) {
            // the rank columns are centered, so no intercept column is needed
            Eigen::MatrixXd others(n, k - 1);
            for (Eigen::Index c = 0, o = 0; c < k; ++c)
                if (c != j) others.col(o++) = ranks.col(c);
            const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
            ex -= others * qr.solve(ex);
            ey -= others * qr.solve(ey);
        }
        auto& cell = cells[static_cast<std::size_t>(j)];
        const double x_scale = ranks.col(j).squaredNorm();
        const double y_scale = y.squaredNorm();
        if (x_scale == 0 || y_scale == 0 || !(ex.squaredNorm() > 1e-20 * x_scale)) continue;
        if (!(ey.squaredNorm() > 1e-20 * y_scale)) {
            // the other inputs already explain the output completely
            cell.coefficient = 0.0;
            cell.p_value = 1.0;
            continue;
        }
        cell.coefficient = residual_correlation(ex, ey, x_scale, y_scale);
        if (cell.coefficient) cell.p_value = two_sided_p(*cell.coefficient, dof);
    }
    return cells;
}

std::string_view significance_stars(const PrccCell& cell) {
    if (!cell.p_value) return "undefined";
    const double p = *cell.p_value;
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "ns";
}

namespace {

std::vector<std::string> names_of(const ParameterRanges& ranges) {
    std::vector<std::string> out;
    for (const auto& r : ranges) out.push_back(r.name);
    return out;
}

// Runs `evaluate(row_config, row_values)` per sample; NaN marks exclusion.
template <typename Evaluate>
SensitivityReport run_design(const ParameterRanges& ranges, const SensitivityOptions& options,
                             const EcosystemConfig& base, std::vector<std::string> outputs,
                             Evaluate&& evaluate) {
    SensitivityReport rep;
    rep.parameters = names_of(ranges);
    rep.outputs = std::move(outputs);
    rep.seed = options.seed;
    rep.samples = lhs_sample(ranges, options.samples, options.seed);
    const auto n = rep.samples.rows();
    const auto m = static_cast<Eigen::Index>(rep.outputs.size());
    rep.values = Eigen::MatrixXd::Constant(n, m, std::numeric_limits<double>::quiet_NaN());

    parallel_for(
        static_cast<std::size_t>(n),
        [&](std::size_t i) {
            const auto row = static_cast<Eigen::Index>(i);
            EcosystemConfig config = base;
            for (std::size_t j = 0; j < ranges.size(); ++j)
                apply_parameter(config, ranges[j].name,
                                rep.samples(row, static_cast<Eigen::Index>(j)));
            std::vector<double> values(static_cast<std::size_t>(m),
                                       std::numeric_limits<double>::quiet_NaN());
            evaluate(config, values);
            for (Eigen::Index o = 0; o < m; ++o)
                rep.values(row, o) = values[static_cast<std::size_t>(o)];
        },
        options.threads);

    rep.included.assign(static_cast<std::size_t>(n), true);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!rep.values.row(i).allFinite()) {
            rep.included[static_cast<std::size_t>(i)] = false;
            ++rep.excluded;
        }
    }
    return rep;
}

void compute_prcc(SensitivityReport& rep) {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < rep.included.size(); ++i)
        if (rep.included[i]) rows.push_back(static_cast<Eigen::Index>(i));
    const auto k = rep.samples.cols();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), k);
    for (std::size_t r = 0; r < rows.size(); ++r)
        x.row(static_cast<Eigen::Index>(r)) = rep.samples.row(rows[r]);
    rep.cells.clear();
    for (Eigen::Index o = 0; o < rep.values.cols(); ++o) {
        std::vector<double> y;
        for (auto r : rows) y.push_back(rep.values(r, o));
        rep.cells.push_back(prcc(x, y));
    }
}

} // namespace

SensitivityReport equilibrium_sensitivity(const ParameterRanges& ranges,
                                          const SensitivityOptions& options,
                                          const EcosystemConfig& base) {
    auto rep = run_design(ranges, options, base, {"D*", "W*"},
                          [](const EcosystemConfig& config, std::vector<double>& out) {
                              try {
                                  const auto fp = find_fixed_point(config);
                                  out[0] = fp.state.diners;
                                  out[1] = fp.state.waiters;
                              } catch (const Error&) {
                                  // excluded and counted
                              }
                          });
    std::ostringstream note;
    note << "varied parameters:";
    for (const auto& p : rep.parameters) note << ' ' << p;
    rep.notes.push_back(note.str());
    rep.notes.push_back("excluded samples (solver failures): " + std::to_string(rep.excluded));
    compute_prcc(rep);
    return rep;
}

SensitivityReport threshold_sensitivity(const ParameterRanges& ranges,
                                        const SensitivityOptions& options,
                                        const EcosystemConfig& base,
                                        const OptimizerOptions& optimizer) {
    OptimizerOptions inner = optimizer;
    inner.threads = 1;
    auto rep = run_design(ranges, options, base, {"Tc"},
                          [&](const EcosystemConfig& config, std::vector<double>& out) {
                              try {
                                  const auto problem = make_policy_problem(config, inner);
                                  const auto crit = critical_tip_rate(problem);
                                  if (crit.outcome == ThresholdOutcome::Crossing) out[0] = *crit.tc;
                              } catch (const Error&) {
                              }
                          });
    rep.notes.push_back("wages re-optimized per sample and tip rate");
    rep.notes.push_back("excluded samples (no single crossing in [0.01, 0.5] or solver failure): " +
                        std::to_string(rep.excluded));
    if (2 * rep.excluded > options.samples) {
        std::ostringstream msg;
        msg << "threshold sensitivity aborted: " << rep.excluded << " of " << options.samples
            << " samples have no threshold";
        throw Error(ErrorKind::Solver, msg.str());
    }
    compute_prcc(rep);
    return rep;
}

void write_prcc_csv(std::ostream& out, const SensitivityReport& rep) {
    out << "parameter,output,prcc,pValue,stars\n";
    for (std::size_t o = 0; o < rep.outputs.size(); ++o)
        for (std::size_t j = 0; j < rep.parameters.size(); ++j) {
            const auto& cell = rep.cells[o][j];
            csv::row(out, rep.parameters[j], rep.outputs[o], cell.coefficient, cell.p_value,
                     significance_stars(cell));
        }
}

void write_samples_csv(std::ostream& out, const SensitivityReport& rep) {
    out << "index";
    for (const auto& p : rep.parameters) out << ',' << p;
    for (const auto& o : rep.outputs) out << ',' << o;
    out << ",included\n";
    for (Eigen::Index i = 0; i < rep.samples.rows(); ++i) {
        out << i;
        for (Eigen::Index j = 0; j < rep.samples.cols(); ++j)
            out << ',' << csv::number(rep.samples(i, j));
        for (Eigen::Index o = 0; o < rep.values.cols(); ++o)
            out << ',' << csv::number(rep.values(i, o));
        out << ',' << (rep.included[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
    }
}

} // namespace tipping

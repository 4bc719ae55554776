#pragma once

#include "tipping/config.hpp"
#include "tipping/policy.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tipping {

// A sampled parameter. Names are scenario keys: per-restaurant fields (m1, T2,
// bW1, ...), shared fields that set both restaurants (m, T, bW, bC) or system
// ratios (r, rCW, rDW).
struct ParameterRange {
    std::string name;
    double low = 0;
    double high = 0;
};

using ParameterRanges = std::vector<ParameterRange>;

void validate_ranges(const ParameterRanges& ranges);

// Sets the named parameter; throws Error(Usage) for unknown names.
void apply_parameter(EcosystemConfig& config, std::string_view name, double value);

// Every varied parameter of the equilibrium analysis, with the menu price
// shared between restaurants.
ParameterRanges equilibrium_ranges();
// m, r, rDW, rCW.
ParameterRanges threshold_ranges();

// Latin hypercube design: n rows, one column per range. Each column holds one
// value per equal-width stratum, jittered uniformly, in an independent random
// order. Identical seeds give identical matrices on every platform.
Eigen::MatrixXd lhs_sample(const ParameterRanges& ranges, std::size_t n, std::uint64_t seed);

// Ranks starting at 1; ties share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

double spearman(std::span<const double> x, std::span<const double> y);

struct PrccCell {
    std::optional<double> coefficient;  // empty when a column is degenerate
    std::optional<double> p_value;
};

// Partial rank correlation of `output` with each column of `samples`, with a
// two-sided t test on N - 1 - k degrees of freedom. Requires N > k + 2.
std::vector<PrccCell> prcc(const Eigen::MatrixXd& samples, std::span<const double> output);

std::string_view significance_stars(const PrccCell& cell);

struct SensitivityReport {
    std::vector<std::string> parameters;
    std::vector<std::string> outputs;
    Eigen::MatrixXd samples;              // N x k
    Eigen::MatrixXd values;               // N x outputs, NaN for excluded rows
    std::vector<bool> included;
    std::size_t excluded = 0;
    std::vector<std::vector<PrccCell>> cells;  // [output][parameter]
    std::uint64_t seed = 0;
    std::vector<std::string> notes;
};

struct SensitivityOptions {
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

// PRCC of the equilibrium diner and waiter shares (outputs "D*", "W*").
SensitivityReport equilibrium_sensitivity(const ParameterRanges& ranges,
                                          const SensitivityOptions& options,
                                          const EcosystemConfig& base = baseline_config());

// PRCC of the critical tip rate (output "Tc"). Samples without a single
// crossing in [0.01, 0.5] are excluded; more than half excluded aborts.
SensitivityReport threshold_sensitivity(const ParameterRanges& ranges,
                                        const SensitivityOptions& options,
                                        const EcosystemConfig& base = local_sweep_ecosystem(),
                                        const OptimizerOptions& optimizer = {});

// parameter,output,prcc,pValue,stars
void write_prcc_csv(std::ostream& out, const SensitivityReport& report);
// index,<parameters>,<outputs>,included
void write_samples_csv(std::ostream& out, const SensitivityReport& report);

} // namespace tipping

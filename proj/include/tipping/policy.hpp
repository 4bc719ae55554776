#pragma once

#include "tipping/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tipping {

struct OptimizerOptions {
    int grid_n = 33;          // coarse grid points per wage axis
    double wage_tol = 1e-3;   // $/hr, golden-section stopping width
    double grid_phase = 0.0;  // shift of the coarse grid in cells, [0, 1)
    int max_sweeps = 50;      // coordinate-wise refinement passes
    unsigned threads = 0;     // workers for independent tip rates (0 = all cores)
};

// Our restaurant chooses wages and a tipping policy against a rival whose
// menu price, tip rate and wages are fixed. Menu prices are always equal.
struct PolicyProblem {
    EcosystemConfig base;
    OptimizerOptions options;
};

// Copies the rival's menu price onto our restaurant and validates.
PolicyProblem make_policy_problem(EcosystemConfig config, OptimizerOptions options = {});

// Ecosystems used for the threshold figures.
EcosystemConfig threshold_ecosystem();     // m=10, r=4, bW2=10, bC2=25, rDW=10, rCW=1
EcosystemConfig local_sweep_ecosystem();   // m=10, r=12, bW2=5, bC2=10, rDW=12, rCW=0.5

struct WageOptimum {
    double own_tip = 0;
    double waiter_wage = 0;
    double cook_wage = 0;
    double profit = 0;
    State equilibrium;
};

// Maximizes equilibrium profit over the legal wage box for a fixed own tip
// rate; the waiter floor is the tipped minimum wage when own_tip > 0.
WageOptimum optimize_wages(const PolicyProblem& problem, double own_tip);

struct PolicyDiagnostics {
    double waiter_total_pay = 0;   // bW1 + g1
    double quality_ratio = 0;      // q1 / q2
    double price_ratio = 0;        // m1 (1 + T1) / (m2 (1 + T2))
    double value_ratio = 0;        // v1 / v2
    double base_pay_fraction = 0;  // bW1 / (bW1 + g1)
};

PolicyDiagnostics diagnose(const PolicyProblem& problem, const WageOptimum& optimum);

struct CurvePoint {
    double tip_rate = 0;
    WageOptimum allow, forbid;
    PolicyDiagnostics allow_diagnostics, forbid_diagnostics;

    // Positive when forbidding tips is more profitable.
    double advantage_of_forbidding() const { return forbid.profit - allow.profit; }
};

enum class ThresholdOutcome { Crossing, MultipleCrossings, AlwaysAllow, AlwaysForbid };
std::string_view to_string(ThresholdOutcome o);

struct CriticalRate {
    ThresholdOutcome outcome = ThresholdOutcome::AlwaysAllow;
    std::optional<double> tc;
    int crossings = 0;
    std::string diagnostic;
};

struct ThresholdResult {
    std::vector<CurvePoint> points;
    CriticalRate critical;
};

// Sets the rival tip to each conventional rate and optimizes wages with tips
// allowed (own tip = rate) and forbidden (own tip = 0).
std::vector<CurvePoint> profit_curves(const PolicyProblem& problem,
                                      const std::vector<double>& tip_grid);

// Curves on the grid plus the crossing located by bisection inside the first
// grid cell where the more profitable policy changes.
ThresholdResult threshold_analysis(const PolicyProblem& problem,
                                   const std::vector<double>& tip_grid);

struct TipBracket {
    double lo = 0.01;
    double hi = 0.5;
};

// Conventional tip rate above which forbidding tips is more profitable, to
// |dT| < 1e-4. The bracket is scanned at `scan_points` rates first so that
// multiple crossings are reported rather than hidden.
CriticalRate critical_tip_rate(const PolicyProblem& problem, TipBracket bracket = {},
                               int scan_points = 11);

// Like critical_tip_rate but throws Error(NoThreshold) when nothing crosses.
double require_critical_tip_rate(const PolicyProblem& problem, TipBracket bracket = {});

enum class SweepParameter { MenuPrice, FoodWeight, DinersPerWaiter, CooksPerWaiter };
std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);  // m, r, rDW, rCW

// Applies a sweep value; menu price moves both restaurants.
EcosystemConfig with_parameter(EcosystemConfig config, SweepParameter p, double value);

struct SweepPoint {
    double value = 0;
    CriticalRate critical;
};

std::vector<SweepPoint> local_sweep(const EcosystemConfig& base, SweepParameter parameter,
                                    const std::vector<double>& grid,
                                    const OptimizerOptions& options = {});

std::vector<double> linspace(double lo, double hi, int points);

void write_threshold_csv(std::ostream& out, const ThresholdResult& result);
void write_sweep_csv(std::ostream& out, SweepParameter parameter,
                     const std::vector<SweepPoint>& sweep);

} // namespace tipping

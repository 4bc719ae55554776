#pragma once

// Parameter sets of the published scenarios.

#include "tipping/config.hpp"
#include "tipping/policy.hpp"

#include <string>
#include <vector>

namespace tipping::figures {

struct NamedConfig {
    std::string name;
    EcosystemConfig config;
};

// Two nearly identical restaurants: m=10, T=0.2, bW=5, bC=10, r=12 unless the
// variant changes one of them (a: T2=0.25, b: m2=15, c: bC2=12,
// d: bW2=10 and bC1=15).
EcosystemConfig simulation_base();
std::vector<NamedConfig> simulation_variants();

// Identical restaurants except T1=0.15, T2=0.2; rDW=rCW=1.
EcosystemConfig phase_portrait();

// Threshold ecosystem with pay-based quality (r=2) and with head count times
// pay (r=4).
EcosystemConfig staff_pay_variant();
EcosystemConfig staff_count_times_pay_variant();

// Local sweep grids for the critical tip rate.
std::vector<double> sweep_grid(SweepParameter p);

std::vector<double> threshold_tip_grid();  // 25 points on [0.01, 0.5]

} // namespace tipping::figures

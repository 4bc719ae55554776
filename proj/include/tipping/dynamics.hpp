#pragma once

#include "tipping/config.hpp"

#include <iosfwd>
#include <vector>

namespace tipping {

// Largest boundary correction tolerated for a single stored step.
inline constexpr double kMaxClampPerStep = 1e-9;

struct Trajectory {
    EcosystemConfig config;
    std::vector<double> times;
    std::vector<State> states;
    double max_clamp = 0;  // largest correction applied to keep a state in [0,1]^3
};

struct IntegrateOptions {
    double max_step = 0.01;
    // Store every n-th step (the final state is always stored).
    std::size_t stride = 1;
};

// Classic fourth-order Runge-Kutta with a fixed step no larger than
// options.max_step.
Trajectory integrate(const EcosystemConfig& config, const State& initial, double t_end,
                     const IntegrateOptions& options = {});

struct SettleOptions {
    double tol = 1e-10;
    double t_max = 1e5;
    double max_step = 0.01;
};

struct SettleResult {
    State state;
    double elapsed = 0;
    double residual = 0;
};

// Integrates until the max-norm of the right-hand side drops below tol.
// Throws Error(Solver) when t_max is reached first.
SettleResult settle(const EcosystemConfig& config, const State& initial,
                    const SettleOptions& options = {});

// Writes t, D, W, C, v1, v2, g1, g2, P with a header row.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace tipping

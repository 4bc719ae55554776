#pragma once

#include "tipping/config.hpp"

#include <array>

namespace tipping {

// Lower bound applied to waiter shares before dividing tips among them.
inline constexpr double kWaiterShareFloor = 1e-9;

struct InstantaneousQuantities {
    double value_own = 0, value_rival = 0;        // 1/$
    double gratuity_own = 0, gratuity_rival = 0;  // $/hr per waiter
    double quality_own = 0, quality_rival = 0;
    double profit = 0;                            // $/hr per waiter in the system
};

double gratuity(const EcosystemConfig& config, const State& s, Side side);
double quality(const EcosystemConfig& config, const State& s, Side side);
double value(const EcosystemConfig& config, const State& s, Side side);
double profit(const EcosystemConfig& config, const State& s);

InstantaneousQuantities evaluate(const EcosystemConfig& config, const State& s);

// Share of transitions that move towards our restaurant given the two
// utilities; 1/2 when both are zero.
double transition_share(double own_utility, double rival_utility);

// Time derivative of (diners, waiters, cooks). Throws Error(Numeric) naming the
// offending component when the result is not finite.
State rhs(const EcosystemConfig& config, const State& s);

// Max-norm of rhs.
double residual(const EcosystemConfig& config, const State& s);

inline std::array<double, 3> as_array(const State& s) { return {s.diners, s.waiters, s.cooks}; }
inline State from_array(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

} // namespace tipping

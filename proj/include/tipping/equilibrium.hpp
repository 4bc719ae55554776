#pragma once

#include "tipping/config.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

namespace tipping {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Eigenvalues3 = std::array<std::complex<double>, 3>;

// Residual (max-norm of rhs) an equilibrium must reach.
inline constexpr double kEquilibriumTol = 1e-10;
// Imaginary parts below this count as zero when classifying stability.
inline constexpr double kImaginaryTol = 1e-8;

enum class Stability { StableSink, StableSpiral, Unstable, Marginal };
enum class SolveMethod { Newton, Settle };

std::string_view to_string(Stability s);
std::string_view to_string(SolveMethod m);

struct FixedPoint {
    State state;
    double residual = 0;
    SolveMethod method = SolveMethod::Newton;
    int iterations = 0;
};

struct EquilibriumReport {
    State fixed_point;
    double residual = 0;
    Matrix3 jacobian{};
    Eigenvalues3 eigenvalues{};
    Stability classification = Stability::Marginal;
    SolveMethod method = SolveMethod::Newton;
};

// Closed-form cook share bC1 / (bC1 + bC2). Throws when both wages are zero.
double cook_equilibrium(const EcosystemConfig& config);

// Damped Newton on the (diners, waiters) equations with the cook share pinned
// to its closed form; falls back to time integration followed by a Newton
// polish. Throws Error(Solver) if both fail or the root leaves [0,1]^3.
FixedPoint find_fixed_point(const EcosystemConfig& config, const State& seed = {});

// Fixed point plus Jacobian, eigenvalues and stability class.
EquilibriumReport find_equilibrium(const EcosystemConfig& config, const State& seed = {});

// Central-difference Jacobian of rhs (step 1e-6), cross-checked against the
// half step. Throws Error(Numeric) listing entries that disagree.
Matrix3 jacobian(const EcosystemConfig& config, const State& state);

// Roots of the characteristic cubic, real roots first in ascending order.
Eigenvalues3 eigenvalues(const Matrix3& m);

Stability classify_stability(const Eigenvalues3& eigenvalues);

using Polyline = std::vector<std::pair<double, double>>;  // (D, W) points

struct Nullclines {
    Polyline diner;   // dD/dt = 0, found along lines of constant W
    Polyline waiter;  // dW/dt = 0, found along lines of constant D
};

// Zero sets of dD/dt and dW/dt in the (D, W) plane at a fixed cook share.
Nullclines nullclines(const EcosystemConfig& config, double cook_share, int grid_n = 201);

// Smallest Euclidean distance from (d, w) to the polyline's vertices and segments.
double distance_to(const Polyline& line, double d, double w);

// Structured text, one key per line.
void write_equilibrium_report(std::ostream& out, const EquilibriumReport& report);

} // namespace tipping

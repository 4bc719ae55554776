#include "tipping/dynamics.hpp"

#include "tipping/csv.hpp"
#include "tipping/error.hpp"
#include "tipping/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace tipping {

namespace {

State axpy(const State& x, double a, const State& k) {
    return {x.diners + a * k.diners, x.waiters + a * k.waiters, x.cooks + a * k.cooks};
}

double max_norm(const State& d) {
    return std::max({std::abs(d.diners), std::abs(d.waiters), std::abs(d.cooks)});
}

State rk4_step(const EcosystemConfig& c, const State& s, const State& k1, double h) {
    const State k2 = rhs(c, axpy(s, h / 2, k1));
    const State k3 = rhs(c, axpy(s, h / 2, k2));
    const State k4 = rhs(c, axpy(s, h, k3));
    const double w = h / 6;
    return {s.diners + w * (k1.diners + 2 * k2.diners + 2 * k3.diners + k4.diners),
            s.waiters + w * (k1.waiters + 2 * k2.waiters + 2 * k3.waiters + k4.waiters),
            s.cooks + w * (k1.cooks + 2 * k2.cooks + 2 * k3.cooks + k4.cooks)};
}

// Pulls the state back into the unit cube; returns the size of the correction.
double clamp_to_cube(State& s, double t) {
    double moved = 0;
    for (double* x : {&s.diners, &s.waiters, &s.cooks}) {
        if (!std::isfinite(*x)) {
            std::ostringstream msg;
            msg << "non-finite state at t=" << t;
            throw Error(ErrorKind::Numeric, msg.str());
        }
        const double clamped = std::clamp(*x, 0.0, 1.0);
        moved = std::max(moved, std::abs(clamped - *x));
        *x = clamped;
    }
    if (moved > kMaxClampPerStep) {
        std::ostringstream msg;
        msg << "state left [0,1]^3 by " << moved << " at t=" << t << "; reduce the step size";
        throw Error(ErrorKind::Numeric, msg.str());
    }
    return moved;
}

void check_preconditions(const EcosystemConfig& config, const State& initial, double step) {
    validate(config);
    validate_state(initial);
    if (!(step > 0)) throw Error(ErrorKind::Usage, "integration step must be positive");
}

} // namespace

Trajectory integrate(const EcosystemConfig& config, const State& initial, double t_end,
                     const IntegrateOptions& options) {
    check_preconditions(config, initial, options.max_step);
    if (!(t_end > 0)) throw Error(ErrorKind::Usage, "tEnd must be positive");

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / options.max_step));
    const double h = t_end / static_cast<double>(steps);
    const std::size_t stride = std::max<std::size_t>(options.stride, 1);

    Trajectory traj;
    traj.config = config;
    traj.times.reserve(steps / stride + 2);
    traj.states.reserve(steps / stride + 2);
    traj.times.push_back(0.0);
    traj.states.push_back(initial);

    State s = initial;
    for (std::size_t i = 1; i <= steps; ++i) {
        s = rk4_step(config, s, rhs(config, s), h);
        const double t = static_cast<double>(i) * h;
        traj.max_clamp = std::max(traj.max_clamp, clamp_to_cube(s, t));
        if (i % stride == 0 || i == steps) {
            traj.times.push_back(t);
            traj.states.push_back(s);
        }
    }
    return traj;
}

SettleResult settle(const EcosystemConfig& config, const State& initial,
                    const SettleOptions& options) {
    check_preconditions(config, initial, options.max_step);
    const double h = options.max_step;
    State s = initial;
    double t = 0;
    for (std::size_t i = 0;; ++i) {
        const State k1 = rhs(config, s);
        const double res = max_norm(k1);
        if (res < options.tol) return {s, t, res};
        if (t >= options.t_max) {
            std::ostringstream msg;
            msg << "settle did not converge by t=" << options.t_max << " (residual " << res << ")";
            throw Error(ErrorKind::Solver, msg.str());
        }
        s = rk4_step(config, s, k1, h);
        t = static_cast<double>(i + 1) * h;
        clamp_to_cube(s, t);
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,D,W,C,v1,v2,g1,g2,P\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const State& s = traj.states[i];
        const auto q = evaluate(traj.config, s);
        csv::row(out, traj.times[i], s.diners, s.waiters, s.cooks, q.value_own, q.value_rival,
                 q.gratuity_own, q.gratuity_rival, q.profit);
    }
}

} // namespace tipping

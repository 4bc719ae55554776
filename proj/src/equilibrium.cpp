#include "tipping/equilibrium.hpp"

#include "tipping/csv.hpp"
#include "tipping/dynamics.hpp"
#include "tipping/error.hpp"
#include "tipping/model.hpp"

#include <boost/math/tools/roots.hpp>

#include <limits>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace tipping {

std::string_view to_string(Stability s) {
    switch (s) {
    case Stability::StableSink: return "StableSink";
    case Stability::StableSpiral: return "StableSpiral";
    case Stability::Unstable: return "Unstable";
    case Stability::Marginal: return "Marginal";
    }
    return "?";
}

std::string_view to_string(SolveMethod m) {
    return m == SolveMethod::Newton ? "Newton" : "Settle";
}

double cook_equilibrium(const EcosystemConfig& c) {
    const double total = c.own.cook_wage + c.rival.cook_wage;
    if (!(total > 0))
        throw Error(ErrorKind::Solver, "cook equilibrium undefined: both cook wages are zero");
    return c.own.cook_wage / total;
}

namespace {

constexpr int kMaxNewtonIterations = 60;
constexpr int kMaxHalvings = 40;

struct Reduced {
    double d, w;  // rhs components for diners and waiters
};

Reduced reduced_rhs(const EcosystemConfig& c, double diners, double waiters, double cooks) {
    const State r = rhs(c, {diners, waiters, cooks});
    return {r.diners, r.waiters};
}

double norm(const Reduced& r) { return std::max(std::abs(r.d), std::abs(r.w)); }

// Newton on the (D, W) block. Returns false if it stalls above tolerance.
bool newton(const EcosystemConfig& c, State& s, double& res, int& iterations) {
    const double cooks = s.cooks;
    Reduced f = reduced_rhs(c, s.diners, s.waiters, cooks);
    res = norm(f);
    for (iterations = 0; iterations < kMaxNewtonIterations; ++iterations) {
        if (res < 1e-14) break;
        // forward differences stepping towards the cube interior
        const double hd = s.diners > 0.5 ? -1e-7 : 1e-7;
        const double hw = s.waiters > 0.5 ? -1e-7 : 1e-7;
        const Reduced fd = reduced_rhs(c, s.diners + hd, s.waiters, cooks);
        const Reduced fw = reduced_rhs(c, s.diners, s.waiters + hw, cooks);
        const double a = (fd.d - f.d) / hd, b = (fw.d - f.d) / hw;
        const double cc = (fd.w - f.w) / hd, dd = (fw.w - f.w) / hw;
        const double det = a * dd - b * cc;
        if (!std::isfinite(det) || det == 0) return res < kEquilibriumTol;
        const double step_d = -(dd * f.d - b * f.w) / det;
        const double step_w = -(-cc * f.d + a * f.w) / det;

        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < kMaxHalvings; ++k, lambda *= 0.5) {
            const double nd = s.diners + lambda * step_d;
            const double nw = s.waiters + lambda * step_w;
            if (nd < 0 || nd > 1 || nw < 0 || nw > 1) continue;
            const Reduced nf = reduced_rhs(c, nd, nw, cooks);
            if (norm(nf) < res) {
                s.diners = nd;
                s.waiters = nw;
                f = nf;
                res = norm(nf);
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return res < kEquilibriumTol;
}

} // namespace

FixedPoint find_fixed_point(const EcosystemConfig& config, const State& seed) {
    validate(config);
    validate_state(seed);
    FixedPoint fp;
    fp.state = seed;
    fp.state.cooks = cook_equilibrium(config);
    fp.method = SolveMethod::Newton;
    bool ok = newton(config, fp.state, fp.residual, fp.iterations);
    if (!ok) {
        SettleOptions opts;
        opts.tol = 1e-8;
        State settled = settle(config, seed, opts).state;
        settled.cooks = fp.state.cooks;
        fp.state = settled;
        fp.method = SolveMethod::Settle;
        ok = newton(config, fp.state, fp.residual, fp.iterations);
    }
    fp.residual = residual(config, fp.state);
    if (!ok || !(fp.residual < kEquilibriumTol)) {
        std::ostringstream msg;
        msg << "equilibrium solver failed (residual " << fp.residual << ")";
        throw Error(ErrorKind::Solver, msg.str());
    }
    if (!in_unit_cube(fp.state))
        throw Error(ErrorKind::Solver, "equilibrium escaped [0,1]^3");
    return fp;
}

EquilibriumReport find_equilibrium(const EcosystemConfig& config, const State& seed) {
    const FixedPoint fp = find_fixed_point(config, seed);
    EquilibriumReport report;
    report.fixed_point = fp.state;
    report.residual = fp.residual;
    report.method = fp.method;
    report.jacobian = jacobian(config, fp.state);
    report.eigenvalues = eigenvalues(report.jacobian);
    report.classification = classify_stability(report.eigenvalues);
    return report;
}

namespace {

Matrix3 central_difference(const EcosystemConfig& c, const State& s, double h) {
    Matrix3 j{};
    const auto x = as_array(s);
    for (int col = 0; col < 3; ++col) {
        auto plus = x, minus = x;
        plus[col] += h;
        minus[col] -= h;
        const auto fp = as_array(rhs(c, from_array(plus)));
        const auto fm = as_array(rhs(c, from_array(minus)));
        for (int row = 0; row < 3; ++row) j[row][col] = (fp[row] - fm[row]) / (2 * h);
    }
    return j;
}

} // namespace

Matrix3 jacobian(const EcosystemConfig& config, const State& state) {
    constexpr double h = 1e-6;
    const Matrix3 coarse = central_difference(config, state, h);
    const Matrix3 fine = central_difference(config, state, h / 2);
    std::ostringstream suspect;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const double scale = std::max(1.0, std::abs(coarse[r][c]));
            if (std::abs(coarse[r][c] - fine[r][c]) > 1e-6 * scale)
                suspect << " J[" << r << "][" << c << "]=" << coarse[r][c] << "/" << fine[r][c];
        }
    if (!suspect.str().empty())
        throw Error(ErrorKind::Numeric, "finite-difference Jacobian unreliable:" + suspect.str());
    return coarse;
}

Eigenvalues3 eigenvalues(const Matrix3& m) {
    // lambda^3 + a lambda^2 + b lambda + c
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                          m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    const double a = -tr, b = minors, c = -det;

    // depressed cubic t^3 + p t + q with lambda = t - a/3
    const double shift = -a / 3;
    const double p = b - a * a / 3;
    const double q = 2 * a * a * a / 27 - a * b / 3 + c;
    const double half_q = q / 2, third_p = p / 3;
    const double disc = half_q * half_q + third_p * third_p * third_p;
    const double scale = half_q * half_q + std::abs(third_p * third_p * third_p);

    auto polish = [&](double x) {
        for (int i = 0; i < 3; ++i) {
            const double f = ((x + a) * x + b) * x + c;
            const double df = (3 * x + 2 * a) * x + b;
            if (df == 0) break;
            const double nx = x - f / df;
            if (std::abs(((nx + a) * nx + b) * nx + c) >= std::abs(f)) break;
            x = nx;
        }
        return x;
    };

    Eigenvalues3 out;
    if (scale == 0) {
        out = {shift, shift, shift};
    } else if (disc > 64 * std::numeric_limits<double>::epsilon() * scale) {
        const double root = std::sqrt(disc);
        const double u = std::cbrt(-half_q + root);
        const double v = std::cbrt(-half_q - root);
        const double re = polish(shift + u + v);
        const double pair_re = shift - (u + v) / 2;
        const double pair_im = std::sqrt(3.0) / 2 * std::abs(u - v);
        out = {std::complex<double>(re, 0), std::complex<double>(pair_re, pair_im),
               std::complex<double>(pair_re, -pair_im)};
    } else {
        // three real roots (the discriminant test admits round-off level
        // positives, which belong to a repeated root)
        const double radius = 2 * std::sqrt(std::max(-third_p, 0.0));
        double arg = 0;
        if (radius > 0) arg = std::clamp(3 * q / (p * radius), -1.0, 1.0);
        const double theta = std::acos(arg) / 3;
        std::array<double, 3> r;
        for (int k = 0; k < 3; ++k)
            r[k] = polish(shift + radius * std::cos(theta - 2 * std::numbers::pi * k / 3));
        std::sort(r.begin(), r.end());
        out = {r[0], r[1], r[2]};
    }
    return out;
}

Stability classify_stability(const Eigenvalues3& eig) {
    constexpr double kZero = 1e-12;
    double max_re = -std::numeric_limits<double>::infinity();
    double max_im = 0;
    for (const auto& e : eig) {
        max_re = std::max(max_re, e.real());
        max_im = std::max(max_im, std::abs(e.imag()));
    }
    if (max_re > kZero) return Stability::Unstable;
    if (max_re >= -kZero) return Stability::Marginal;
    return max_im < kImaginaryTol ? Stability::StableSink : Stability::StableSpiral;
}

namespace {

template <typename F>
void roots_along(F&& f, int n, std::vector<double>& out) {
    using boost::math::tools::bisect;
    const auto tol = [](double lo, double hi) { return hi - lo < 1e-8; };
    double x0 = 0, f0 = f(0.0);
    for (int i = 1; i < n; ++i) {
        const double x1 = static_cast<double>(i) / (n - 1);
        const double f1 = f(x1);
        if (f0 == 0) {
            out.push_back(x0);
        } else if ((f0 < 0) != (f1 < 0) && f1 != 0) {
            const auto [lo, hi] = bisect(f, x0, x1, tol);
            out.push_back((lo + hi) / 2);
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0) out.push_back(x0);
}

} // namespace

Nullclines nullclines(const EcosystemConfig& config, double cook_share, int grid_n) {
    validate(config);
    if (!(cook_share >= 0 && cook_share <= 1))
        throw Error(ErrorKind::Usage, "cook share must lie in [0, 1]");
    grid_n = std::max(grid_n, 2);
    Nullclines out;
    std::vector<double> roots;
    for (int i = 0; i < grid_n; ++i) {
        const double line = static_cast<double>(i) / (grid_n - 1);
        roots.clear();
        roots_along([&](double d) { return rhs(config, {d, line, cook_share}).diners; }, grid_n,
                    roots);
        for (double d : roots) out.diner.emplace_back(d, line);
        roots.clear();
        roots_along([&](double w) { return rhs(config, {line, w, cook_share}).waiters; }, grid_n,
                    roots);
        for (double w : roots) out.waiter.emplace_back(line, w);
    }
    return out;
}

double distance_to(const Polyline& line, double d, double w) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < line.size(); ++i) {
        const auto [x0, y0] = line[i];
        best = std::min(best, std::hypot(d - x0, w - y0));
        if (i + 1 == line.size()) break;
        const auto [x1, y1] = line[i + 1];
        const double dx = x1 - x0, dy = y1 - y0;
        const double len2 = dx * dx + dy * dy;
        if (len2 == 0) continue;
        const double t = std::clamp(((d - x0) * dx + (w - y0) * dy) / len2, 0.0, 1.0);
        best = std::min(best, std::hypot(d - (x0 + t * dx), w - (y0 + t * dy)));
    }
    return best;
}

void write_equilibrium_report(std::ostream& out, const EquilibriumReport& r) {
    out << "D = " << csv::number(r.fixed_point.diners) << '\n'
        << "W = " << csv::number(r.fixed_point.waiters) << '\n'
        << "C = " << csv::number(r.fixed_point.cooks) << '\n'
        << "residual = " << csv::number(r.residual) << '\n'
        << "method = " << to_string(r.method) << '\n';
    for (int i = 0; i < 3; ++i)
        out << "eigenvalue" << i + 1 << " = " << csv::number(r.eigenvalues[i].real()) << ','
            << csv::number(r.eigenvalues[i].imag()) << '\n';
    for (int i = 0; i < 3; ++i)
        out << "jacobian_row" << i + 1 << " = " << csv::number(r.jacobian[i][0]) << ','
            << csv::number(r.jacobian[i][1]) << ',' << csv::number(r.jacobian[i][2]) << '\n';
    out << "classification = " << to_string(r.classification) << '\n';
}

} // namespace tipping

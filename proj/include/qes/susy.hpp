#pragma once

// Two-level quasi-exactly solvable potentials from a seed function W+(x).
//
// Given W+ with a single simple zero x0 and slope s0 = W+'(x0) > 0, the pair
//
//   W  = (W+ - r) / 2,   W1 = (W+ + r) / 2,   r = (W+' - s0) / W+
//
// satisfies W^2 + W' = W1^2 - W1' + 2 eps with eps = s0 / 2, and r has a
// removable singularity at x0. H- = -1/2 d^2/dx^2 + V-, V- = (W^2 - W')/2,
// then has the ground state exp(-int W) at energy 0 and the first excited
// state W+ exp(-int W1) at energy eps. Units hbar = m = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qes/error.hpp"
#include "qes/expr.hpp"
#include "qes/numeric.hpp"

namespace qes::susy {

using expr::Expression;
using expr::ParameterBindings;
using numeric::Grid;
using numeric::Interval;

/// A seed W+ that passed validation, with its derivatives and the data of
/// its zero. Immutable once built by validate_seed().
struct SeedFunction {
    Expression wplus;
    std::array<Expression, 4> derivatives;  // W+', W+'', W+''', W+''''
    ParameterBindings bindings;
    Interval interval;
    double x0 = 0.0;
    double s0 = 0.0;           // W+'(x0)
    double reg_radius = 0.0;   // Taylor form of r is used for |x - x0| < reg_radius
    std::array<double, 3> ratio_taylor{};  // r(x0 + u) ~ c0 + c1 u + c2 u^2

    double value(double x) const { return expr::evaluate(wplus, x, bindings); }
    double derivative(int order, double x) const {
        return expr::evaluate(derivatives.at(static_cast<std::size_t>(order - 1)), x, bindings);
    }
};

inline double default_reg_radius(double x0) { return 1e-4 * std::max(1.0, std::abs(x0) + 1.0); }

/// Checks that W+ is an admissible seed on `interval` and caches everything
/// the construction needs. Errors: NoZero, MultipleZeros, SignCondition,
/// NonPositiveSlope (in that order), UnboundParameter, DomainError.
inline SeedFunction validate_seed(const Expression& wplus, const ParameterBindings& bindings, Interval interval) {
    if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) || !(interval.lo < interval.hi))
        throw Error(ErrorKind::InvalidArgument, "working interval must be finite and non-empty");
    for (const auto& p : expr::parameters(wplus))
        if (!bindings.contains(p)) throw Error(ErrorKind::UnboundParameter, "parameter '" + p + "' is not bound");

    SeedFunction seed;
    seed.wplus = expr::simplify(wplus);
    seed.bindings = bindings;
    seed.interval = interval;
    Expression d = seed.wplus;
    for (auto& slot : seed.derivatives) {
        d = expr::simplify(expr::differentiate(d));
        slot = d;
    }

    auto f = [&](double x) { return seed.value(x); };
    numeric::SignScan scan = numeric::scan_sign_changes(f, interval);
    if (scan.changes == 0) throw Error(ErrorKind::NoSignChange, "W+ has no sign change on the working interval");
    if (scan.changes > 1)
        throw Error(ErrorKind::MultipleZeros,
                    "W+ changes sign " + std::to_string(scan.changes) + " times on the working interval");
    if (scan.left_sign >= 0 || scan.right_sign <= 0)
        throw Error(ErrorKind::SignCondition, "W+ must be negative at the left end and positive at the right end");

    seed.x0 = numeric::bisect(f, scan.bracket, 0.0);
    seed.s0 = seed.derivative(1, seed.x0);
    if (!(seed.s0 > 0.0))
        throw Error(ErrorKind::NonPositiveSlope, "W+'(x0) = " + std::to_string(seed.s0) + " is not positive");
    if (std::abs(seed.value(seed.x0)) > 1e-10 * std::max(1.0, seed.s0))
        throw Error(ErrorKind::NoSignChange, "zero of W+ could not be resolved");

    // Series of r = (W+' - s0)/W+ about x0, from the quotient of
    // (W+' - s0)/u = s2 + s3 u/2 + s4 u^2/6 and W+/u = s0 + s2 u/2 + s3 u^2/6.
    const double s0 = seed.s0;
    const double s2 = seed.derivative(2, seed.x0);
    const double s3 = seed.derivative(3, seed.x0);
    const double s4 = seed.derivative(4, seed.x0);
    const double n0 = s2, n1 = s3 / 2.0, n2 = s4 / 6.0;
    const double d1 = s2 / 2.0, d2 = s3 / 6.0;
    const double c0 = n0 / s0;
    const double c1 = (n1 - c0 * d1) / s0;
    const double c2 = (n2 - c0 * d2 - c1 * d1) / s0;
    seed.ratio_taylor = {c0, c1, c2};
    seed.reg_radius = default_reg_radius(seed.x0);
    return seed;
}

/// Level spacing E1 - E0; the only value that cancels the pole of r at x0.
inline double epsilon_of(const SeedFunction& seed) { return seed.s0 / 2.0; }

struct Ratio {
    double value;
    double slope;
};

/// r = (W+' - s0)/W+ and its derivative, switching to the Taylor form inside
/// the regularization radius.
inline Ratio ratio(const SeedFunction& seed, double x) {
    const double u = x - seed.x0;
    if (std::abs(u) < seed.reg_radius) {
        const auto& c = seed.ratio_taylor;
        return {c[0] + u * (c[1] + u * c[2]), c[1] + 2.0 * u * c[2]};
    }
    const double w = seed.value(x);
    const double w1 = seed.derivative(1, x);
    const double w2 = seed.derivative(2, x);
    const double num = w1 - seed.s0;
    return {num / w, (w2 * w - num * w1) / (w * w)};
}

struct Superpotentials {
    double w;   // W
    double w1;  // W1
};

/// r alone; needs only W+ and W+', which stay finite further out than W+''.
inline double ratio_value(const SeedFunction& seed, double x) {
    const double u = x - seed.x0;
    if (std::abs(u) < seed.reg_radius) {
        const auto& c = seed.ratio_taylor;
        return c[0] + u * (c[1] + u * c[2]);
    }
    return (seed.derivative(1, x) - seed.s0) / seed.value(x);
}

inline Superpotentials superpotentials(const SeedFunction& seed, double x) {
    const double wp = seed.value(x);
    const double r = ratio_value(seed, x);
    return {0.5 * (wp - r), 0.5 * (wp + r)};
}

/// (W', W1').
inline Superpotentials superpotential_slopes(const SeedFunction& seed, double x) {
    const double dwp = seed.derivative(1, x);
    const double dr = ratio(seed, x).slope;
    return {0.5 * (dwp - dr), 0.5 * (dwp + dr)};
}

enum class Branch { Minus, Plus };

/// V- = (W^2 - W')/2 or V+ = (W^2 + W')/2.
inline double potential(const SeedFunction& seed, Branch which, double x) {
    const double w = superpotentials(seed, x).w;
    const double dw = superpotential_slopes(seed, x).w;
    return which == Branch::Minus ? 0.5 * (w * w - dw) : 0.5 * (w * w + dw);
}

/// (W1^2 - W1')/2: the zero-energy partner built from W1; V+ equals this plus eps.
inline double shifted_partner_potential(const SeedFunction& seed, double x) {
    const double w1 = superpotentials(seed, x).w1;
    const double dw1 = superpotential_slopes(seed, x).w1;
    return 0.5 * (w1 * w1 - dw1);
}

/// (W^2 + W') - (W1^2 - W1') - 2 eps, with eps given explicitly.
inline double riccati_residual(const SeedFunction& seed, double x, double epsilon) {
    const auto w = superpotentials(seed, x);
    const auto dw = superpotential_slopes(seed, x);
    return (w.w * w.w + dw.w) - (w.w1 * w.w1 - dw.w1) - 2.0 * epsilon;
}

inline double riccati_residual(const SeedFunction& seed, double x) {
    return riccati_residual(seed, x, epsilon_of(seed));
}

/// Residual scaled by max(1, W+(x)^2), the size of the terms that cancel.
inline double scaled_riccati_residual(const SeedFunction& seed, double x) {
    const double wp = seed.value(x);
    return std::abs(riccati_residual(seed, x)) / std::max(1.0, wp * wp);
}

// ---------------------------------------------------------------------------
// Wavefunctions

struct WavefunctionTable {
    Grid grid;
    std::vector<double> psi0;
    std::vector<double> psi1;
    std::size_t anchor = 0;  // grid index nearest x0, where both phases vanish
    // psi0 = c0 exp(-int_anchor^x W), psi1 = c1 W+ exp(-int_anchor^x W1);
    // kept as logs as well because they can leave double range.
    double c0 = 0.0;
    double c1 = 0.0;
    double log_c0 = 0.0;
    double log_c1 = 0.0;
};

/// Phases int_anchor^x W and int_anchor^x W1 on the grid.
struct Phases {
    std::vector<double> w;
    std::vector<double> w1;
};

inline Phases phases(const SeedFunction& seed, const Grid& grid, std::size_t anchor) {
    std::vector<double> ws(grid.size()), w1s(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto s = superpotentials(seed, grid[i]);
        ws[i] = s.w;
        w1s[i] = s.w1;
    }
    return {numeric::cumulative_integral(std::span<const double>(ws), grid, anchor),
            numeric::cumulative_integral(std::span<const double>(w1s), grid, anchor)};
}

namespace detail {

// exp(log_mag - peak) * sign, normalized to unit discrete L2 norm. Returns
// the log of the constant that maps exp(log_mag) * sign onto the result.
inline double normalize_from_logs(std::span<const double> log_mag, std::span<const int> sign, double h,
                                  std::vector<double>& out, const char* what) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double l : log_mag) {
        if (std::isnan(l) || l == std::numeric_limits<double>::infinity())
            throw Error(ErrorKind::OverflowUnnormalizable, std::string(what) + " exponent is not finite");
        peak = std::max(peak, l);
    }
    if (!std::isfinite(peak)) throw Error(ErrorKind::OverflowUnnormalizable, std::string(what) + " vanishes on the grid");
    out.resize(log_mag.size());
    for (std::size_t i = 0; i < log_mag.size(); ++i) out[i] = sign[i] * std::exp(log_mag[i] - peak);
    const double mass = numeric::l2_mass(out, h);
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw Error(ErrorKind::OverflowUnnormalizable, std::string(what) + " has no finite mass on the grid");
    const double scale = 1.0 / std::sqrt(mass);
    for (double& v : out) v *= scale;
    return -peak + std::log(scale);
}

}  // namespace detail

/// Ground and first excited states of H- sampled on the grid, each with unit
/// discrete L2 norm (sum psi^2 h = 1).
inline WavefunctionTable wavefunctions(const SeedFunction& seed, const Grid& grid) {
    if (!grid.contains(seed.x0)) throw Error(ErrorKind::InvalidArgument, "grid does not cover x0");
    WavefunctionTable t{grid, {}, {}, grid.nearest_index(seed.x0)};
    Phases ph = phases(seed, grid, t.anchor);
    const std::size_t n = grid.size();
    std::vector<double> log0(n), log1(n);
    std::vector<int> sign0(n, 1), sign1(n);
    for (std::size_t i = 0; i < n; ++i) {
        log0[i] = -ph.w[i];
        double wp = seed.value(grid[i]);
        sign1[i] = (wp > 0.0) - (wp < 0.0);
        log1[i] = (wp == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(wp))) - ph.w1[i];
    }
    t.log_c0 = detail::normalize_from_logs(log0, sign0, grid.spacing(), t.psi0, "ground state");
    t.log_c1 = detail::normalize_from_logs(log1, sign1, grid.spacing(), t.psi1, "excited state");
    t.c0 = std::exp(t.log_c0);
    t.c1 = std::exp(t.log_c1);
    return t;
}

enum class State { Ground, Excited };

/// Grid through x0 with the given spacing that covers [lo, hi].
inline Grid grid_through_x0(const SeedFunction& seed, Interval iv, double spacing) {
    const double kmin = std::floor((iv.lo - seed.x0) / spacing);
    const double kmax = std::ceil((iv.hi - seed.x0) / spacing);
    const auto n = static_cast<std::size_t>(kmax - kmin) + 1;
    return Grid(seed.x0 + kmin * spacing, seed.x0 + kmax * spacing, std::max<std::size_t>(n, 5));
}

/// log|psi| (unnormalized, phase zero at x0 itself) on a grid through x0, so
/// samples built on different intervals share one scale.
inline numeric::ProbeSamples log_wavefunction(const SeedFunction& seed, State state, Interval iv, double spacing) {
    Grid g = grid_through_x0(seed, iv, spacing);
    const std::size_t anchor = g.nearest_index(seed.x0);
    Phases ph = phases(seed, g, anchor);
    std::vector<double> logs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (state == State::Ground) {
            logs[i] = -ph.w[i];
        } else {
            double wp = seed.value(g[i]);
            logs[i] = (wp == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(wp))) - ph.w1[i];
        }
    }
    return {numeric::Sampled{g, std::move(logs)}, true};
}

/// Norm-growth probe of one analytic state, doubling `base` three times at
/// the given grid spacing.
inline numeric::ProbeResult probe_normalizability(const SeedFunction& seed, State state, Interval base,
                                                  double spacing) {
    return numeric::norm_growth_probe(
        [&](Interval iv) { return log_wavefunction(seed, state, iv, spacing); }, base, 2.0, 3);
}

// ---------------------------------------------------------------------------
// Ladder operators B- = (d/dx + W)/sqrt2 and B+ = (-d/dx + W)/sqrt2.

/// Samples of f, optionally with exact derivative samples. Without them the
/// derivative is taken by fourth-order finite differences.
struct Operand {
    numeric::Sampled f;
    std::optional<std::vector<double>> derivative;

    double slope(std::size_t i) const {
        if (derivative) return (*derivative)[i];
        return numeric::first_derivative(f.values, f.grid.spacing(), i);
    }
};

/// (1/sqrt2)(-f' + W f) at a point, given f and f' there.
inline double apply_B_plus(const SeedFunction& seed, double x, double f, double df) {
    return (-df + superpotentials(seed, x).w * f) / std::sqrt(2.0);
}

/// (1/sqrt2)(f' + W f) at a point.
inline double apply_B_minus(const SeedFunction& seed, double x, double f, double df) {
    return (df + superpotentials(seed, x).w * f) / std::sqrt(2.0);
}

namespace detail {
inline std::size_t node_index(const Grid& g, double x) {
    std::size_t i = g.nearest_index(x);
    if (std::abs(g[i] - x) > 1e-9 * g.spacing())
        throw Error(ErrorKind::InvalidArgument, "x=" + std::to_string(x) + " is not a grid node of the operand");
    return i;
}
}  // namespace detail

inline double apply_B_plus(const SeedFunction& seed, const Operand& op, double x) {
    std::size_t i = detail::node_index(op.f.grid, x);
    return apply_B_plus(seed, op.f.grid[i], op.f.values[i], op.slope(i));
}

inline double apply_B_minus(const SeedFunction& seed, const Operand& op, double x) {
    std::size_t i = detail::node_index(op.f.grid, x);
    return apply_B_minus(seed, op.f.grid[i], op.f.values[i], op.slope(i));
}

inline std::vector<double> apply_B_plus(const SeedFunction& seed, const Operand& op) {
    std::vector<double> out(op.f.grid.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = apply_B_plus(seed, op.f.grid[i], op.f.values[i], op.slope(i));
    return out;
}

inline std::vector<double> apply_B_minus(const SeedFunction& seed, const Operand& op) {
    std::vector<double> out(op.f.grid.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = apply_B_minus(seed, op.f.grid[i], op.f.values[i], op.slope(i));
    return out;
}

/// exp(-int W1) on the grid (the ground state of the shifted partner), with
/// its exact derivative -W1 exp(-int W1), scaled so its maximum is 1.
inline Operand partner_ground_state(const SeedFunction& seed, const Grid& grid) {
    const std::size_t anchor = grid.nearest_index(seed.x0);
    Phases ph = phases(seed, grid, anchor);
    const double peak = -*std::min_element(ph.w1.begin(), ph.w1.end());
    Operand op{numeric::Sampled{grid, std::vector<double>(grid.size())}, std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = std::exp(-ph.w1[i] - peak);
        op.f.values[i] = v;
        (*op.derivative)[i] = -superpotentials(seed, grid[i]).w1 * v;
    }
    return op;
}

// ---------------------------------------------------------------------------

/// The constructed model: seed plus level spacing, with the evaluators as
/// members. A value type; cheap to copy.
struct SusyModel {
    SeedFunction seed;
    double epsilon = 0.0;

    explicit SusyModel(SeedFunction s) : seed(std::move(s)), epsilon(epsilon_of(seed)) {}

    double w(double x) const { return superpotentials(seed, x).w; }
    double w1(double x) const { return superpotentials(seed, x).w1; }
    double dw(double x) const { return superpotential_slopes(seed, x).w; }
    double dw1(double x) const { return superpotential_slopes(seed, x).w1; }
    double v_minus(double x) const { return potential(seed, Branch::Minus, x); }
    double v_plus(double x) const { return potential(seed, Branch::Plus, x); }
    double riccati(double x) const { return riccati_residual(seed, x); }
};

}  // namespace qes::susy

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "qes/error.hpp"
#include "qes/numeric/grid.hpp"
#include "qes/numeric/quadrature.hpp"

namespace qes::numeric {

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Strict sign changes between consecutive samples whose magnitudes both
/// exceed floor_fraction * max|sample|; tail chatter below that is ignored.
inline std::size_t count_nodes(std::span<const double> samples, double floor_fraction = 1e-9) {
    const double floor = floor_fraction * max_abs(samples);
    std::size_t nodes = 0;
    int prev = 0;
    for (double v : samples) {
        if (std::abs(v) <= floor) continue;
        int s = v > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++nodes;
        prev = s;
    }
    return nodes;
}

/// Five-point second derivative at index i (needs 2 <= i < n-2).
inline double second_derivative_5pt(std::span<const double> f, double h, std::size_t i) {
    return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
}

/// Fourth-order first derivative at any index (one-sided near the ends;
/// needs at least 5 samples).
inline double first_derivative(std::span<const double> f, double h, std::size_t i) {
    const std::size_t n = f.size();
    if (i >= 2 && i + 2 < n) return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    if (i == 0) return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    if (i == 1) return (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    if (i == n - 1)
        return (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
    return (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
}

/// ||-1/2 psi'' + V psi - E psi||_2 / ||psi||_2 over the interior points,
/// skipping two points at each end.
template <class V>
double schrodinger_residual(const V& potential, std::span<const double> psi, double energy, const Grid& grid) {
    const std::size_t n = grid.size();
    if (psi.size() != n) throw Error(ErrorKind::InvalidArgument, "sample count does not match grid");
    if (n < 9) throw Error(ErrorKind::InvalidArgument, "residual needs at least 5 interior points");
    const double h = grid.spacing();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double r = -0.5 * second_derivative_5pt(psi, h, i) + (potential(grid[i]) - energy) * psi[i];
        num += r * r;
        den += psi[i] * psi[i];
    }
    return std::sqrt(num / den);
}

enum class ProbeVerdict { Converged, Diverging, Inconclusive };

inline std::string_view to_string(ProbeVerdict v) {
    switch (v) {
    case ProbeVerdict::Converged: return "Converged";
    case ProbeVerdict::Diverging: return "Diverging";
    case ProbeVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ProbeResult {
    ProbeVerdict verdict = ProbeVerdict::Inconclusive;
    std::vector<double> log_masses;  // log of the L2 mass on each interval
};

/// Builds unnormalized samples on a given interval. Samples from different
/// intervals must share a common scale (same anchoring), or the masses are
/// not comparable. Implementations may return log|psi| instead of psi by
/// setting `log_scale`, which keeps large growing tails representable.
struct ProbeSamples {
    Sampled samples;
    bool log_scale = false;
};

using ProbeBuilder = std::function<ProbeSamples(Interval)>;

namespace detail {

inline double log_mass(const ProbeSamples& s) {
    const auto& v = s.samples.values;
    const double h = s.samples.grid.spacing();
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        logs[i] = s.log_scale ? 2.0 * v[i] : (v[i] == 0.0 ? -std::numeric_limits<double>::infinity()
                                                          : 2.0 * std::log(std::abs(v[i])));
        peak = std::max(peak, logs[i]);
    }
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    return peak + std::log(acc * h);
}

}  // namespace detail

/// Grows the interval by `factor` about its centre `steps` times and watches
/// the L2 mass. Mass increments that shrink geometrically (ratio < 0.5) or
/// become negligible mean Converged; increments that keep growing mean
/// Diverging; anything else is reported as Inconclusive.
inline ProbeResult norm_growth_probe(const ProbeBuilder& build, Interval base, double factor = 2.0, int steps = 3) {
    if (steps < 2 || !(factor > 1.0))
        throw Error(ErrorKind::InvalidArgument, "norm growth probe needs factor > 1 and at least 2 steps");
    ProbeResult res;
    const double mid = 0.5 * (base.lo + base.hi);
    const double half = 0.5 * base.width();
    for (int k = 0; k <= steps; ++k) {
        double w = half * std::pow(factor, k);
        res.log_masses.push_back(detail::log_mass(build({mid - w, mid + w})));
    }
    for (double m : res.log_masses)
        if (!std::isfinite(m)) return res;

    // Increment k relative to the mass it produced, and its log size; both
    // stay representable when the masses themselves overflow.
    const double negligible = 1e-12;
    std::vector<double> rel, log_inc;
    for (std::size_t k = 1; k < res.log_masses.size(); ++k) {
        double r = -std::expm1(res.log_masses[k - 1] - res.log_masses[k]);
        rel.push_back(r);
        log_inc.push_back(r > 0.0 ? res.log_masses[k] + std::log(r) : -std::numeric_limits<double>::infinity());
    }

    bool converged = true, diverging = true;
    for (std::size_t k = 0; k < rel.size(); ++k) {
        if (rel[k] <= negligible) {
            diverging = false;
            continue;
        }
        if (k == 0) continue;
        if (rel[k - 1] <= negligible) {
            // mass reappearing after it had settled
            converged = false;
            continue;
        }
        double log_ratio = log_inc[k] - log_inc[k - 1];
        if (!(log_ratio < std::log(0.5))) converged = false;
        if (!(log_ratio > 0.0)) diverging = false;
    }
    if (converged)
        res.verdict = ProbeVerdict::Converged;
    else if (diverging)
        res.verdict = ProbeVerdict::Diverging;
    return res;
}

}  // namespace qes::numeric

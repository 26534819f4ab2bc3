#pragma once

// Symmetric tridiagonal eigenproblems from the finite-difference Hamiltonian
// -1/2 d^2/dx^2 + V(x) with Dirichlet ends.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qes/error.hpp"
#include "qes/numeric/grid.hpp"

namespace qes::numeric {

/// Symmetric tridiagonal matrix. For a discretized Hamiltonian it acts on the
/// n-2 interior grid points.
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<double> offdiag;  // size diag.size() - 1
    std::optional<Grid> grid;

    std::size_t dimension() const { return diag.size(); }

    std::vector<double> apply(std::span<const double> v) const {
        const std::size_t n = diag.size();
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * v[i];
            if (i > 0) s += offdiag[i - 1] * v[i - 1];
            if (i + 1 < n) s += offdiag[i] * v[i + 1];
            out[i] = s;
        }
        return out;
    }
};

/// Three-point discretization: diag 1/h^2 + V(x_i), offdiag -1/(2h^2).
/// Eigenvalues carry an O(h^2) discretization error.
template <class F>
TridiagonalOperator discretize(const F& potential, const Grid& grid) {
    const std::size_t m = grid.size() - 2;
    const double h = grid.spacing();
    const double kin = 1.0 / (h * h);
    TridiagonalOperator t;
    t.grid = grid;
    t.diag.resize(m);
    t.offdiag.assign(m > 0 ? m - 1 : 0, -0.5 * kin);
    for (std::size_t i = 0; i < m; ++i) {
        double x = grid[i + 1];
        double v = potential(x);
        if (!std::isfinite(v))
            throw Error(ErrorKind::NonFinitePotential, "potential is not finite at x=" + std::to_string(x));
        t.diag[i] = kin + v;
    }
    return t;
}

/// Number of eigenvalues strictly below lambda, from the signs of the pivots
/// of the LDL^T factorization of T - lambda I.
inline std::size_t sturm_count(const TridiagonalOperator& t, double lambda) {
    const std::size_t n = t.diag.size();
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e2 = i > 0 ? t.offdiag[i - 1] * t.offdiag[i - 1] : 0.0;
        q = (t.diag[i] - lambda) - (i > 0 ? e2 / q : 0.0);
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

/// Gershgorin bounds on the spectrum.
inline Interval gershgorin(const TridiagonalOperator& t) {
    const std::size_t n = t.diag.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::abs(t.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.offdiag[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    return {lo, hi};
}

struct SpectrumResult {
    std::vector<double> eigenvalues;                      // ascending
    std::vector<std::vector<double>> eigenvectors;        // unit 2-norm, empty unless requested
    std::vector<double> residual_norms;                   // ||T v - lambda v|| / ||v||, one per vector
    double sturm_tolerance = 0.0;
};

inline constexpr int kMaxBisectionSteps = 200;

/// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
inline double bisect_eigenvalue(const TridiagonalOperator& t, std::size_t k, Interval bounds, double tol) {
    double lo = bounds.lo, hi = bounds.hi;
    for (int it = 0; it < kMaxBisectionSteps; ++it) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol || mid <= lo || mid >= hi) return mid;
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    throw Error(ErrorKind::ToleranceNotReached,
                "eigenvalue " + std::to_string(k) + " not bracketed to " + std::to_string(tol) + " within " +
                    std::to_string(kMaxBisectionSteps) + " bisection steps");
}

namespace detail {

// Solves (T - shift I) y = b by Gaussian elimination with partial pivoting
// (the upper factor gains a second superdiagonal).
inline std::vector<double> solve_shifted(const TridiagonalOperator& t, double shift, std::vector<double> b) {
    const std::size_t n = t.diag.size();
    std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        du[i] = t.offdiag[i];
        dl[i] = t.offdiag[i];
    }
    const double eps = std::numeric_limits<double>::epsilon();
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(d[i]) + std::abs(du[i]));
    const double floor = eps * std::max(scale, 1.0);

    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = floor;
            double m = dl[i] / d[i];
            d[i + 1] -= m * du[i];
            b[i + 1] -= m * b[i];
            dl[i] = 0.0;
        } else {
            double m = d[i] / dl[i];
            d[i] = dl[i];
            double tmp = d[i + 1];
            d[i + 1] = du[i] - m * tmp;
            du[i] = tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -m * du2[i];
            }
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= m * b[i];
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = floor;
    std::vector<double> y(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        if (ii + 1 < n) s -= du[ii] * y[ii + 1];
        if (ii + 2 < n) s -= du2[ii] * y[ii + 2];
        double piv = d[ii] == 0.0 ? floor : d[ii];
        y[ii] = s / piv;
    }
    return y;
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Eigenvector for an accurate eigenvalue by inverse iteration (three sweeps
/// from a seeded random start), orthogonalized against `previous`.
inline std::vector<double> inverse_iteration(const TridiagonalOperator& t, double lambda,
                                             std::span<const std::vector<double>> previous,
                                             unsigned seed = 12345u) {
    const std::size_t n = t.diag.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    auto orthonormalize = [&](std::vector<double>& w) {
        for (const auto& p : previous) {
            double c = detail::dot(w, p);
            for (std::size_t i = 0; i < n; ++i) w[i] -= c * p[i];
        }
        double nrm = detail::norm2(w);
        for (double& x : w) x /= nrm;
    };
    orthonormalize(v);
    for (int sweep = 0; sweep < 3; ++sweep) {
        v = detail::solve_shifted(t, lambda, std::move(v));
        orthonormalize(v);
    }
    return v;
}

/// The k smallest eigenvalues by Sturm-sequence bisection, each bracketed to
/// `tol`; with `vectors` set, also eigenvectors by inverse iteration and their
/// residual norms.
inline SpectrumResult lowest_eigenvalues(const TridiagonalOperator& t, std::size_t k, double tol,
                                         bool vectors = false) {
    if (k < 1 || k > t.dimension())
        throw Error(ErrorKind::InvalidArgument,
                    "requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(t.dimension()) +
                        "-dimensional operator");
    SpectrumResult res;
    res.sturm_tolerance = tol;
    Interval g = gershgorin(t);
    double pad = 1e-12 * std::max({1.0, std::abs(g.lo), std::abs(g.hi)});
    g.lo -= pad;
    g.hi += pad;
    for (std::size_t i = 0; i < k; ++i) {
        // The previous eigenvalue is a valid lower bracket for the next one.
        Interval b = g;
        if (i > 0) b.lo = res.eigenvalues.back() - tol;
        res.eigenvalues.push_back(bisect_eigenvalue(t, i, b, tol));
    }
    if (vectors) {
        for (std::size_t i = 0; i < k; ++i) {
            auto v = inverse_iteration(t, res.eigenvalues[i], res.eigenvectors, 12345u + static_cast<unsigned>(i));
            auto tv = t.apply(v);
            double r = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j) {
                double d = tv[j] - res.eigenvalues[i] * v[j];
                r += d * d;
            }
            res.residual_norms.push_back(std::sqrt(r) / detail::norm2(v));
            res.eigenvectors.push_back(std::move(v));
        }
    }
    return res;
}

}  // namespace qes::numeric

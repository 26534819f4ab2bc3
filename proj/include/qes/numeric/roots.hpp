#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qes/error.hpp"
#include "qes/numeric/grid.hpp"

namespace qes::numeric {

inline constexpr std::size_t kZeroScanCells = 512;

/// Sign changes of f sampled at cells+1 equispaced points. Exact zeros are
/// skipped, so a simple root landing on a sample still counts once.
struct SignScan {
    std::size_t changes = 0;
    int left_sign = 0;
    int right_sign = 0;
    Interval bracket{};  // last bracketing pair of nonzero samples
};

template <class F>
SignScan scan_sign_changes(const F& f, Interval iv, std::size_t cells = kZeroScanCells) {
    SignScan scan;
    int prev_sign = 0;
    double prev_x = iv.lo;
    for (std::size_t i = 0; i <= cells; ++i) {
        double x = i == cells ? iv.hi : iv.lo + iv.width() * static_cast<double>(i) / static_cast<double>(cells);
        double v = f(x);
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteSample, "function is not finite at x=" + std::to_string(x));
        int s = (v > 0.0) - (v < 0.0);
        if (i == 0) scan.left_sign = s;
        if (i == cells) scan.right_sign = s;
        if (s == 0) continue;
        if (prev_sign != 0 && s != prev_sign) {
            ++scan.changes;
            scan.bracket = {prev_x, x};
        }
        prev_sign = s;
        prev_x = x;
    }
    return scan;
}

/// Plain bisection on a bracket with f(lo)*f(hi) < 0. Stops when the bracket
/// is narrower than tol, at an exact zero, or when the midpoint no longer
/// moves (tol = 0 asks for full double precision).
template <class F>
double bisect(const F& f, Interval br, double tol) {
    double lo = br.lo, hi = br.hi;
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw Error(ErrorKind::NoSignChange, "bracket does not change sign");
    for (int it = 0; it < 2000; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= tol) break;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

/// Locates the single zero of f on the interval: scans kZeroScanCells cells
/// for sign changes, rejects zero or several, then bisects the bracket.
template <class F>
double find_zero(const F& f, Interval iv, double tol) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
        throw Error(ErrorKind::InvalidArgument, "find_zero needs a finite interval with lo < hi");
    SignScan scan = scan_sign_changes(f, iv);
    if (scan.changes == 0) throw Error(ErrorKind::NoSignChange, "no sign change on the interval");
    if (scan.changes > 1)
        throw Error(ErrorKind::MultipleZeros, std::to_string(scan.changes) + " sign changes on the interval");
    return bisect(f, scan.bracket, tol);
}

}  // namespace qes::numeric

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qes/error.hpp"
#include "qes/numeric/grid.hpp"

namespace qes::numeric {

namespace detail {

// Integral over the single cell [x_j, x_{j+1}] from the cubic through four
// neighbouring samples (centred when possible, one-sided at the ends).
inline double cell_integral(std::span<const double> f, double h, std::size_t j) {
    const std::size_t n = f.size();
    if (n < 4) {
        if (j + 2 < n) return h / 12.0 * (5.0 * f[j] + 8.0 * f[j + 1] - f[j + 2]);
        return h / 12.0 * (-f[j - 1] + 8.0 * f[j] + 5.0 * f[j + 1]);
    }
    if (j >= 1 && j + 2 < n) return h / 24.0 * (-f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]);
    if (j == 0) return h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    return h / 24.0 * (f[j - 2] - 5.0 * f[j - 1] + 19.0 * f[j] + 9.0 * f[j + 1]);
}

inline double simpson_panel(std::span<const double> f, double h, std::size_t j) {
    return h / 3.0 * (f[j] + 4.0 * f[j + 1] + f[j + 2]);
}

}  // namespace detail

/// Running integral F[i] = integral of f from grid[anchor] to grid[i].
///
/// Points an even number of steps from the anchor accumulate composite
/// Simpson panels; the odd points in between add one cubic cell to the
/// neighbouring even point. Both pieces are exact for cubics, so the table is
/// fourth order everywhere.
inline std::vector<double> cumulative_integral(std::span<const double> f, const Grid& grid, std::size_t anchor) {
    const std::size_t n = grid.size();
    if (f.size() != n) throw Error(ErrorKind::InvalidArgument, "sample count does not match grid");
    if (anchor >= n) throw Error(ErrorKind::InvalidArgument, "anchor index outside grid");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(f[i]))
            throw Error(ErrorKind::NonFiniteSample, "non-finite integrand at index " + std::to_string(i));

    const double h = grid.spacing();
    std::vector<double> F(n, 0.0);
    for (std::size_t i = anchor; i + 2 < n; i += 2) F[i + 2] = F[i] + detail::simpson_panel(f, h, i);
    for (std::size_t i = anchor + 1; i < n; i += 2) F[i] = F[i - 1] + detail::cell_integral(f, h, i - 1);
    for (std::size_t i = anchor; i >= 2; i -= 2) F[i - 2] = F[i] - detail::simpson_panel(f, h, i - 2);
    for (std::size_t i = anchor; i >= 1; i -= 2) {
        F[i - 1] = F[i] - detail::cell_integral(f, h, i - 1);
        if (i < 2) break;
    }
    F[anchor] = 0.0;
    return F;
}

template <class Fn>
std::vector<double> cumulative_integral(const Fn& fn, const Grid& grid, std::size_t anchor) {
    std::vector<double> f = sample(fn, grid);
    return cumulative_integral(std::span<const double>(f), grid, anchor);
}

/// Discrete L2 mass sum |f_i|^2 h.
inline double l2_mass(std::span<const double> f, double h) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return s * h;
}

}  // namespace qes::numeric

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qes/error.hpp"

namespace qes::numeric {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
};

/// Uniform grid of n points covering [xmin, xmax] inclusive.
class Grid {
public:
    Grid(double xmin, double xmax, std::size_t n) : xmin_(xmin), xmax_(xmax), n_(n) {
        if (!std::isfinite(xmin) || !std::isfinite(xmax) || !(xmin < xmax))
            throw Error(ErrorKind::InvalidArgument, "grid needs finite xmin < xmax");
        if (n < 3) throw Error(ErrorKind::InvalidArgument, "grid needs at least 3 points, got " + std::to_string(n));
        h_ = (xmax - xmin) / static_cast<double>(n - 1);
    }

    /// Same as the constructor but rounds an even point count up to the next
    /// odd one, so Simpson panels tile the grid exactly.
    static Grid odd(double xmin, double xmax, std::size_t n) { return Grid(xmin, xmax, n % 2 == 0 ? n + 1 : n); }

    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }
    Interval interval() const { return {xmin_, xmax_}; }

    double operator[](std::size_t i) const {
        return i + 1 == n_ ? xmax_ : xmin_ + static_cast<double>(i) * h_;
    }

    std::vector<double> points() const {
        std::vector<double> xs(n_);
        for (std::size_t i = 0; i < n_; ++i) xs[i] = (*this)[i];
        return xs;
    }

    std::size_t nearest_index(double x) const {
        if (x <= xmin_) return 0;
        if (x >= xmax_) return n_ - 1;
        auto i = static_cast<std::size_t>(std::llround((x - xmin_) / h_));
        return i < n_ ? i : n_ - 1;
    }

    bool contains(double x) const { return x >= xmin_ && x <= xmax_; }

private:
    double xmin_;
    double xmax_;
    std::size_t n_;
    double h_ = 0.0;
};

/// Function values on a grid.
struct Sampled {
    Grid grid;
    std::vector<double> values;
};

template <class F>
std::vector<double> sample(const F& f, const Grid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
    return out;
}

}  // namespace qes::numeric

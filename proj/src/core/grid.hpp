// grid.hpp -- values of an unknown on a uniform tensor grid.
//
// Nodes lie at x_i = i*h, i = 0..n-1, per axis; with h = 1/(n-1) the nodes
// cover [0,1] with the boundary on the first and last node. Fields are stored
// flat with axis 0 fastest: index = i0 + n*(i1 + n*i2).
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace pfrss {

struct GridField {
    std::vector<double> values;
    int n = 0;
    int dim = 1;
    double h = 0.0;

    GridField() = default;
    GridField(int n_, int dim_, double h_) : n(n_), dim(dim_), h(h_) {
        if (n_ < 2 || dim_ < 1 || dim_ > 3 || h_ <= 0.0)
            fail(ErrorCode::invalid_argument, "GridField: need n >= 2, dim in 1..3, h > 0");
        values.assign(size(), 0.0);
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
        return s;
    }

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool same_grid(const GridField& o) const { return n == o.n && dim == o.dim && h == o.h; }
};

// uniform grid on [0, (n-1)h]; with h = 1/(n-1) this is [0,1]
inline double grid_node(int i, double h) { return i * h; }

inline double domain_spacing(int n) { return 1.0 / (n - 1); }

inline double max_abs(const GridField& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

inline double mean(const GridField& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return s / static_cast<double>(u.values.size());
}

// plain quadrature sum h^dim * sum(u)
inline double quadrature(const GridField& u) {
    double s = 0.0;
    for (double v : u.values) s += v;
    return s * std::pow(u.h, u.dim);
}

inline double dot(const GridField& a, const GridField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s;
}

inline double norm2(const GridField& u) { return std::sqrt(dot(u, u)); }

inline bool all_finite(const GridField& u) {
    for (double v : u.values)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void require_same_grid(const GridField& a, const GridField& b, const char* where) {
    if (!a.same_grid(b)) fail(ErrorCode::invalid_argument, std::string(where) + ": grid mismatch");
}

}  // namespace pfrss

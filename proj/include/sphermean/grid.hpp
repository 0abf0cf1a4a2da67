#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sphermean/common.hpp"

namespace sphermean::field {

using Point = std::array<double, 3>; // z = 0 in two dimensions

/// Lattice geometry shared by fields, spectra and masks: an isotropic
/// uniform grid in 2 or 3 dimensions. `origin` is the physical coordinate
/// of index (0,0,0); values are stored row-major (last index fastest).
struct GridGeometry {
    int dim = 2;
    std::array<int, 3> shape{8, 8, 1};
    double spacing = 1.0;
    std::array<double, 3> origin{0.0, 0.0, 0.0};

    void validate() const {
        require(dim == 2 || dim == 3, "GridGeometry: dim must be 2 or 3");
        require(spacing > 0.0 && std::isfinite(spacing), "GridGeometry: spacing must be > 0");
        for (int a = 0; a < dim; ++a)
            require(shape[a] >= 8, "GridGeometry: shape components must be >= 8");
        if (dim == 2) require(shape[2] == 1, "GridGeometry: shape[2] must be 1 when dim == 2");
        for (int a = 0; a < 3; ++a)
            require(std::isfinite(origin[a]), "GridGeometry: origin must be finite");
    }

    std::int64_t size() const {
        return static_cast<std::int64_t>(shape[0]) * shape[1] * shape[2];
    }

    std::int64_t index(int i, int j, int k) const {
        return (static_cast<std::int64_t>(i) * shape[1] + j) * shape[2] + k;
    }

    double coord(int axis, int idx) const { return origin[axis] + spacing * idx; }

    Point point(int i, int j, int k) const {
        return {coord(0, i), coord(1, j), dim == 3 ? coord(2, k) : 0.0};
    }

    /// Physical coordinate of the lattice center.
    Point center() const {
        Point c{0.0, 0.0, 0.0};
        for (int a = 0; a < dim; ++a) c[a] = origin[a] + 0.5 * spacing * (shape[a] - 1);
        return c;
    }

    /// Largest radius around the lattice center at which every point of the
    /// sphere can still be interpolated (one-cell margin).
    double fit_radius() const {
        const Point c = center();
        double r = 1e300;
        for (int a = 0; a < dim; ++a) {
            r = std::min(r, c[a] - (origin[a] + spacing));
            r = std::min(r, origin[a] + spacing * (shape[a] - 2) - c[a]);
        }
        return r;
    }

    bool same_lattice(const GridGeometry& o) const {
        return dim == o.dim && shape == o.shape && spacing == o.spacing && origin == o.origin;
    }
};

/// A sampled real scalar field on a uniform grid.
struct GridField {
    GridGeometry geom;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridGeometry& g, double fill = 0.0)
        : geom(g), values(static_cast<std::size_t>(g.size()), fill) {
        geom.validate();
    }

    double& at(int i, int j, int k = 0) { return values[geom.index(i, j, k)]; }
    double at(int i, int j, int k = 0) const { return values[geom.index(i, j, k)]; }

    void check_finite() const {
        for (double v : values) require(std::isfinite(v), "GridField: non-finite value");
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }

    double sum_abs() const {
        double s = 0.0;
        for (double v : values) s += std::abs(v);
        return s;
    }

    double norm2() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return std::sqrt(s);
    }
};

/// Fills a field by evaluating fn at every lattice point.
template <typename Fn>
inline GridField make_field(const GridGeometry& geom, Fn&& fn) {
    GridField f(geom);
    const auto& g = f.geom;
    parallel_for(g.shape[0], [&](std::int64_t i) {
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                f.values[g.index(static_cast<int>(i), j, k)] =
                    fn(g.point(static_cast<int>(i), j, k));
    });
    return f;
}

/// True when `p` lies inside the region where multilinear interpolation is
/// defined (strictly within the outermost sample layer).
inline bool interpolable(const GridGeometry& g, const Point& p) {
    for (int a = 0; a < g.dim; ++a) {
        const double t = (p[a] - g.origin[a]) / g.spacing;
        if (!(t >= 0.0 && t <= g.shape[a] - 1.0)) return false;
    }
    return true;
}

/// Multilinear interpolation (bilinear in 2-D, trilinear in 3-D). Sphere
/// sampling throughout the project goes through this, so its O(spacing^2)
/// error is the one quoted in the tolerance budgets.
inline double interpolate(const GridField& f, const Point& p) {
    const GridGeometry& g = f.geom;
    double w[3][2];
    int base[3] = {0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
        const double t = (p[a] - g.origin[a]) / g.spacing;
        require(t >= -1e-9 && t <= g.shape[a] - 1.0 + 1e-9,
                "interpolate: point outside the grid");
        int i = static_cast<int>(std::floor(t));
        i = std::clamp(i, 0, g.shape[a] - 2);
        base[a] = i;
        const double fr = std::clamp(t - i, 0.0, 1.0);
        w[a][0] = 1.0 - fr;
        w[a][1] = fr;
    }
    if (g.dim == 2) {
        double v = 0.0;
        for (int dx = 0; dx < 2; ++dx)
            for (int dy = 0; dy < 2; ++dy)
                v += w[0][dx] * w[1][dy] * f.values[g.index(base[0] + dx, base[1] + dy, 0)];
        return v;
    }
    double v = 0.0;
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz)
                v += w[0][dx] * w[1][dy] * w[2][dz] *
                     f.values[g.index(base[0] + dx, base[1] + dy, base[2] + dz)];
    return v;
}

/// Convenience: geometry of a centered grid covering [-half_extent, half_extent]
/// per axis with `n` samples (cell-centered, so the lattice center is the
/// physical origin).
inline GridGeometry centered_geometry(int dim, int n, double half_extent) {
    GridGeometry g;
    g.dim = dim;
    g.shape = {n, n, dim == 3 ? n : 1};
    g.spacing = 2.0 * half_extent / n;
    for (int a = 0; a < dim; ++a) g.origin[a] = -half_extent + 0.5 * g.spacing;
    g.origin[2] = dim == 3 ? g.origin[2] : 0.0;
    g.validate();
    return g;
}

} // namespace sphermean::field

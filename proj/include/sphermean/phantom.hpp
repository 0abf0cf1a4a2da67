#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "sphermean/common.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/morphology.hpp"

namespace sphermean::phantom {

using field::GridField;
using field::GridGeometry;
using field::Point;
using geometry::DomainMask;

/// Gaussian exp(-|x-c|^2 / (2 sigma^2)).
inline GridField gaussian(const GridGeometry& g, double sigma, const Point& c = {0, 0, 0},
                          double amplitude = 1.0) {
    require(sigma > 0.0, "gaussian: sigma must be > 0");
    return field::make_field(g, [&](const Point& p) {
        double r2 = 0.0;
        for (int a = 0; a < 3; ++a) r2 += (p[a] - c[a]) * (p[a] - c[a]);
        return amplitude * std::exp(-r2 / (2.0 * sigma * sigma));
    });
}

/// C^infinity bump with exact compact support |x-c| <= radius.
inline GridField bump(const GridGeometry& g, double radius, const Point& c = {0, 0, 0},
                      double amplitude = 1.0) {
    require(radius > 0.0, "bump: radius must be > 0");
    return field::make_field(g, [&](const Point& p) {
        double r2 = 0.0;
        for (int a = 0; a < 3; ++a) r2 += (p[a] - c[a]) * (p[a] - c[a]);
        const double u2 = r2 / (radius * radius);
        return u2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - u2)) : 0.0;
    });
}

template <typename Pred>
inline DomainMask mask_from(const GridGeometry& g, Pred&& pred) {
    DomainMask m(g);
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                m.set(i, j, k, pred(g.point(i, j, k)));
    return m;
}

inline DomainMask disk_mask(const GridGeometry& g, double rho, const Point& c = {0, 0, 0}) {
    return mask_from(g, [&](const Point& p) {
        double r2 = 0.0;
        for (int a = 0; a < g.dim; ++a) r2 += (p[a] - c[a]) * (p[a] - c[a]);
        return r2 <= rho * rho;
    });
}

inline DomainMask square_mask(const GridGeometry& g, double half_width,
                              const Point& c = {0, 0, 0}) {
    return mask_from(g, [&](const Point& p) {
        for (int a = 0; a < g.dim; ++a)
            if (std::abs(p[a] - c[a]) > half_width) return false;
        return true;
    });
}

/// Two disks of radius rho with centers `gap` apart along the x axis.
inline DomainMask two_disk_mask(const GridGeometry& g, double rho, double gap) {
    return mask_from(g, [&](const Point& p) {
        const double y2 = p[1] * p[1] + (g.dim == 3 ? p[2] * p[2] : 0.0);
        const double a = (p[0] - 0.5 * gap) * (p[0] - 0.5 * gap) + y2;
        const double b = (p[0] + 0.5 * gap) * (p[0] + 0.5 * gap) + y2;
        return a <= rho * rho || b <= rho * rho;
    });
}

/// Nonconvex L-shaped domain made R-convex by construction: the union of two
/// bars is closed morphologically with a ball of the fillet radius, which
/// rounds the reentrant corner so that the complement is exactly a union of
/// fillet-radius balls (opening/closing duality). Use fillet_radius >= R.
inline DomainMask lshape_mask(const GridGeometry& g, double arm_length, double arm_width,
                              double fillet_radius) {
    require(g.dim == 2, "lshape_mask: 2-D only");
    require(arm_length > arm_width && arm_width > 0.0, "lshape_mask: bad arm dimensions");
    const double x0 = -0.5 * arm_length, y0 = -0.5 * arm_length;
    DomainMask raw = mask_from(g, [&](const Point& p) {
        const bool bar_x = p[0] >= x0 && p[0] <= x0 + arm_length && p[1] >= y0 &&
                           p[1] <= y0 + arm_width;
        const bool bar_y = p[0] >= x0 && p[0] <= x0 + arm_width && p[1] >= y0 &&
                           p[1] <= y0 + arm_length;
        return bar_x || bar_y;
    });
    const auto ball = geometry::make_ball(g.dim, fillet_radius, g.spacing);
    return geometry::erode(geometry::dilate(raw, ball), ball);
}

/// Seeded random union of 2..4 disks and boxes, kept `margin` away from the
/// window edge. Drives the oracle-agreement sweeps.
inline DomainMask random_blob_mask(const GridGeometry& g, Rng& rng, double margin) {
    const Point c = g.center();
    double half = 1e300;
    for (int a = 0; a < g.dim; ++a)
        half = std::min(half, 0.5 * g.spacing * (g.shape[a] - 1));
    const double span = half - margin;
    require(span > 0.2 * half, "random_blob_mask: margin leaves no room");

    const int pieces = 2 + static_cast<int>(rng.below(3));
    struct Piece { bool box; Point at; double size; };
    std::vector<Piece> ps;
    for (int q = 0; q < pieces; ++q) {
        Piece p;
        p.box = rng.uniform() < 0.4;
        p.size = span * (0.12 + 0.22 * rng.uniform());
        for (int a = 0; a < 3; ++a) p.at[a] = 0.0;
        for (int a = 0; a < g.dim; ++a)
            p.at[a] = c[a] + (span - p.size) * rng.uniform(-0.75, 0.75);
        ps.push_back(p);
    }
    return mask_from(g, [&](const Point& p) {
        for (const auto& piece : ps) {
            if (piece.box) {
                bool in = true;
                for (int a = 0; a < g.dim; ++a)
                    if (std::abs(p[a] - piece.at[a]) > piece.size) in = false;
                if (in) return true;
            } else {
                double r2 = 0.0;
                for (int a = 0; a < g.dim; ++a)
                    r2 += (p[a] - piece.at[a]) * (p[a] - piece.at[a]);
                if (r2 <= piece.size * piece.size) return true;
            }
        }
        return false;
    });
}

} // namespace sphermean::phantom

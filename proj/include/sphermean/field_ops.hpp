#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "sphermean/common.hpp"
#include "sphermean/fft.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/profile.hpp"
#include "sphermean/sphere_quadrature.hpp"

namespace sphermean::field {

/// Discrete spherical mean Mg(center, t): the quadrature average of the field
/// over the sphere of radius t, sampled by multilinear interpolation.
inline double spherical_mean(const GridField& f, const Point& center, double t,
                             const SphereQuadrature& quad) {
    require(quad.dim == f.geom.dim, "spherical_mean: quadrature dimension mismatch");
    require(t >= 0.0 && std::isfinite(t), "spherical_mean: radius must be >= 0");
    const GridGeometry& g = f.geom;
    for (int a = 0; a < g.dim; ++a) {
        const double lo = g.origin[a];
        const double hi = g.origin[a] + g.spacing * (g.shape[a] - 1);
        require(center[a] - t >= lo - 1e-12 && center[a] + t <= hi + 1e-12,
                "spherical_mean: sphere exits the grid");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < quad.directions.size(); ++i) {
        const auto& d = quad.directions[i];
        const Point p{center[0] + t * d[0], center[1] + t * d[1], center[2] + t * d[2]};
        acc += quad.weights[i] * interpolate(f, p);
    }
    return acc;
}

namespace detail_ops {

/// Shared radial projection loop: profile_i = sum_q w_q f(c + r_i theta_q) Y(theta_q).
inline RadialProfile project_profile(const GridField& f, int count, double r_max,
                                     bool allow_partial, const SphereQuadrature& quad,
                                     const std::function<double(const std::array<double, 3>&)>& Y) {
    const GridGeometry& g = f.geom;
    require(count >= 16, "project_profile: profile_count must be >= 16");
    const Point c = g.center();
    for (int a = 0; a < g.dim; ++a)
        require(std::abs(c[a]) <= 0.5 * g.spacing + 1e-12,
                "project_profile: field must be centered (origin at the grid center)");
    const double fit = g.fit_radius();
    if (r_max <= 0.0) r_max = fit;
    require(allow_partial || r_max <= fit + 1e-12,
            "project_profile: profile request beyond grid extent");

    RadialProfile out;
    out.r_max = r_max;
    out.count = count;
    out.values.assign(count, 0.0);
    if (r_max > fit) out.valid.assign(count, 1);

    parallel_for(count, [&](std::int64_t i) {
        const double r = out.radius(static_cast<int>(i));
        if (r > fit + 1e-12) {
            out.valid[static_cast<std::size_t>(i)] = 0;
            return;
        }
        double acc = 0.0;
        for (std::size_t qi = 0; qi < quad.directions.size(); ++qi) {
            const auto& d = quad.directions[qi];
            const Point p{c[0] + r * d[0], c[1] + r * d[1], c[2] + r * d[2]};
            acc += quad.weights[qi] * interpolate(f, p) * Y(d);
        }
        out.values[static_cast<std::size_t>(i)] = acc;
    });
    return out;
}

} // namespace detail_ops

/// Radialization: the O(n)-average of the field, which equals its angular
/// average on each centered sphere. Field must be centered.
inline RadialProfile radialize(const GridField& f, int profile_count, double r_max = 0.0,
                               int quad_order = 0, bool allow_partial = false) {
    if (quad_order <= 0) quad_order = f.geom.dim == 2 ? 256 : 64;
    const auto quad = sphere_quadrature(f.geom.dim, quad_order);
    return detail_ops::project_profile(f, profile_count, r_max, allow_partial, quad,
                                       [](const std::array<double, 3>&) { return 1.0; });
}

// ---------------------------------------------------------------------------
// Real orthonormal spherical-harmonic basis (normalized measure convention:
// the integral of Y^2 against the weight-1 quadrature is 1).
//
// Index layout for degree m:
//   n=2: d(0)=1, d(m)=2:  l=1 -> sqrt(2) cos(m theta), l=2 -> sqrt(2) sin(m theta)
//   n=3: d(m)=2m+1:       l=1 -> zonal; l=2j -> cos(j phi); l=2j+1 -> sin(j phi)
// ---------------------------------------------------------------------------

inline int harmonic_count(int dim, int m) {
    require(dim == 2 || dim == 3, "harmonic_count: dim must be 2 or 3");
    require(m >= 0, "harmonic_count: m must be >= 0");
    if (dim == 2) return m == 0 ? 1 : 2;
    return 2 * m + 1;
}

namespace detail_ops {

/// Associated Legendre P_m^j(x) without the Condon-Shortley phase.
inline double assoc_legendre(int m, int j, double x) {
    double pjj = 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    for (int i = 1; i <= j; ++i) pjj *= (2.0 * i - 1.0) * s;
    if (m == j) return pjj;
    double pj1 = x * (2.0 * j + 1.0) * pjj;
    if (m == j + 1) return pj1;
    double pm = 0.0;
    for (int deg = j + 2; deg <= m; ++deg) {
        pm = (x * (2.0 * deg - 1.0) * pj1 - (deg + j - 1.0) * pjj) / (deg - j);
        pjj = pj1;
        pj1 = pm;
    }
    return pm;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace detail_ops

/// Evaluates the real orthonormal harmonic Y^m_l at a unit direction.
inline double harmonic_eval(int dim, int m, int l, const std::array<double, 3>& dir) {
    require(l >= 1 && l <= harmonic_count(dim, m), "harmonic_eval: (m,l) outside basis range");
    if (dim == 2) {
        if (m == 0) return 1.0;
        const double th = std::atan2(dir[1], dir[0]);
        const double v = l == 1 ? std::cos(m * th) : std::sin(m * th);
        return std::sqrt(2.0) * v;
    }
    if (m == 0) return 1.0;
    const double ct = dir[2];
    int j;
    bool use_cos;
    if (l == 1) {
        j = 0;
        use_cos = true;
    } else {
        j = (l) / 2;
        use_cos = (l % 2) == 0;
    }
    // orthonormal wrt the normalized measure: sqrt(4 pi) times the standard
    // unit-measure-normalized real harmonic
    const double K = std::sqrt((2.0 * m + 1.0) * detail_ops::factorial(m - j) /
                               detail_ops::factorial(m + j));
    const double P = detail_ops::assoc_legendre(m, j, ct);
    if (j == 0) return K * P;
    const double ph = std::atan2(dir[1], dir[0]);
    const double az = use_cos ? std::cos(j * ph) : std::sin(j * ph);
    return std::sqrt(2.0) * K * P * az;
}

/// One term of the spherical-harmonic expansion: the radial coefficient
/// profile f_{m,l} together with its (m, l) channel.
struct HarmonicCoefficients {
    int m = 0;
    int l = 1;
    RadialProfile profile;
};

/// Projection f_{m,l}(r) of the field onto the harmonic Y^m_l per radius,
/// against the normalized quadrature measure.
inline RadialProfile harmonic_project(const GridField& f, int m, int l, int profile_count,
                                      double r_max = 0.0, int quad_order = 0,
                                      bool allow_partial = false) {
    require(l >= 1 && l <= harmonic_count(f.geom.dim, m),
            "harmonic_project: (m,l) outside basis range");
    if (quad_order <= 0) quad_order = std::max(f.geom.dim == 2 ? 256 : 64, 4 * m + 8);
    const auto quad = sphere_quadrature(f.geom.dim, quad_order);
    const int dim = f.geom.dim;
    return detail_ops::project_profile(
        f, profile_count, r_max, allow_partial, quad,
        [dim, m, l](const std::array<double, 3>& d) { return harmonic_eval(dim, m, l, d); });
}

inline HarmonicCoefficients harmonic_coefficients(const GridField& f, int m, int l,
                                                  int profile_count) {
    return {m, l, harmonic_project(f, m, l, profile_count)};
}

/// n-dimensional convolution with a radial kernel given as a profile with
/// compact support [0, support]. The kernel is sampled onto the zero-padded
/// lattice (wrapped around index 0) and applied spectrally; the physical
/// spacing^dim factor makes the result approximate the continuum integral.
inline GridField convolve_radial(const GridField& f, const RadialProfile& kernel,
                                 double support) {
    const GridGeometry& g = f.geom;
    require(support > 0.0 && support <= kernel.r_max + 1e-12,
            "convolve_radial: kernel support must lie within its profile");
    const int guard = static_cast<int>(std::ceil(support / g.spacing)) + 2;
    for (int a = 0; a < g.dim; ++a)
        require(2 * guard < 6 * g.shape[a],
                "convolve_radial: kernel support exceeds the guard band");

    GridGeometry pg = g;
    for (int a = 0; a < g.dim; ++a)
        pg.shape[a] = static_cast<int>(detail::next_pow2(g.shape[a] + 2 * guard));
    if (g.dim == 2) pg.shape[2] = 1;

    using detail::cplx;
    std::vector<cplx> F(static_cast<std::size_t>(pg.size()), cplx(0, 0));
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                F[pg.index(i, j, k)] = f.values[g.index(i, j, k)];

    std::vector<cplx> Kv(static_cast<std::size_t>(pg.size()), cplx(0, 0));
    const auto wrap_dist = [&](int idx, int n) {
        const int w = idx <= n / 2 ? idx : idx - n;
        return w * g.spacing;
    };
    parallel_for(pg.shape[0], [&](std::int64_t i) {
        const double dx = wrap_dist(static_cast<int>(i), pg.shape[0]);
        for (int j = 0; j < pg.shape[1]; ++j) {
            const double dy = wrap_dist(j, pg.shape[1]);
            for (int k = 0; k < pg.shape[2]; ++k) {
                const double dz = pg.dim == 3 ? wrap_dist(k, pg.shape[2]) : 0.0;
                const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                if (r <= support)
                    Kv[pg.index(static_cast<int>(i), j, k)] = eval_profile(kernel, r, true);
            }
        }
    });

    detail::dft_inplace(F, pg.shape, pg.dim, -1);
    detail::dft_inplace(Kv, pg.shape, pg.dim, -1);
    double vol = 1.0;
    for (int a = 0; a < g.dim; ++a) vol *= g.spacing;
    for (std::size_t i = 0; i < F.size(); ++i) F[i] *= Kv[i] * vol;
    detail::dft_inplace(F, pg.shape, pg.dim, +1);

    const double inv = 1.0 / static_cast<double>(pg.size());
    GridField out(g);
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                out.values[g.index(i, j, k)] = F[pg.index(i, j, k)].real() * inv;
    return out;
}

/// Field sampled from a radial profile (cubic interpolation in the radius,
/// zero beyond the profile when `zero_beyond`).
inline GridField radial_field(const GridGeometry& geom, const RadialProfile& prof,
                              bool zero_beyond = true) {
    return make_field(geom, [&](const Point& p) {
        const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        return eval_profile(prof, r, zero_beyond);
    });
}

/// Ridge field g(<x, e>) from an even scalar profile.
inline GridField ridge_field(const GridGeometry& geom, const EvenProfile& g,
                             const std::array<double, 3>& e) {
    return make_field(geom, [&](const Point& p) {
        const double t = p[0] * e[0] + p[1] * e[1] + p[2] * e[2];
        return eval_even(g, t, true);
    });
}

} // namespace sphermean::field

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sphermean/common.hpp"
#include "sphermean/fft.hpp"
#include "sphermean/field_ops.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/specfun.hpp"

namespace sphermean::transform {

using field::GridField;
using field::GridGeometry;
using field::RadialProfile;
using field::SphereQuadrature;

/// The fixed-radius sphere kernel delta_R under the normalized measure
/// convention: its Fourier multiplier is exactly j_{(dim-2)/2}(R |xi|),
/// equal to 1 at xi = 0, so the transform preserves means and no
/// undetermined constant enters the pipeline.
struct SphereKernel {
    double R = 1.0;
    int dim = 2;

    SphereKernel(double R_, int dim_) : R(R_), dim(dim_) {
        require(R > 0.0 && std::isfinite(R), "SphereKernel: R must be > 0");
        require(dim == 2 || dim == 3, "SphereKernel: dim must be 2 or 3");
    }

    specfun::BesselOrder multiplier_order() const {
        return specfun::BesselOrder(0.5 * (dim - 2));
    }

    double multiplier(double xi) const {
        return specfun::normalized_j(multiplier_order(), R * xi);
    }
};

/// h = f * delta_R via the Fourier multiplier. guard_cells < 0 selects the
/// zero-padding policy (ceil(R/spacing) + 2 cells per side, rounded up to a
/// power of two); guard_cells = 0 runs on the bare torus, which is the right
/// setting for fields that are themselves periodic (e.g. constants).
inline GridField fixed_radius_transform(const GridField& f, const SphereKernel& kernel,
                                        int guard_cells = -1) {
    require(f.geom.dim == kernel.dim, "fixed_radius_transform: dimension mismatch");
    if (guard_cells < 0)
        guard_cells = static_cast<int>(std::ceil(kernel.R / f.geom.spacing)) + 2;
    return field::apply_radial_multiplier(f, guard_cells,
                                          [&](double xi) { return kernel.multiplier(xi); });
}

/// Direct-quadrature route: the pointwise spherical mean at every voxel whose
/// sphere stays inside the grid. Serves as the independent oracle for the
/// multiplier route and as the CLI's `--method quad`.
struct QuadratureTransform {
    GridField values;                 // 0 outside the interior
    std::vector<std::uint8_t> interior; // voxels where the sphere fits
};

inline QuadratureTransform fixed_radius_transform_quadrature(const GridField& f,
                                                             const SphereKernel& kernel,
                                                             const SphereQuadrature& quad) {
    require(f.geom.dim == kernel.dim, "fixed_radius_transform_quadrature: dimension mismatch");
    const GridGeometry& g = f.geom;
    QuadratureTransform out;
    out.values = GridField(g);
    out.interior.assign(static_cast<std::size_t>(g.size()), 0);
    const double R = kernel.R;
    parallel_for(g.shape[0], [&](std::int64_t i) {
        for (int j = 0; j < g.shape[1]; ++j) {
            for (int k = 0; k < g.shape[2]; ++k) {
                const field::Point c = g.point(static_cast<int>(i), j, k);
                bool fits = true;
                for (int a = 0; a < g.dim; ++a) {
                    const double lo = g.origin[a], hi = g.origin[a] + g.spacing * (g.shape[a] - 1);
                    if (c[a] - R < lo || c[a] + R > hi) { fits = false; break; }
                }
                if (!fits) continue;
                const std::int64_t idx = g.index(static_cast<int>(i), j, k);
                out.interior[static_cast<std::size_t>(idx)] = 1;
                double acc = 0.0;
                for (std::size_t q = 0; q < quad.directions.size(); ++q) {
                    const auto& d = quad.directions[q];
                    acc += quad.weights[q] *
                           field::interpolate(f, {c[0] + R * d[0], c[1] + R * d[1],
                                                  c[2] + R * d[2]});
                }
                out.values.values[static_cast<std::size_t>(idx)] = acc;
            }
        }
    });
    return out;
}

/// Max deviation between the two transform routes over the quadrature
/// interior, normalized by the interior maximum of the quadrature values.
inline double oracle_relative_deviation(const GridField& h_fft, const QuadratureTransform& q) {
    double dev = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < h_fft.values.size(); ++i) {
        if (!q.interior[i]) continue;
        dev = std::max(dev, std::abs(h_fft.values[i] - q.values.values[i]));
        scale = std::max(scale, std::abs(q.values.values[i]));
    }
    return scale > 0.0 ? dev / scale : dev;
}

/// Kernel of the volume representation of the spherical mean: the profile
/// Psi(x) = j_{(dim-2)/2}(lambda0 |x|) chi_{|x| <= R}, where R*lambda0 is a
/// zero of the normalized Bessel function, so Psi vanishes at |x| = R.
struct RepresentationKernel {
    double R = 1.0;
    int dim = 2;
    double lambda0 = 0.0;
    double zero_tol = 1e-9;

    RepresentationKernel(double R_, int dim_, double lambda0_, double zero_tol_ = 1e-9)
        : R(R_), dim(dim_), lambda0(lambda0_), zero_tol(zero_tol_) {
        require(R > 0.0 && lambda0 > 0.0, "RepresentationKernel: R and lambda0 must be > 0");
        require(dim == 2 || dim == 3, "RepresentationKernel: dim must be 2 or 3");
        const double resid =
            std::abs(specfun::normalized_j(specfun::BesselOrder(0.5 * (dim - 2)), R * lambda0));
        require(resid <= zero_tol,
                "RepresentationKernel: R*lambda0 is not a zero of the multiplier");
    }

    /// lambda0 from the k-th multiplier zero (k = 0 is the first).
    static RepresentationKernel from_zero_index(double R, int dim, int k) {
        const auto table =
            specfun::bessel_zeros(specfun::BesselOrder(0.5 * (dim - 2)), k + 1, 1e-13);
        return RepresentationKernel(R, dim, table.zeros[static_cast<std::size_t>(k)] / R);
    }

    RadialProfile profile(int count = 512) const {
        const double lam = lambda0;
        return field::make_radial_profile(R, count, [lam, this](double r) {
            return specfun::normalized_j(specfun::BesselOrder(0.5 * (dim - 2)), lam * r);
        });
    }
};

struct RepresentationReport {
    double constant = 0.0;  // the fitted/frozen c
    double residual = 0.0;  // ||LHS - c RHS||_2 / ||LHS||_2
    bool degenerate = false;
    bool calibrated_here = false;
};

namespace detail_rep {

/// Both sides of the representation identity. LHS through the multiplier,
/// RHS through the independently sampled Psi kernel and the spectral
/// Laplacian (the -|xi|^2 multiplier).
inline void representation_sides(const GridField& f, const RepresentationKernel& rep,
                                 GridField& lhs, GridField& rhs) {
    const SphereKernel kernel(rep.R, rep.dim);
    const int guard = static_cast<int>(std::ceil(2.0 * rep.R / f.geom.spacing)) + 2;
    lhs = fixed_radius_transform(f, kernel, guard);
    const GridField conv = field::convolve_radial(f, rep.profile(), rep.R);
    const double lam2 = rep.lambda0 * rep.lambda0;
    rhs = field::apply_radial_multiplier(conv, guard,
                                         [lam2](double xi) { return lam2 - xi * xi; });
}

} // namespace detail_rep

/// Calibrates the representation constant on a reference Gaussian phantom
/// (sigma = R/7 on the supplied geometry) as the L2-optimal scalar
/// <LHS, RHS>/||RHS||^2. Frozen per (dim, R, lambda0) this makes the check
/// on other phantoms a genuine proportionality test.
inline double calibrate_representation_constant(const GridGeometry& geom,
                                                const RepresentationKernel& rep) {
    const double sigma = rep.R / 7.0;
    const GridField ref = field::make_field(geom, [sigma](const field::Point& p) {
        const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        return std::exp(-r2 / (2.0 * sigma * sigma));
    });
    GridField lhs, rhs;
    detail_rep::representation_sides(ref, rep, lhs, rhs);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        num += lhs.values[i] * rhs.values[i];
        den += rhs.values[i] * rhs.values[i];
    }
    require(den > 0.0, "calibrate_representation_constant: degenerate reference");
    return num / den;
}

/// Relative L2 residual of h = c (Lap + lambda0^2)(f * Psi_R). Pass the
/// frozen constant c, or 0 to calibrate on the reference Gaussian first.
inline RepresentationReport representation_check(const GridField& f,
                                                 const RepresentationKernel& rep,
                                                 double constant = 0.0) {
    RepresentationReport report;
    if (constant == 0.0) {
        report.constant = calibrate_representation_constant(f.geom, rep);
        report.calibrated_here = true;
    } else {
        report.constant = constant;
    }
    GridField lhs, rhs;
    detail_rep::representation_sides(f, rep, lhs, rhs);
    const double lhs_norm = lhs.norm2();
    if (lhs_norm <= 1e-14 * std::max(1.0, f.max_abs())) {
        report.degenerate = true;
        double rn = 0.0;
        for (double v : rhs.values) rn += v * v;
        report.residual = std::sqrt(rn) <= 1e-14 ? 0.0 : 1.0;
        return report;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        const double d = lhs.values[i] - report.constant * rhs.values[i];
        err += d * d;
    }
    report.residual = std::sqrt(err) / lhs_norm;
    return report;
}

struct RingReport {
    std::vector<double> radii;      // |xi| of each checked ring
    std::vector<double> maxima;     // max |h-hat| on the ring, normalized
    double global_max = 0.0;        // max |h-hat| over all bins
    double ring_width = 0.0;
};

/// Maxima of |h-hat| on the real zero rings |xi| = lambda_k of the
/// multiplier, normalized by the global spectral maximum. Default ring
/// width: 1.5 spectral bins of the coarsest axis.
inline RingReport spectral_ring_check(const GridField& h, const SphereKernel& kernel, int k_max,
                                      double ring_width = 0.0) {
    require(k_max >= 1, "spectral_ring_check: k_max must be >= 1");
    const auto spec = field::fft_forward(h);
    const GridGeometry& g = h.geom;
    double dxi = 0.0;
    for (int a = 0; a < g.dim; ++a)
        dxi = std::max(dxi, 2.0 * pi / (g.shape[a] * g.spacing));
    RingReport rep;
    rep.ring_width = ring_width > 0.0 ? ring_width : 1.5 * dxi;

    const auto zeros = specfun::bessel_zeros(kernel.multiplier_order(), k_max, 1e-12);
    for (double z : zeros.zeros) rep.radii.push_back(z / kernel.R);
    rep.maxima.assign(static_cast<std::size_t>(k_max), 0.0);

    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                const double xi = spec.freq_mag(i, j, k);
                const double a = std::abs(spec.values[g.index(i, j, k)]);
                rep.global_max = std::max(rep.global_max, a);
                for (int q = 0; q < k_max; ++q)
                    if (std::abs(xi - rep.radii[static_cast<std::size_t>(q)]) <= rep.ring_width)
                        rep.maxima[static_cast<std::size_t>(q)] =
                            std::max(rep.maxima[static_cast<std::size_t>(q)], a);
            }
    if (rep.global_max > 0.0)
        for (auto& m : rep.maxima) m /= rep.global_max;
    return rep;
}

} // namespace sphermean::transform

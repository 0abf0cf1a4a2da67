#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sphermean/common.hpp"
#include "sphermean/fft.hpp"
#include "sphermean/field_ops.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/morphology.hpp"
#include "sphermean/specfun.hpp"
#include "sphermean/transform.hpp"

namespace sphermean::inversion {

using field::GridField;
using field::GridGeometry;
using field::Point;
using geometry::DomainMask;
using transform::SphereKernel;

/// How the zero rings of the multiplier are handled during deconvolution.
/// The rings are information holes: zero_fill discards them transparently,
/// tikhonov damps them for noisy inputs.
struct RegularizationPolicy {
    enum class Strategy { zero_fill, tikhonov };
    Strategy strategy = Strategy::zero_fill;
    double ring_half_width = 0.0; // |xi| units; 0 selects 3 spectral bins
    double epsilon = 0.0;         // tikhonov floor

    void validate() const {
        require(ring_half_width >= 0.0, "RegularizationPolicy: ring_half_width must be >= 0");
        if (strategy == Strategy::tikhonov)
            require(epsilon > 0.0, "RegularizationPolicy: tikhonov requires epsilon > 0");
    }
};

struct DeconvolveReport {
    GridField estimate;
    double ring_energy_fraction = 0.0; // spectral mass within the ring bands / total
    double ring_half_width = 0.0;      // the width actually used, |xi| units
    bool dominated_warning = false;    // ring fraction > 50%
};

/// Regularized inverse of the fixed-radius transform: divide by the
/// multiplier off the zero rings, apply the policy on them. The energy
/// bookkeeping is exact: ring_energy_fraction is the |h-hat|^2 mass within
/// ring_half_width of a zero ring divided by the total.
inline DeconvolveReport deconvolve(const GridField& h, const SphereKernel& kernel,
                                   const RegularizationPolicy& policy) {
    policy.validate();
    h.check_finite();
    require(h.geom.dim == kernel.dim, "deconvolve: dimension mismatch");
    const GridGeometry& g = h.geom;
    const int guard = static_cast<int>(std::ceil(kernel.R / g.spacing)) + 2;

    GridGeometry pg = g;
    for (int a = 0; a < g.dim; ++a)
        pg.shape[a] = static_cast<int>(field::detail::next_pow2(g.shape[a] + 2 * guard));
    if (g.dim == 2) pg.shape[2] = 1;

    using field::detail::cplx;
    std::vector<cplx> data(static_cast<std::size_t>(pg.size()), cplx(0, 0));
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                data[pg.index(i, j, k)] = h.values[g.index(i, j, k)];
    field::detail::dft_inplace(data, pg.shape, pg.dim, -1);

    field::SpectralField probe;
    probe.geom = pg;
    double dxi = 0.0, xi_max2 = 0.0;
    for (int a = 0; a < pg.dim; ++a) {
        dxi = std::max(dxi, 2.0 * pi / (pg.shape[a] * pg.spacing));
        const double nyq = pi / pg.spacing;
        xi_max2 += nyq * nyq;
    }
    const double w = policy.ring_half_width > 0.0 ? policy.ring_half_width : 3.0 * dxi;
    const double xi_max = std::sqrt(xi_max2);

    const int zero_count =
        std::max(1, static_cast<int>(std::ceil(kernel.R * xi_max / pi)) + 2);
    const auto table = specfun::bessel_zeros(kernel.multiplier_order(), zero_count, 1e-12);
    std::vector<double> rings;
    for (double z : table.zeros) rings.push_back(z / kernel.R);

    const auto ring_distance = [&](double xi) {
        auto it = std::lower_bound(rings.begin(), rings.end(), xi);
        double d = 1e300;
        if (it != rings.end()) d = std::min(d, *it - xi);
        if (it != rings.begin()) d = std::min(d, xi - *(it - 1));
        return d;
    };

    double total_energy = 0.0, ring_energy = 0.0;
    std::vector<std::vector<double>> fr(3);
    for (int a = 0; a < pg.dim; ++a) {
        fr[a].resize(pg.shape[a]);
        for (int i = 0; i < pg.shape[a]; ++i) fr[a][i] = probe.freq(a, i);
    }
    for (int i = 0; i < pg.shape[0]; ++i)
        for (int j = 0; j < pg.shape[1]; ++j)
            for (int k = 0; k < pg.shape[2]; ++k) {
                const double fx = fr[0][i], fy = fr[1][j];
                const double fz = pg.dim == 3 ? fr[2][k] : 0.0;
                const double xi = std::sqrt(fx * fx + fy * fy + fz * fz);
                cplx& v = data[pg.index(i, j, k)];
                const double e = std::norm(v);
                total_energy += e;
                const double mult = kernel.multiplier(xi);
                if (ring_distance(xi) <= w) {
                    ring_energy += e;
                    if (policy.strategy == RegularizationPolicy::Strategy::zero_fill)
                        v = 0.0;
                    else
                        v *= mult / (mult * mult + policy.epsilon);
                } else {
                    v /= mult;
                }
            }

    field::detail::dft_inplace(data, pg.shape, pg.dim, +1);
    const double inv = 1.0 / static_cast<double>(pg.size());
    DeconvolveReport rep;
    rep.estimate = GridField(g);
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                rep.estimate.values[g.index(i, j, k)] = data[pg.index(i, j, k)].real() * inv;
    rep.ring_energy_fraction = total_energy > 0.0 ? ring_energy / total_energy : 0.0;
    rep.ring_half_width = w;
    rep.dominated_warning = rep.ring_energy_fraction > 0.5;
    return rep;
}

/// Data of the non-injectivity counterexample: lam must be a zero of
/// J_{n/2-1}, the sphere radius is 1 (the construction's scale), and the
/// critical exponent is 2n/(n-1).
struct CounterexampleSpec {
    int dim = 2;
    double lam = 0.0;
    double sphere_radius = 1.0;

    CounterexampleSpec(int dim_, double lam_) : dim(dim_), lam(lam_) {
        require(dim == 2 || dim == 3, "CounterexampleSpec: dim must be 2 or 3");
        require(lam > 0.0, "CounterexampleSpec: lam must be > 0");
        const double resid =
            std::abs(specfun::bessel_j(specfun::BesselOrder(0.5 * dim - 1.0), lam));
        require(resid <= 1e-8,
                "CounterexampleSpec: lam is not a zero of J_{n/2-1} (the construction "
                "requires it)");
    }

    static CounterexampleSpec from_zero_index(int dim, int k) {
        const auto t = specfun::bessel_zeros(specfun::BesselOrder(0.5 * dim - 1.0), k + 1, 1e-13);
        return CounterexampleSpec(dim, t.zeros[static_cast<std::size_t>(k)]);
    }

    double critical_p() const { return 2.0 * dim / (dim - 1.0); }

    /// f as a function of the radius; f(0) is the removable-singularity limit.
    double radial_value(double r) const {
        const double p = 0.5 * dim - 1.0;
        const double scale =
            std::pow(lam, p) / (std::pow(2.0, p) * std::tgamma(p + 1.0));
        return scale * specfun::normalized_j(specfun::BesselOrder(p), lam * r);
    }
};

/// Samples f(x) = |x|^{1-n/2} J_{n/2-1}(lam |x|) on the grid; the removable
/// singularity at 0 is evaluated through the normalized Bessel function.
inline GridField zalcman_field(const CounterexampleSpec& spec, const GridGeometry& geom) {
    require(geom.dim == spec.dim, "zalcman_field: dimension mismatch");
    return field::make_field(geom, [&](const Point& p) {
        return spec.radial_value(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    });
}

/// L^p norms over the annuli t0 <= |x| <= 2 t0. The caller inspects the
/// trend: below the critical exponent the tails grow, above it they decay.
inline std::vector<double> lp_annulus_tails(const GridField& f, double p,
                                            const std::vector<double>& t0_list) {
    require(p >= 1.0, "lp_annulus_tails: p must be >= 1");
    const GridGeometry& g = f.geom;
    const Point c = g.center();
    double half = 1e300;
    for (int a = 0; a < g.dim; ++a)
        half = std::min(half, 0.5 * g.spacing * (g.shape[a] - 1));
    double vol = 1.0;
    for (int a = 0; a < g.dim; ++a) vol *= g.spacing;

    std::vector<double> tails;
    for (double t0 : t0_list) {
        require(t0 > 0.0 && 2.0 * t0 <= half + 0.5 * g.spacing,
                "lp_annulus_tails: annulus exits the grid");
        double acc = 0.0;
        for (int i = 0; i < g.shape[0]; ++i)
            for (int j = 0; j < g.shape[1]; ++j)
                for (int k = 0; k < g.shape[2]; ++k) {
                    const Point x = g.point(i, j, k);
                    double r2 = 0.0;
                    for (int a = 0; a < g.dim; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
                    const double r = std::sqrt(r2);
                    if (r >= t0 && r <= 2.0 * t0)
                        acc += std::pow(std::abs(f.values[g.index(i, j, k)]), p);
                }
        tails.push_back(std::pow(acc * vol, 1.0 / p));
    }
    return tails;
}

struct ProductIdentityReport {
    double constant = 0.0;    // calibrated at x = 0
    double max_rel_err = 0.0; // sup-normalized over the t sweep, max over centers
};

/// Checks the functional identity M f(x, t) = const f(x) f(t) for the
/// counterexample field: the constant is calibrated at x = 0 by least
/// squares over the t sweep, then the identity is verified at the supplied
/// centers. Errors are normalized by the sup of |M f(x, .)| per center.
inline ProductIdentityReport zalcman_product_identity(const GridField& f,
                                                      const CounterexampleSpec& spec,
                                                      const std::vector<Point>& centers,
                                                      const std::vector<double>& t_values,
                                                      const field::SphereQuadrature& quad) {
    require(!t_values.empty(), "zalcman_product_identity: empty t sweep");
    ProductIdentityReport rep;

    double num = 0.0, den = 0.0;
    for (double t : t_values) {
        const double m0 = field::spherical_mean(f, {0, 0, 0}, t, quad);
        const double ft = spec.radial_value(t);
        num += m0 * ft;
        den += ft * ft;
    }
    require(den > 0.0, "zalcman_product_identity: degenerate t sweep");
    rep.constant = num / den; // f(0) = radial_value(0) enters below

    const double f0 = spec.radial_value(0.0);
    for (const auto& c : centers) {
        const double fx =
            spec.radial_value(std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]));
        double sup = 0.0, err = 0.0;
        for (double t : t_values) {
            const double m = field::spherical_mean(f, c, t, quad);
            sup = std::max(sup, std::abs(m));
            err = std::max(err, std::abs(m - rep.constant * fx * spec.radial_value(t) / f0));
        }
        if (sup > 0.0) rep.max_rel_err = std::max(rep.max_rel_err, err / sup);
    }
    return rep;
}

/// Inputs of the support-theorem harness: the domain K, the sphere radius,
/// the hypothesis and conclusion tolerances, and the sphere quadrature.
struct HarnessConfig {
    DomainMask K;
    double R = 1.0;
    double mean_tol = 1e-3;    // relative to ||f||_inf
    double support_tol = 1e-3; // L1 mass fraction outside K
    field::SphereQuadrature quad;

    void validate(const GridGeometry& g) const {
        require(K.geom.same_lattice(g), "HarnessConfig: K must share the field lattice");
        require(R > 0.0 && mean_tol > 0.0 && support_tol > 0.0,
                "HarnessConfig: tolerances must be positive");
        require(!K.empty(), "HarnessConfig: K is empty");
        require(K.bounded(), "HarnessConfig: K must be bounded");
    }
};

struct SupportReport {
    enum class Classification { consistent_pass, hypothesis_violated, conclusion_violated };
    Classification classification = Classification::consistent_pass;
    double hypothesis_max_mean = 0.0; // max |mean| over all eligible centers
    double hypothesis_tol_abs = 0.0;
    std::int64_t centers_tested = 0;
    std::array<int, 3> witness_center_idx{0, 0, 0};
    Point witness_center{0, 0, 0}; // argmax center (meaningful when violated)
    Point witness_point{0, 0, 0};  // max-|f| sample on the witness sphere
    double exterior_mass_fraction = 0.0;
    std::vector<double> tail_t0;   // annotation for the non-compact regime
    std::vector<double> tail_values;
    double tail_p = 0.0;
};

/// The support theorem at desk scale. Hypothesis: the spherical means over every
/// lattice-centered R-sphere whose ball avoids K stay below
/// mean_tol * ||f||_inf. Conclusion: the L1 mass fraction outside K stays
/// below support_tol (grid fields never vanish exactly, so support is
/// measured as mass). A conclusion violation with the hypothesis satisfied
/// on a compactly supported phantom is an implementation failure; for
/// genuinely non-compact fields the report carries the L^p annulus tails.
inline SupportReport support_theorem_harness(const GridField& f, const HarnessConfig& cfg) {
    cfg.validate(f.geom);
    const GridGeometry& g = f.geom;
    SupportReport rep;

    const double fmax = f.max_abs();
    rep.hypothesis_tol_abs = cfg.mean_tol * std::max(fmax, 1e-300);

    const DomainMask centers = geometry::center_set(cfg.K, cfg.R);
    const std::int64_t total = g.size();
    std::vector<double> means(static_cast<std::size_t>(total), 0.0);
    parallel_for(g.shape[0], [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                if (!centers.at(i, j, k)) continue;
                const Point c = g.point(i, j, k);
                bool fits = true;
                for (int a = 0; a < g.dim; ++a) {
                    const double lo = g.origin[a], hi = g.origin[a] + g.spacing * (g.shape[a] - 1);
                    if (c[a] - cfg.R < lo || c[a] + cfg.R > hi) { fits = false; break; }
                }
                if (!fits) continue;
                means[g.index(i, j, k)] =
                    std::abs(field::spherical_mean(f, c, cfg.R, cfg.quad));
            }
    });
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                if (!centers.at(i, j, k)) continue;
                ++rep.centers_tested;
                const double m = means[g.index(i, j, k)];
                if (m > rep.hypothesis_max_mean) {
                    rep.hypothesis_max_mean = m;
                    rep.witness_center_idx = {i, j, k};
                    rep.witness_center = g.point(i, j, k);
                }
            }
    require(rep.centers_tested > 0, "support_theorem_harness: no eligible centers");

    // max-|f| sample on the witnessing sphere localizes the offending mass
    {
        double best = -1.0;
        for (std::size_t q = 0; q < cfg.quad.directions.size(); ++q) {
            const auto& d = cfg.quad.directions[q];
            const Point p{rep.witness_center[0] + cfg.R * d[0],
                          rep.witness_center[1] + cfg.R * d[1],
                          rep.witness_center[2] + cfg.R * d[2]};
            if (!field::interpolable(g, p)) continue;
            const double v = std::abs(field::interpolate(f, p));
            if (v > best) {
                best = v;
                rep.witness_point = p;
            }
        }
    }

    double inside = 0.0, outside = 0.0;
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                const double a = std::abs(f.values[g.index(i, j, k)]);
                if (cfg.K.at(i, j, k)) inside += a;
                else outside += a;
            }
    const double mass = inside + outside;
    rep.exterior_mass_fraction = mass > 0.0 ? outside / mass : 0.0;

    if (rep.hypothesis_max_mean > rep.hypothesis_tol_abs) {
        rep.classification = SupportReport::Classification::hypothesis_violated;
    } else if (rep.exterior_mass_fraction > cfg.support_tol) {
        rep.classification = SupportReport::Classification::conclusion_violated;
        // annotate with the L^p tails just above the critical exponent
        double half = 1e300;
        for (int a = 0; a < g.dim; ++a)
            half = std::min(half, 0.5 * g.spacing * (g.shape[a] - 1));
        rep.tail_p = 2.0 * g.dim / (g.dim - 1.0) + 1.0;
        for (double s : {0.15, 0.25, 0.35, 0.45}) rep.tail_t0.push_back(s * half);
        rep.tail_values = lp_annulus_tails(f, rep.tail_p, rep.tail_t0);
    }
    return rep;
}

struct WalkReport {
    bool k_rejected = false; // K failed the R-convexity predicate
    geometry::RConvexVerdict geometry_verdict;
    double hypothesis_max_mean = 0.0; // reported, not enforced
    std::int64_t c_count = 0;
    std::int64_t cf_count = 0;
    bool cf_nonempty = false;
    bool frontier_empty = false;
    bool complete = false; // C_f == C
    std::vector<std::array<int, 3>> frontier; // capped at 64 entries
    std::array<int, 3> witness_center_idx{0, 0, 0};
    Point witness_point{0, 0, 0}; // max |f| inside the ball of the first frontier center
};

/// Desk-scale enactment of the connectedness walk behind the R-convex
/// support theorem: C_f collects the centers whose R-ball is free of field
/// mass above support_tol * ||f||_inf, seeded at the outermost shell of C
/// and grown by face adjacency. For a compliant field the walk covers C and
/// the frontier is empty; a hidden bump stalls the walk, and the frontier
/// voxels (with the blocking sample inside their balls) witness it.
inline WalkReport rconvex_region_growing(const GridField& f, const HarnessConfig& cfg) {
    cfg.validate(f.geom);
    const GridGeometry& g = f.geom;
    WalkReport rep;

    rep.geometry_verdict = geometry::r_convex(cfg.K, cfg.R);
    if (!rep.geometry_verdict.is_r_convex()) {
        rep.k_rejected = true;
        return rep;
    }
    const DomainMask& C = rep.geometry_verdict.centers;
    rep.c_count = C.count();

    // hypothesis report (the caller is expected to have pre-checked it)
    {
        SupportReport sup = support_theorem_harness(f, cfg);
        rep.hypothesis_max_mean = sup.hypothesis_max_mean;
    }

    const double fmax = f.max_abs();
    const double tol = cfg.support_tol * std::max(fmax, 1e-300);
    DomainMask bad(g);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        bad.inside[i] = std::abs(f.values[i]) > tol ? 1 : 0;
    const auto ball = geometry::make_ball(g.dim, cfg.R, g.spacing);
    const DomainMask blocked = geometry::dilate(bad, ball);

    DomainMask candidate(g);
    for (std::size_t i = 0; i < candidate.inside.size(); ++i)
        candidate.inside[i] = C.inside[i] && !blocked.inside[i];

    // seeds: the outermost 2-voxel shell of C (the far field)
    const int rfit = static_cast<int>(std::floor(ball.radius_voxels));
    DomainMask grown(g);
    std::queue<std::array<int, 3>> q;
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                if (!candidate.at(i, j, k)) continue;
                int edge = std::min(i, g.shape[0] - 1 - i);
                edge = std::min(edge, std::min(j, g.shape[1] - 1 - j));
                if (g.dim == 3) edge = std::min(edge, std::min(k, g.shape[2] - 1 - k));
                if (edge <= rfit + 2) {
                    grown.set(i, j, k, true);
                    q.push({i, j, k});
                }
            }
    const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    const int ndirs = g.dim == 2 ? 4 : 6;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (int d = 0; d < ndirs; ++d) {
            const int x = v[0] + dirs[d][0], y = v[1] + dirs[d][1], z = v[2] + dirs[d][2];
            if (x < 0 || x >= g.shape[0] || y < 0 || y >= g.shape[1] || z < 0 ||
                z >= g.shape[2])
                continue;
            if (candidate.at(x, y, z) && !grown.at(x, y, z)) {
                grown.set(x, y, z, true);
                q.push({x, y, z});
            }
        }
    }

    rep.cf_count = grown.count();
    rep.cf_nonempty = rep.cf_count > 0;

    // frontier: C-neighbors of C_f voxels that are not themselves in C_f
    rep.frontier_empty = true;
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                if (!grown.at(i, j, k)) continue;
                for (int d = 0; d < ndirs; ++d) {
                    const int x = i + dirs[d][0], y = j + dirs[d][1], z = k + dirs[d][2];
                    if (x < 0 || x >= g.shape[0] || y < 0 || y >= g.shape[1] || z < 0 ||
                        z >= g.shape[2])
                        continue;
                    if (C.at(x, y, z) && !grown.at(x, y, z)) {
                        rep.frontier_empty = false;
                        if (rep.frontier.size() < 64) rep.frontier.push_back({x, y, z});
                    }
                }
            }
    rep.complete = rep.cf_nonempty && rep.frontier_empty && rep.cf_count == rep.c_count;

    if (!rep.frontier.empty()) {
        rep.witness_center_idx = rep.frontier.front();
        const auto& w = rep.witness_center_idx;
        double best = -1.0;
        for (const auto& o : ball.offsets) {
            const int x = w[0] + o[0], y = w[1] + o[1], z = w[2] + o[2];
            if (x < 0 || x >= g.shape[0] || y < 0 || y >= g.shape[1] || z < 0 ||
                z >= g.shape[2])
                continue;
            const double v = std::abs(f.values[g.index(x, y, z)]);
            if (v > best) {
                best = v;
                rep.witness_point = g.point(x, y, z);
            }
        }
    }
    return rep;
}

} // namespace sphermean::inversion

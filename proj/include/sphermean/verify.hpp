#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sphermean/abel.hpp"
#include "sphermean/common.hpp"
#include "sphermean/field_ops.hpp"
#include "sphermean/inversion.hpp"
#include "sphermean/morphology.hpp"
#include "sphermean/phantom.hpp"
#include "sphermean/report.hpp"
#include "sphermean/specfun.hpp"
#include "sphermean/transform.hpp"

namespace sphermean::verify {

struct SuiteResult {
    bool pass = false;
    report::Value doc = report::Value::object();
};

namespace detail_verify {

inline report::Value base_doc(const std::string& suite) {
    report::Value doc = report::Value::object();
    doc.set("suite", suite);
    doc.set("config", report::Value::object());
    doc.set("metrics", report::Value::object());
    doc.set("witnesses", report::Value::array());
    return doc;
}

/// Independent J_0 oracle for the zero check: plain series plus bisection.
inline double oracle_j0_first_zero() {
    const auto j0 = [](long double x) {
        long double term = 1.0L, sum = 1.0L;
        const long double q = x * x * 0.25L;
        for (int k = 1; k < 200; ++k) {
            term *= -q / (static_cast<long double>(k) * k);
            sum += term;
            if (std::fabs(term) < 1e-30L) break;
        }
        return sum;
    };
    long double lo = 2.0L, hi = 3.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (j0(lo) * j0(mid) <= 0.0L) hi = mid;
        else lo = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

// Brute-force R-convexity oracle straight from the definition (2-D). Kept
// independent of the morphology engine: eligibility, coverage and the flood
// fill are all reimplemented with direct loops.
struct OracleRConvex {
    bool coverage_ok = true;
    bool connected = true;
};

inline OracleRConvex brute_force_r_convex(const geometry::DomainMask& K, double R) {
    const auto& g = K.geom;
    const double rv = R / g.spacing + 0.5;
    const double rv2 = rv * rv + 1e-9;
    const int r = static_cast<int>(rv) + 1;
    const int rfit = static_cast<int>(std::floor(rv));
    const int nx = g.shape[0], ny = g.shape[1];

    std::vector<std::uint8_t> eligible(static_cast<std::size_t>(nx) * ny, 0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            if (i - rfit < 0 || i + rfit >= nx || j - rfit < 0 || j + rfit >= ny) continue;
            bool ok = true;
            for (int a = -r; a <= r && ok; ++a)
                for (int b = -r; b <= r; ++b) {
                    if (a * a + b * b > rv2) continue;
                    const int x = i + a, y = j + b;
                    if (x < 0 || x >= nx || y < 0 || y >= ny) continue;
                    if (K.at(x, y)) { ok = false; break; }
                }
            eligible[static_cast<std::size_t>(i) * ny + j] = ok;
        }

    OracleRConvex v;
    for (int i = 0; i < nx && v.coverage_ok; ++i)
        for (int j = 0; j < ny; ++j) {
            if (K.at(i, j)) continue;
            bool shell = false;
            for (int a = -1; a <= 1 && !shell; ++a)
                for (int b = -1; b <= 1; ++b) {
                    const int x = i + a, y = j + b;
                    if (x >= 0 && x < nx && y >= 0 && y < ny && K.at(x, y)) { shell = true; break; }
                }
            if (shell) continue;
            bool reachable = false, covered = false;
            for (int a = -r; a <= r && !covered; ++a)
                for (int b = -r; b <= r; ++b) {
                    if (a * a + b * b > rv2) continue;
                    const int x = i + a, y = j + b;
                    if (x - rfit < 0 || x + rfit >= nx || y - rfit < 0 || y + rfit >= ny)
                        continue;
                    reachable = true;
                    if (eligible[static_cast<std::size_t>(x) * ny + y]) { covered = true; break; }
                }
            if (reachable && !covered) {
                v.coverage_ok = false;
                break;
            }
        }

    std::vector<std::uint8_t> seen(eligible.size(), 0);
    int comps = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const std::size_t idx = static_cast<std::size_t>(i) * ny + j;
            if (!eligible[idx] || seen[idx]) continue;
            ++comps;
            std::vector<std::array<int, 2>> stack{{i, j}};
            seen[idx] = 1;
            while (!stack.empty()) {
                const auto p = stack.back();
                stack.pop_back();
                const int dd[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                for (auto& d : dd) {
                    const int x = p[0] + d[0], y = p[1] + d[1];
                    if (x < 0 || x >= nx || y < 0 || y >= ny) continue;
                    const std::size_t n = static_cast<std::size_t>(x) * ny + y;
                    if (eligible[n] && !seen[n]) {
                        seen[n] = 1;
                        stack.push_back({x, y});
                    }
                }
            }
        }
    v.connected = comps == 1;
    return v;
}

} // namespace detail_verify

/// Special functions: half-integer closed forms, zero tables against the
/// independent oracle, envelope boundedness, exclusion geometry.
inline SuiteResult specfun_suite() {
    using namespace specfun;
    SuiteResult res;
    res.doc = detail_verify::base_doc("specfun");
    report::Value metrics = report::Value::object();
    bool pass = true;

    double j12_err = 0.0;
    for (double x = 0.01; x <= 50.0; x += 0.01) {
        const double closed = std::sin(x) / x;
        j12_err = std::max(j12_err, std::abs(normalized_j(BesselOrder(0.5), x) - closed));
    }
    metrics.set("j_half_vs_sinc_max_abs_err", j12_err);
    pass = pass && j12_err <= 1e-12;

    const auto half_zeros = bessel_zeros(BesselOrder(0.5), 10, 1e-12);
    double zero_err = 0.0;
    for (int k = 0; k < 10; ++k)
        zero_err = std::max(zero_err, std::abs(half_zeros.zeros[k] - (k + 1) * pi));
    metrics.set("j_half_zeros_vs_k_pi_max_abs_err", zero_err);
    pass = pass && zero_err <= 1e-10;

    const double z_oracle = detail_verify::oracle_j0_first_zero();
    const double z_impl = bessel_zeros(BesselOrder(0.0), 1, 1e-12).zeros[0];
    metrics.set("j0_first_zero_vs_oracle_abs_err", std::abs(z_impl - z_oracle));
    pass = pass && std::abs(z_impl - z_oracle) <= 1e-10;

    double worst_ratio = 0.0;
    for (int n : {2, 3})
        for (int m = 0; m <= 8; ++m) {
            double lo = 1e300, hi = 0.0;
            for (double T = 4.0; T <= 256.0; T *= 2.0) {
                const double e = asymptotic_envelope(n, m, T);
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            worst_ratio = std::max(worst_ratio, hi / lo);
        }
    metrics.set("envelope_worst_octave_ratio", worst_ratio);
    pass = pass && worst_ratio < 4.0;

    const double jp = normalized_j_prime(BesselOrder(0.5), pi);
    metrics.set("j_half_prime_at_pi_vs_closed_abs_err", std::abs(jp + 1.0 / pi));
    pass = pass && std::abs(jp + 1.0 / pi) <= 1e-10;

    ExclusionRegion region{BesselOrder(0.5)};
    region.origin_disk_radius = 1.0;
    bool exclusion_ok = true;
    for (int k = 1; k <= 6; ++k)
        exclusion_ok = exclusion_ok && lower_bound_check(BesselOrder(0.5), {k * pi, 0.0}, 1e-3,
                                                         region) == LowerBoundStatus::in_exclusion;
    double cmin = 1e300;
    for (int k = 0; k < 10; ++k) {
        const double mid = 0.5 * (region.center(k) + region.center(k + 1));
        cmin = std::min(cmin, std::abs(bessel_j(BesselOrder(0.5), mid)) * std::sqrt(mid));
    }
    for (int k = 0; k < 10; ++k) {
        const double mid = 0.5 * (region.center(k) + region.center(k + 1));
        exclusion_ok = exclusion_ok && lower_bound_check(BesselOrder(0.5), {mid, 0.0}, 0.5 * cmin,
                                                         region) == LowerBoundStatus::holds;
    }
    metrics.set("exclusion_geometry_ok", exclusion_ok);
    pass = pass && exclusion_ok;

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// Grid plumbing: round trips, quadrature exactness, harmonic orthonormality.
inline SuiteResult field_suite(std::uint64_t seed) {
    using namespace field;
    SuiteResult res;
    res.doc = detail_verify::base_doc("field");
    report::Value config = report::Value::object();
    config.set("seed", static_cast<std::int64_t>(seed));
    res.doc.set("config", std::move(config));
    report::Value metrics = report::Value::object();
    bool pass = true;

    Rng rng(seed);
    double rt_err = 0.0;
    struct Cfg { int dim; std::array<int, 3> shape; };
    for (const Cfg& c : {Cfg{2, {16, 12, 1}}, Cfg{2, {64, 64, 1}}, Cfg{3, {12, 10, 8}}}) {
        GridGeometry g;
        g.dim = c.dim;
        g.shape = c.shape;
        g.spacing = 0.21;
        GridField f(g);
        for (auto& v : f.values) v = rng.uniform(-1.0, 1.0);
        const auto back = fft_inverse(fft_forward(f));
        double err = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            err += (back.values[i] - f.values[i]) * (back.values[i] - f.values[i]);
            norm += f.values[i] * f.values[i];
        }
        rt_err = std::max(rt_err, std::sqrt(err / norm));
    }
    metrics.set("fft_roundtrip_max_rel_err", rt_err);
    pass = pass && rt_err <= 1e-10;

    double ortho_err = 0.0, const_err = 0.0;
    for (int dim : {2, 3}) {
        const auto q = sphere_quadrature(dim, 48);
        for (int m = 0; m <= 6; ++m)
            for (int l = 1; l <= harmonic_count(dim, m); ++l) {
                double ip = 0.0, mean = 0.0;
                for (std::size_t i = 0; i < q.directions.size(); ++i) {
                    const double y = harmonic_eval(dim, m, l, q.directions[i]);
                    ip += q.weights[i] * y * y;
                    mean += q.weights[i] * y;
                }
                ortho_err = std::max(ortho_err, std::abs(ip - 1.0));
                if (m >= 1) const_err = std::max(const_err, std::abs(mean));
            }
    }
    metrics.set("harmonic_normalization_max_err", ortho_err);
    metrics.set("harmonic_mean_max_err", const_err);
    pass = pass && ortho_err <= 1e-10 && const_err <= 1e-10;

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// Multiplier equivalence, the volume representation identity (with refinement), and the
/// spectral zero-ring vanishing with its negative control.
inline SuiteResult transform_suite() {
    using namespace field;
    using namespace transform;
    SuiteResult res;
    res.doc = detail_verify::base_doc("transform");
    report::Value metrics = report::Value::object();
    bool pass = true;

    {
        GridGeometry g = centered_geometry(2, 256, 1.28);
        const auto f = phantom::gaussian(g, 0.1);
        const SphereKernel k(0.7, 2);
        const auto h = fixed_radius_transform(f, k);
        const auto q = fixed_radius_transform_quadrature(f, k, sphere_quadrature(2, 720));
        const double dev = oracle_relative_deviation(h, q);
        metrics.set("multiplier_vs_quadrature_rel_dev", dev);
        pass = pass && dev <= 1e-3;
    }

    {
        GridGeometry g = centered_geometry(2, 256, 2.0);
        const auto f = phantom::gaussian(g, 0.1);
        const auto rep0 = RepresentationKernel::from_zero_index(0.7, 2, 0);
        const auto rep1 = RepresentationKernel::from_zero_index(0.7, 2, 1);
        const auto r0 = representation_check(f, rep0);
        const auto r1 = representation_check(f, rep1);
        metrics.set("representation_residual_zero0", r0.residual);
        metrics.set("representation_residual_zero1", r1.residual);
        pass = pass && r0.residual <= 1e-2 && r1.residual <= 1e-2;

        GridGeometry gf = centered_geometry(2, 512, 2.0);
        const auto rf = representation_check(phantom::gaussian(gf, 0.1), rep0);
        metrics.set("representation_residual_refined", rf.residual);
        metrics.set("representation_refinement_ratio", r0.residual / rf.residual);
        pass = pass && r0.residual / rf.residual >= 2.0;
    }

    {
        GridGeometry g = centered_geometry(2, 1024, 65.0);
        const auto f = phantom::gaussian(g, 0.45);
        const SphereKernel k(0.7, 2);
        const auto h = fixed_radius_transform(f, k);
        const auto rings = spectral_ring_check(h, k, 3);
        const auto control = spectral_ring_check(f, k, 3);
        report::Value arr = report::Value::from_vector(rings.maxima);
        metrics.set("ring_maxima_transformed", std::move(arr));
        double worst = 0.0, neg = 0.0;
        for (double m : rings.maxima) worst = std::max(worst, m);
        for (double m : control.maxima) neg = std::max(neg, m);
        metrics.set("ring_maxima_worst", worst);
        metrics.set("ring_negative_control", neg);
        pass = pass && worst <= 1e-2 && neg >= 1e-1;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// The counterexample family: vanishing means, the product identity, and the
/// L^p annulus-tail trends bracketing the critical exponent.
inline SuiteResult zalcman_suite(std::uint64_t seed) {
    using namespace field;
    using namespace inversion;
    SuiteResult res;
    res.doc = detail_verify::base_doc("zalcman");
    report::Value config = report::Value::object();
    config.set("seed", static_cast<std::int64_t>(seed));
    res.doc.set("config", std::move(config));
    report::Value metrics = report::Value::object();
    bool pass = true;

    const auto spec = CounterexampleSpec::from_zero_index(2, 0);
    {
        GridGeometry g = centered_geometry(2, 512, 2.56);
        const auto f = zalcman_field(spec, g);
        const auto quad = sphere_quadrature(2, 512);
        Rng rng(seed);
        double worst = 0.0;
        int tested = 0;
        while (tested < 100) {
            const double x = rng.uniform(-1.4, 1.4), y = rng.uniform(-1.4, 1.4);
            if (std::hypot(x, y) > 1.4) continue;
            ++tested;
            worst = std::max(worst, std::abs(spherical_mean(f, {x, y, 0.0}, 1.0, quad)));
        }
        metrics.set("radius1_means_max_over_100_centers", worst);
        pass = pass && worst <= 1e-4 * f.max_abs();

        std::vector<double> ts;
        for (int i = 0; i < 14; ++i) ts.push_back(0.2 + 1.3 * i / 13.0);
        const std::vector<Point> centers = {{0.3, 0.2, 0.0}, {-0.55, 0.1, 0.0}, {0.0, 0.8, 0.0}};
        const auto idrep = zalcman_product_identity(f, spec, centers, ts, quad);
        metrics.set("product_identity_constant", idrep.constant);
        metrics.set("product_identity_max_rel_err", idrep.max_rel_err);
        pass = pass && idrep.max_rel_err <= 1e-3;
    }
    {
        GridGeometry g = centered_geometry(2, 1024, 65.0);
        const auto f = zalcman_field(spec, g);
        const std::vector<double> t0s = {4.0, 8.0, 16.0, 32.0};
        const auto above = lp_annulus_tails(f, 5.0, t0s);
        const auto below = lp_annulus_tails(f, 3.5, t0s);
        metrics.set("tails_p5", report::Value::from_vector(above));
        metrics.set("tails_p35", report::Value::from_vector(below));
        bool dec = true, inc = true;
        for (std::size_t i = 0; i + 1 < t0s.size(); ++i) {
            dec = dec && above[i + 1] < above[i];
            inc = inc && below[i + 1] > below[i];
        }
        metrics.set("tails_p5_strictly_decreasing", dec);
        metrics.set("tails_p35_strictly_increasing", inc);
        pass = pass && dec && inc;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// Abel machinery: round trips, the ridge fixed points, the convolution
/// identity with its phantom-independent constant, Titchmarsh onsets.
inline SuiteResult abel_suite(std::uint64_t seed) {
    using namespace abel;
    using namespace field;
    SuiteResult res;
    res.doc = detail_verify::base_doc("abel");
    report::Value config = report::Value::object();
    config.set("seed", static_cast<std::int64_t>(seed));
    res.doc.set("config", std::move(config));
    report::Value metrics = report::Value::object();
    bool pass = true;
    const AbelParams p3{3, false};

    {
        double worst = 0.0;
        const std::vector<std::vector<double>> polys = {
            {1.0, -1.0}, {0.5, 0.3, -0.2}, {1.0, -0.4, 0.05, -0.3}};
        for (const auto& coeffs : polys) {
            const auto g = make_even_profile(1.0, 513, [&](double p) {
                double v = 0.0, pw = 1.0;
                for (double c : coeffs) {
                    v += c * pw;
                    pw *= p * p;
                }
                return v;
            });
            const auto f = abel_forward(g, p3);
            const auto inv = abel_inverse(f, p3);
            for (int i = 0; i < g.count; ++i) {
                const double p = g.p(i);
                if (p < 0.1 || p > 0.995) continue;
                worst = std::max(worst, std::abs(inv.g.values[i] - g.values[i]));
            }
        }
        metrics.set("roundtrip_poly_deg6_max_abs_err", worst);
        pass = pass && worst <= 1e-6;
    }

    {
        const auto g = make_even_profile(2.0, 257, [](double p) {
            return 0.3 - 0.5 * p * p + 0.25 * std::pow(p, 4) - 0.01 * std::pow(p, 6);
        });
        const auto f = abel_forward(g, p3);
        GridGeometry geom = centered_geometry(3, 80, 1.2);
        const auto ridge = ridge_field(geom, g, {0.0, 0.0, 1.0});
        const auto prof = radialize(ridge, 32);
        double worst = 0.0;
        for (int i = 0; i < prof.count; ++i)
            worst = std::max(worst, std::abs(prof.values[i] - eval_profile(f, prof.radius(i))));
        const double budget = 8.0 * geom.spacing * geom.spacing;
        metrics.set("forward_vs_radialized_ridge_max_err", worst);
        metrics.set("forward_vs_radialized_ridge_budget", budget);
        pass = pass && worst <= budget;
    }

    {
        std::vector<double> radii;
        for (int i = 0; i < 10; ++i) radii.push_back(0.2 + 1.8 * i / 9.0);
        const auto g1 = make_even_profile(3.0, 513, [](double p) {
            return std::exp(-p * p / (2.0 * 0.6 * 0.6));
        });
        const auto g2 = make_even_profile(3.0, 513, [](double p) {
            return (1.0 + 0.4 * p * p) * std::exp(-p * p / (2.0 * 0.5 * 0.5));
        });
        const auto r1 = convolution_identity_check(g1, p3, radii);
        const auto r2 = convolution_identity_check(g2, p3, radii);
        metrics.set("identity_spread_phantom1", r1.spread);
        metrics.set("identity_spread_phantom2", r2.spread);
        metrics.set("identity_constant_phantom1", r1.constant);
        metrics.set("identity_constant_phantom2", r2.constant);
        const double cdiff = std::abs(r2.constant - r1.constant) / std::abs(r1.constant);
        metrics.set("identity_constant_rel_diff", cdiff);
        pass = pass && r1.spread <= 1e-3 && r2.spread <= 1e-3 && cdiff <= 1e-3;
    }

    {
        Rng rng(seed);
        double worst_steps = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const double lo = 1.0 + 0.4 * rng.uniform();
            const double width = 0.12 + 0.25 * rng.uniform();
            field::OffsetProfile g;
            g.p_lo = lo;
            g.p_hi = lo + width;
            g.count = 192;
            g.values.resize(g.count);
            const double c = lo + 0.5 * width, w = 0.5 * width;
            for (int i = 0; i < g.count; ++i) {
                const double u = (g.p(i) - c) / w;
                g.values[i] = std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
            }
            const auto rep = titchmarsh_forward_check(g, 3);
            worst_steps = std::max(worst_steps,
                                   std::abs(rep.onset_s - rep.expected_onset) / rep.grid_step);
        }
        metrics.set("titchmarsh_onset_worst_steps", worst_steps);
        pass = pass && worst_steps <= 2.0;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// The local support-propagation pipeline on its three canonical phantoms.
inline SuiteResult local_suite() {
    using namespace abel;
    using namespace field;
    SuiteResult res;
    res.doc = detail_verify::base_doc("local");
    report::Value metrics = report::Value::object();
    bool pass = true;
    const double eps = 0.2;

    const auto bump_profile = [](double center, double halfwidth) {
        return make_radial_profile(2.0, 513, [&](double r) {
            const double u = (r - center) / halfwidth;
            return std::abs(u) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
        });
    };

    {
        const auto v = local_theorem_pipeline(bump_profile(1.6, 0.15), eps, 3);
        metrics.set("compliant_status_pass", v.status == LocalVerdict::Status::pass);
        metrics.set("compliant_means_max", v.means_max);
        pass = pass && v.status == LocalVerdict::Status::pass;
    }
    {
        const auto v = local_theorem_pipeline(make_radial_profile(2.0, 513, [](double) {
                                                  return 0.0;
                                              }),
                                              eps, 3);
        metrics.set("zero_status_pass", v.status == LocalVerdict::Status::pass);
        pass = pass && v.status == LocalVerdict::Status::pass;
    }
    {
        const auto v = local_theorem_pipeline(bump_profile(1.075, 0.025), eps, 3);
        const bool flagged = v.status == LocalVerdict::Status::hypothesis_flagged;
        metrics.set("in_reach_bump_flagged", flagged);
        metrics.set("in_reach_bump_means_max", v.means_max);
        pass = pass && flagged;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// Support-theorem harness: compliant phantom, exterior-bump witness, and the
/// deconvolution round trip on a ring-avoiding phantom.
inline SuiteResult support_suite(std::uint64_t seed) {
    using namespace field;
    using namespace inversion;
    SuiteResult res;
    res.doc = detail_verify::base_doc("support");
    report::Value config = report::Value::object();
    config.set("seed", static_cast<std::int64_t>(seed));
    res.doc.set("config", std::move(config));
    report::Value metrics = report::Value::object();
    report::Value witnesses = report::Value::array();
    bool pass = true;

    GridGeometry g = centered_geometry(2, 192, 2.4);
    HarnessConfig cfg;
    cfg.K = phantom::disk_mask(g, 0.8);
    cfg.R = 0.5;
    cfg.mean_tol = 1e-3;
    cfg.support_tol = 1e-3;
    cfg.quad = sphere_quadrature(2, 256);

    {
        const auto rep = support_theorem_harness(phantom::bump(g, 0.6), cfg);
        const bool ok = rep.classification == SupportReport::Classification::consistent_pass;
        metrics.set("compliant_pass", ok);
        metrics.set("compliant_hypothesis_max_mean", rep.hypothesis_max_mean);
        metrics.set("compliant_exterior_mass_fraction", rep.exterior_mass_fraction);
        pass = pass && ok && rep.exterior_mass_fraction <= 1e-3;
    }
    {
        Rng rng(seed);
        const double ang = rng.uniform(0.0, 2.0 * pi);
        const Point at{1.55 * std::cos(ang), 1.55 * std::sin(ang), 0.0};
        const auto rep = support_theorem_harness(phantom::bump(g, 0.07, at), cfg);
        const bool violated =
            rep.classification == SupportReport::Classification::hypothesis_violated;
        const double dist =
            std::hypot(rep.witness_point[0] - at[0], rep.witness_point[1] - at[1]);
        metrics.set("exterior_bump_hypothesis_violated", violated);
        metrics.set("exterior_bump_witness_distance", dist);
        metrics.set("exterior_bump_witness_budget", 0.07 + 2.0 * g.spacing);
        report::Value w = report::Value::object();
        w.set("kind", "hypothesis_witness_point");
        w.set("x", rep.witness_point[0]);
        w.set("y", rep.witness_point[1]);
        witnesses.push(std::move(w));
        pass = pass && violated && dist <= 0.07 + 2.0 * g.spacing;
    }
    {
        GridGeometry gw = centered_geometry(2, 256, 12.8);
        const transform::SphereKernel k(0.7, 2);
        const auto f = phantom::gaussian(gw, 2.0);
        const auto h = transform::fixed_radius_transform(f, k);
        const auto rep = deconvolve(h, k, RegularizationPolicy{});
        double err = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const double d = rep.estimate.values[i] - f.values[i];
            err += d * d;
            norm += f.values[i] * f.values[i];
        }
        const double rel = std::sqrt(err / norm);
        metrics.set("deconvolve_roundtrip_rel_l2", rel);
        metrics.set("deconvolve_ring_energy_fraction", rep.ring_energy_fraction);
        pass = pass && rel <= 5e-2 && rep.ring_energy_fraction <= 1e-3;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("witnesses", std::move(witnesses));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// R-convexity: seeded-mask agreement with the brute-force oracle, convex
/// sweeps, and the two-disk gap witness.
inline SuiteResult rconvex_suite(std::uint64_t seed) {
    using namespace field;
    using namespace geometry;
    SuiteResult res;
    res.doc = detail_verify::base_doc("rconvex");
    report::Value config = report::Value::object();
    config.set("seed", static_cast<std::int64_t>(seed));
    res.doc.set("config", std::move(config));
    report::Value metrics = report::Value::object();
    report::Value witnesses = report::Value::array();
    bool pass = true;

    {
        GridGeometry g = centered_geometry(2, 64, 1.0);
        Rng rng(seed);
        const double R = 0.25;
        int agree = 0, seen_fail = 0;
        for (int trial = 0; trial < 25; ++trial) {
            const auto K = phantom::random_blob_mask(g, rng, 2.0 * R + 4.0 * g.spacing);
            const auto v = r_convex(K, R);
            const auto o = detail_verify::brute_force_r_convex(K, R);
            const bool same = ((v.status != RConvexVerdict::Status::coverage_fail) ==
                               o.coverage_ok) &&
                              ((v.component_count == 1) == o.connected);
            agree += same;
            if (!v.is_r_convex()) ++seen_fail;
        }
        metrics.set("oracle_agreement_count", static_cast<std::int64_t>(agree));
        metrics.set("oracle_trials", static_cast<std::int64_t>(25));
        metrics.set("oracle_nonconvex_cases_seen", static_cast<std::int64_t>(seen_fail));
        pass = pass && agree == 25;
    }
    {
        GridGeometry g = centered_geometry(2, 128, 2.0);
        bool convex_ok = true;
        for (double R : {0.15, 0.3, 0.5}) {
            convex_ok = convex_ok && r_convex(phantom::disk_mask(g, 0.5), R).is_r_convex();
            convex_ok = convex_ok && r_convex(phantom::square_mask(g, 0.45), R).is_r_convex();
        }
        metrics.set("convex_phantoms_pass_all_r", convex_ok);
        pass = pass && convex_ok;
    }
    {
        GridGeometry g = centered_geometry(2, 256, 4.3);
        const auto v = r_convex(phantom::two_disk_mask(g, 1.0, 2.5), 1.0);
        const bool failed = v.status == RConvexVerdict::Status::coverage_fail;
        metrics.set("two_disk_coverage_fail", failed);
        bool in_gap = false;
        if (v.has_coverage_witness) {
            const Point w = g.point(v.coverage_fail_witness[0], v.coverage_fail_witness[1], 0);
            in_gap = std::abs(w[0]) < 0.7 && std::abs(w[1]) < 1.3;
            report::Value wd = report::Value::object();
            wd.set("kind", "coverage_fail_witness");
            wd.set("x", w[0]);
            wd.set("y", w[1]);
            witnesses.push(std::move(wd));
        }
        metrics.set("two_disk_witness_in_gap", in_gap);
        pass = pass && failed && in_gap;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("witnesses", std::move(witnesses));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// The connectedness walk on the filleted L-shape: full coverage for a
/// compliant phantom, a frontier adjacent to a hidden pocket bump.
inline SuiteResult rconvex_walk_suite() {
    using namespace field;
    using namespace inversion;
    SuiteResult res;
    res.doc = detail_verify::base_doc("rconvex-walk");
    report::Value metrics = report::Value::object();
    report::Value witnesses = report::Value::array();
    bool pass = true;

    GridGeometry g = centered_geometry(2, 160, 1.6);
    HarnessConfig cfg;
    cfg.K = phantom::lshape_mask(g, 1.8, 0.55, 0.28);
    cfg.R = 0.25;
    cfg.mean_tol = 1e-3;
    cfg.support_tol = 1e-3;
    cfg.quad = sphere_quadrature(2, 128);

    {
        const auto rep = rconvex_region_growing(phantom::bump(g, 0.14, {-0.62, 0.3, 0.0}), cfg);
        metrics.set("compliant_complete", rep.complete);
        metrics.set("compliant_c_count", rep.c_count);
        metrics.set("compliant_cf_count", rep.cf_count);
        pass = pass && rep.complete;
    }
    {
        const Point pocket{0.05, 0.05, 0.0};
        const auto rep = rconvex_region_growing(phantom::bump(g, 0.06, pocket), cfg);
        const bool stalled = !rep.complete && !rep.frontier.empty();
        double dist = 1e300;
        if (stalled)
            dist = std::hypot(rep.witness_point[0] - pocket[0], rep.witness_point[1] - pocket[1]);
        metrics.set("pocket_bump_stalled", stalled);
        metrics.set("pocket_witness_distance", stalled ? dist : -1.0);
        metrics.set("pocket_witness_budget", 0.06 + 2.0 * g.spacing);
        if (stalled) {
            report::Value w = report::Value::object();
            w.set("kind", "frontier_witness_point");
            w.set("x", rep.witness_point[0]);
            w.set("y", rep.witness_point[1]);
            witnesses.push(std::move(w));
        }
        pass = pass && stalled && dist <= 0.06 + 2.0 * g.spacing;
    }

    res.doc.set("metrics", std::move(metrics));
    res.doc.set("witnesses", std::move(witnesses));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

/// Every suite, aggregated. The sub-suite documents ride inside metrics so
/// the top-level schema stays {suite, config, metrics, witnesses, pass}.
inline SuiteResult all_suites(std::uint64_t seed, int dim) {
    require(dim == 2 || dim == 3, "all_suites: dim must be 2 or 3");
    SuiteResult res;
    res.doc = detail_verify::base_doc("all");
    report::Value config = report::Value::object();
    config.set("seed", static_cast<std::int64_t>(seed));
    config.set("dim", static_cast<std::int64_t>(dim));
    res.doc.set("config", std::move(config));

    report::Value suites = report::Value::object();
    bool pass = true;
    const auto add = [&](const char* name, SuiteResult s) {
        pass = pass && s.pass;
        suites.set(name, std::move(s.doc));
    };
    add("specfun", specfun_suite());
    add("field", field_suite(seed));
    add("transform", transform_suite());
    add("zalcman", zalcman_suite(seed));
    add("abel", abel_suite(seed));
    add("local", local_suite());
    add("support", support_suite(seed));
    add("rconvex", rconvex_suite(seed));
    add("rconvex-walk", rconvex_walk_suite());

    report::Value metrics = report::Value::object();
    metrics.set("suites", std::move(suites));
    res.doc.set("metrics", std::move(metrics));
    res.doc.set("pass", pass);
    res.pass = pass;
    return res;
}

} // namespace sphermean::verify

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sphermean/specfun.hpp"
#include "sphermean/transform.hpp"

using namespace sphermean;
using namespace sphermean::field;
using namespace sphermean::transform;

namespace {

GridField gaussian_field(const GridGeometry& g, double sigma) {
    return make_field(g, [sigma](const Point& p) {
        const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        return std::exp(-r2 / (2.0 * sigma * sigma));
    });
}

double first_j0_zero() {
    return specfun::bessel_zeros(specfun::BesselOrder(0.0), 1, 1e-13).zeros[0];
}

} // namespace

TEST_CASE("multiplier value at DC is exactly one; means are preserved") {
    const SphereKernel k(0.7, 2);
    CHECK(k.multiplier(0.0) == 1.0);

    GridGeometry g = centered_geometry(2, 64, 1.5);
    const GridField f = make_field(g, [](const Point& p) {
        const double u = std::hypot(p[0], p[1]) / 0.6;
        return u < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
    });
    // On the torus the DC bookkeeping is exact up to rounding.
    const auto ht = fixed_radius_transform(f, k, /*guard_cells=*/0);
    double mf = 0.0, mh = 0.0;
    for (double v : f.values) mf += v;
    for (double v : ht.values) mh += v;
    CHECK(std::abs(mh - mf) / std::abs(mf) < 1e-12);
    // With padding, cropping the window sheds only the band-limited kernel's
    // sinc tail.
    const auto hp = fixed_radius_transform(f, k);
    double mp = 0.0;
    for (double v : hp.values) mp += v;
    CHECK(std::abs(mp - mf) / std::abs(mf) < 1e-5);
}

TEST_CASE("constant field is a fixed point on the torus") {
    GridGeometry g = centered_geometry(2, 32, 1.0);
    const GridField f(g, 2.5);
    const auto h = fixed_radius_transform(f, SphereKernel(0.4, 2), /*guard_cells=*/0);
    for (double v : h.values) CHECK(std::abs(v - 2.5) < 1e-12);

    // guard_cells = 0 must keep the exact shape, including non-pow2 grids
    GridGeometry g24 = centered_geometry(2, 24, 1.0);
    const GridField f24(g24, -1.25);
    const auto h24 = fixed_radius_transform(f24, SphereKernel(0.4, 2), 0);
    for (double v : h24.values) CHECK(std::abs(v + 1.25) < 1e-12);
}

TEST_CASE("translation covariance up to rounding") {
    GridGeometry g = centered_geometry(2, 128, 2.0);
    const double h0 = g.spacing;
    const GridField a = make_field(g, [](const Point& p) {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        return std::exp(-r2 / 0.02);
    });
    const int si = 9, sj = -5;
    const GridField b = make_field(g, [&](const Point& p) {
        const double x = p[0] - si * h0, y = p[1] - sj * h0;
        return std::exp(-(x * x + y * y) / 0.02);
    });
    const SphereKernel k(0.5, 2);
    const auto ha = fixed_radius_transform(a, k);
    const auto hb = fixed_radius_transform(b, k);
    double dev = 0.0;
    for (int i = 20; i < 108; ++i)
        for (int j = 20; j < 108; ++j) {
            if (i - si < 0 || i - si >= 128 || j - sj < 0 || j - sj >= 128) continue;
            dev = std::max(dev, std::abs(hb.at(i, j) - ha.at(i - si, j - sj)));
        }
    CHECK(dev / ha.max_abs() < 1e-10);
}

TEST_CASE("linearity to rounding precision") {
    GridGeometry g = centered_geometry(2, 64, 1.5);
    const GridField f1 = gaussian_field(g, 0.2);
    const GridField f2 = make_field(g, [](const Point& p) {
        return std::exp(-(p[0] - 0.2) * (p[0] - 0.2) / 0.05 - p[1] * p[1] / 0.1);
    });
    GridField combo(g);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 2.0 * f1.values[i] - 0.7 * f2.values[i];
    const SphereKernel k(0.5, 2);
    const auto hc = fixed_radius_transform(combo, k);
    const auto h1 = fixed_radius_transform(f1, k);
    const auto h2 = fixed_radius_transform(f2, k);
    double dev = 0.0;
    for (std::size_t i = 0; i < hc.values.size(); ++i)
        dev = std::max(dev, std::abs(hc.values[i] - (2.0 * h1.values[i] - 0.7 * h2.values[i])));
    CHECK(dev < 1e-12);
}

TEST_CASE("rotation covariance: radial phantoms stay radial") {
    GridGeometry g = centered_geometry(2, 128, 2.0);
    const GridField f = gaussian_field(g, 0.25);
    const auto h = fixed_radius_transform(f, SphereKernel(0.6, 2));
    const auto prof = radialize(h, 40);
    const auto rebuilt = radial_field(g, prof, true);
    double dev = 0.0;
    const double scale = h.max_abs();
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j) {
            const Point p = g.point(i, j, 0);
            if (std::hypot(p[0], p[1]) < prof.r_max * 0.9)
                dev = std::max(dev, std::abs(h.at(i, j) - rebuilt.at(i, j)));
        }
    CHECK(dev / scale < 2e-3);
}

TEST_CASE("multiplier route agrees with direct quadrature (oracle equivalence)") {
    // Gaussian sigma=0.1, R=0.7 on a 256^2 grid spanning [-1.28, 1.28].
    GridGeometry g = centered_geometry(2, 256, 1.28);
    const GridField f = gaussian_field(g, 0.1);
    const SphereKernel k(0.7, 2);
    const auto h = fixed_radius_transform(f, k);
    const auto q = fixed_radius_transform_quadrature(f, k, sphere_quadrature(2, 720));
    const double dev = oracle_relative_deviation(h, q);
    CHECK(dev < 1e-3);
    CHECK(dev > 0.0);
}

TEST_CASE("transform annihilates the Zalcman-type field") {
    // f(x) = J_0(lambda |x|) with lambda the first zero of J_0 and R = 1:
    // the spectrum of f sits on the zero ring of the multiplier.
    GridGeometry g = centered_geometry(2, 512, 2.56);
    const double lam = first_j0_zero();
    const GridField f = make_field(g, [lam](const Point& p) {
        return specfun::normalized_j(specfun::BesselOrder(0.0), lam * std::hypot(p[0], p[1]));
    });
    const auto h = fixed_radius_transform(f, SphereKernel(1.0, 2));
    double sup = 0.0;
    for (int i = 0; i < 512; ++i)
        for (int j = 0; j < 512; ++j) {
            const Point p = g.point(i, j, 0);
            if (std::abs(p[0]) <= 1.5 && std::abs(p[1]) <= 1.5)
                sup = std::max(sup, std::abs(h.at(i, j)));
        }
    CHECK(sup <= 1e-3); // ||f||_inf = 1
}

TEST_CASE("volume representation identity holds with a frozen constant") {
    GridGeometry g = centered_geometry(2, 256, 2.0);
    const GridField f = gaussian_field(g, 0.1);

    SECTION("first zero") {
        const auto rep = RepresentationKernel::from_zero_index(0.7, 2, 0);
        const auto r = representation_check(f, rep);
        CHECK(!r.degenerate);
        CHECK(r.residual <= 1e-2);
    }
    SECTION("second zero gives the same order of residual") {
        const auto rep = RepresentationKernel::from_zero_index(0.7, 2, 1);
        const auto r = representation_check(f, rep);
        CHECK(r.residual <= 1e-2);
    }
    SECTION("frozen constant transfers to a different phantom") {
        const auto rep = RepresentationKernel::from_zero_index(0.7, 2, 0);
        const double c = calibrate_representation_constant(g, rep);
        const GridField other = make_field(g, [](const Point& p) {
            const double dx = p[0] - 0.1, dy = p[1] + 0.15;
            return std::exp(-(dx * dx + dy * dy) / 0.03) * (1.0 + 0.5 * p[0]);
        });
        const auto r = representation_check(other, rep, c);
        CHECK(!r.calibrated_here);
        CHECK(r.residual <= 1e-2);
    }
    SECTION("zero field is degenerate with residual zero") {
        const GridField zero(g);
        const auto rep = RepresentationKernel::from_zero_index(0.7, 2, 0);
        const auto r = representation_check(zero, rep, 0.13);
        CHECK(r.degenerate);
        CHECK(r.residual == 0.0);
    }
    SECTION("residual shrinks by at least 2x under refinement") {
        const auto rep = RepresentationKernel::from_zero_index(0.7, 2, 0);
        GridGeometry coarse = centered_geometry(2, 128, 2.0);
        const auto rc = representation_check(gaussian_field(coarse, 0.1), rep);
        const auto rf = representation_check(f, rep);
        CHECK(rc.residual / rf.residual >= 2.0);
    }
    SECTION("lambda0 must be a zero") {
        CHECK_THROWS_AS(RepresentationKernel(0.7, 2, 1.0), domain_error);
    }
}

TEST_CASE("spectral ring check") {
    const SphereKernel k(0.7, 2);

    SECTION("transformed field: ring maxima bounded by the multiplier on the ring") {
        GridGeometry g = centered_geometry(2, 512, 32.0);
        const GridField f = gaussian_field(g, 0.45);
        const auto h = fixed_radius_transform(f, k);
        const auto rep = spectral_ring_check(h, k, 3);
        // |j_0'| at the first zero times R times the ring width bounds the
        // multiplier there; spectra can only be smaller.
        const double bound = 0.52 * k.R * rep.ring_width * 1.2;
        CHECK(rep.maxima[0] <= bound);
        CHECK(rep.maxima[1] <= rep.maxima[0]);
        // negative control: the untransformed field has O(1) ring content
        const auto neg = spectral_ring_check(f, k, 3);
        CHECK(neg.maxima[0] >= 1e-1);
    }
    SECTION("zero field reports all zeros") {
        GridGeometry g = centered_geometry(2, 64, 2.0);
        const auto rep = spectral_ring_check(GridField(g), k, 3);
        for (double m : rep.maxima) CHECK(m == 0.0);
        CHECK(rep.global_max == 0.0);
    }
}

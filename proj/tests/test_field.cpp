#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sphermean/field_ops.hpp"
#include "sphermean/fft.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/profile.hpp"
#include "sphermean/sphere_quadrature.hpp"

using namespace sphermean;
using namespace sphermean::field;

TEST_CASE("fft round-trips random fields of every supported shape") {
    Rng rng(42);
    struct Cfg { int dim; std::array<int, 3> shape; };
    const Cfg cfgs[] = {
        {2, {8, 8, 1}},   {2, {16, 12, 1}}, {2, {20, 20, 1}}, {2, {100, 64, 1}},
        {3, {8, 8, 8}},   {3, {12, 10, 8}}, {3, {16, 16, 16}},
    };
    for (const auto& c : cfgs) {
        GridGeometry g;
        g.dim = c.dim;
        g.shape = c.shape;
        g.spacing = 0.17;
        GridField f(g);
        for (auto& v : f.values) v = rng.uniform(-1.0, 1.0);
        const auto s = fft_forward(f);
        const auto back = fft_inverse(s);
        double err = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            err += (back.values[i] - f.values[i]) * (back.values[i] - f.values[i]);
            norm += f.values[i] * f.values[i];
        }
        INFO("shape " << c.shape[0] << "x" << c.shape[1] << "x" << c.shape[2]);
        CHECK(std::sqrt(err / norm) < 1e-10);
    }
}

TEST_CASE("fft rejects non-finite values") {
    GridGeometry g = centered_geometry(2, 16, 1.0);
    GridField f(g);
    f.values[7] = std::nan("");
    CHECK_THROWS_AS(fft_forward(f), domain_error);
}

TEST_CASE("fft normalization: DC bin carries the mean") {
    GridGeometry g = centered_geometry(2, 16, 1.0);
    GridField f(g, 3.25);
    const auto s = fft_forward(f);
    CHECK(std::abs(s.values[0] - std::complex<double>(3.25, 0.0)) < 1e-12);
    double rest = 0.0;
    for (std::size_t i = 1; i < s.values.size(); ++i) rest = std::max(rest, std::abs(s.values[i]));
    CHECK(rest < 1e-12);

    // pure cosine along axis 1 -> two symmetric bins
    GridField c(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            c.at(i, j) = std::cos(2.0 * pi * 3.0 * j / 16.0);
    const auto sc = fft_forward(c);
    int nonzero = 0;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const double a = std::abs(sc.values[g.index(i, j, 0)]);
            if (a > 1e-9) {
                ++nonzero;
                CHECK(i == 0);
                CHECK((j == 3 || j == 13));
                CHECK(std::abs(a - 0.5) < 1e-12);
            }
        }
    CHECK(nonzero == 2);

    // frequency magnitude layout
    CHECK(s.freq(0, 0) == 0.0);
    CHECK(std::abs(s.freq(0, 1) - 2.0 * pi / (16 * g.spacing)) < 1e-15);
    CHECK(std::abs(s.freq(0, 15) + 2.0 * pi / (16 * g.spacing)) < 1e-15);

    // conjugate symmetry of a real field's spectrum
    Rng rng(3);
    GridField rf(g);
    for (auto& v : rf.values) v = rng.uniform(-1.0, 1.0);
    const auto sr = fft_forward(rf);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const auto a = sr.values[g.index(i, j, 0)];
            const auto b = sr.values[g.index((16 - i) % 16, (16 - j) % 16, 0)];
            CHECK(std::abs(a - std::conj(b)) < 1e-13);
        }
}

TEST_CASE("sphere quadrature integrates polynomials exactly") {
    SECTION("n=2") {
        const auto q = sphere_quadrature(2, 64);
        double w = 0.0, c2 = 0.0, y1 = 0.0;
        for (std::size_t i = 0; i < q.directions.size(); ++i) {
            w += q.weights[i];
            c2 += q.weights[i] * q.directions[i][0] * q.directions[i][0];
            y1 += q.weights[i] * q.directions[i][1];
        }
        CHECK(std::abs(w - 1.0) < 1e-12);
        CHECK(std::abs(c2 - 0.5) < 1e-12); // mean of cos^2
        CHECK(std::abs(y1) < 1e-12);
    }
    SECTION("n=3") {
        const auto q = sphere_quadrature(3, 32);
        double w = 0.0, x2 = 0.0, x4 = 0.0;
        for (std::size_t i = 0; i < q.directions.size(); ++i) {
            w += q.weights[i];
            const double x = q.directions[i][0];
            x2 += q.weights[i] * x * x;
            x4 += q.weights[i] * x * x * x * x;
        }
        CHECK(std::abs(w - 1.0) < 1e-12);
        CHECK(std::abs(x2 - 1.0 / 3.0) < 1e-12);
        CHECK(std::abs(x4 - 1.0 / 5.0) < 1e-12); // mean of x^4 over S^2
        for (const auto& d : q.directions)
            CHECK(std::abs(std::hypot(d[0], d[1], d[2]) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(sphere_quadrature(2, 4), domain_error);
}

TEST_CASE("real harmonic basis is orthonormal under the quadrature") {
    for (int dim : {2, 3}) {
        const auto q = sphere_quadrature(dim, 48);
        struct Entry { int m, l; };
        std::vector<Entry> basis;
        for (int m = 0; m <= 6; ++m)
            for (int l = 1; l <= harmonic_count(dim, m); ++l) basis.push_back({m, l});
        for (std::size_t a = 0; a < basis.size(); ++a) {
            for (std::size_t b = a; b < basis.size(); ++b) {
                double ip = 0.0;
                for (std::size_t i = 0; i < q.directions.size(); ++i)
                    ip += q.weights[i] * harmonic_eval(dim, basis[a].m, basis[a].l, q.directions[i]) *
                          harmonic_eval(dim, basis[b].m, basis[b].l, q.directions[i]);
                const double expect = a == b ? 1.0 : 0.0;
                INFO("dim=" << dim << " (" << basis[a].m << "," << basis[a].l << ") vs ("
                            << basis[b].m << "," << basis[b].l << ")");
                CHECK(std::abs(ip - expect) < 1e-10);
            }
        }
    }
}

TEST_CASE("spherical_mean on simple fields") {
    GridGeometry g = centered_geometry(2, 64, 2.0);
    const auto quad = sphere_quadrature(2, 128);

    const GridField c = make_field(g, [](const Point&) { return 1.7; });
    CHECK(std::abs(spherical_mean(c, {0.0, 0.0, 0.0}, 0.8, quad) - 1.7) < 1e-12);
    CHECK(std::abs(spherical_mean(c, {0.4, -0.3, 0.0}, 1.1, quad) - 1.7) < 1e-12);

    // |y|^2 averaged over the sphere of radius t around the origin is t^2.
    const GridField q2 = make_field(g, [](const Point& p) { return p[0] * p[0] + p[1] * p[1]; });
    const double h = g.spacing;
    CHECK(std::abs(spherical_mean(q2, {0.0, 0.0, 0.0}, 1.0, quad) - 1.0) < 4.0 * h * h);

    CHECK_THROWS_AS(spherical_mean(c, {1.5, 0.0, 0.0}, 1.0, quad), domain_error);
}

TEST_CASE("radialize fixed points") {
    SECTION("radial input is a fixed point (n=2)") {
        GridGeometry g = centered_geometry(2, 96, 2.0);
        const GridField f = make_field(g, [](const Point& p) {
            const double r = std::hypot(p[0], p[1]);
            return std::exp(-r * r);
        });
        const auto prof = radialize(f, 48);
        for (int i = 0; i < prof.count; ++i) {
            const double r = prof.radius(i);
            CHECK(std::abs(prof.values[i] - std::exp(-r * r)) < 4.0 * g.spacing * g.spacing);
        }
    }
    SECTION("odd ridge averages to zero, quadratic ridge to r^2/3 (n=3)") {
        GridGeometry g = centered_geometry(3, 48, 1.5);
        const GridField lin = make_field(g, [](const Point& p) { return p[2]; });
        const auto p1 = radialize(lin, 24);
        for (double v : p1.values) CHECK(std::abs(v) < 1e-10);

        const GridField sq = make_field(g, [](const Point& p) { return p[2] * p[2]; });
        const auto p2 = radialize(sq, 24);
        for (int i = 0; i < p2.count; ++i) {
            const double r = p2.radius(i);
            CHECK(std::abs(p2.values[i] - r * r / 3.0) < 4.0 * g.spacing * g.spacing);
        }
    }
    SECTION("partial profiles mark out-of-grid radii invalid") {
        GridGeometry g = centered_geometry(2, 64, 1.0);
        const GridField f = make_field(g, [](const Point&) { return 1.0; });
        CHECK_THROWS_AS(radialize(f, 20, 2.0), domain_error);
        const auto prof = radialize(f, 20, 2.0, 0, /*allow_partial=*/true);
        CHECK(!prof.valid.empty());
        CHECK(prof.is_valid(0));
        CHECK(!prof.is_valid(prof.count - 1));
    }
}

TEST_CASE("harmonic_project isolates channels") {
    SECTION("radial field projects only onto m=0") {
        GridGeometry g = centered_geometry(2, 96, 2.0);
        const GridField f = make_field(g, [](const Point& p) {
            const double r = std::hypot(p[0], p[1]);
            return std::exp(-2.0 * r * r);
        });
        const auto p0 = harmonic_project(f, 0, 1, 32);
        const auto p2 = harmonic_project(f, 2, 1, 32);
        double m0 = 0.0, m2 = 0.0;
        for (int i = 0; i < 32; ++i) {
            m0 = std::max(m0, std::abs(p0.values[i]));
            m2 = std::max(m2, std::abs(p2.values[i]));
        }
        CHECK(m0 > 0.5);
        CHECK(m2 < 1e-6);
    }
    SECTION("f(x)=x1 lands in the m=1 cosine channel with profile r/sqrt(2)") {
        GridGeometry g = centered_geometry(2, 96, 2.0);
        const GridField f = make_field(g, [](const Point& p) { return p[0]; });
        const auto c1 = harmonic_project(f, 1, 1, 32);
        const auto s1 = harmonic_project(f, 1, 2, 32);
        for (int i = 0; i < 32; ++i) {
            const double r = c1.radius(i);
            CHECK(std::abs(c1.values[i] - r / std::sqrt(2.0)) < 1e-8);
            CHECK(std::abs(s1.values[i]) < 1e-10);
        }
    }
    SECTION("Bessel inequality per radius") {
        GridGeometry g = centered_geometry(2, 96, 2.0);
        const GridField f = make_field(g, [](const Point& p) {
            return std::exp(-p[0] * p[0] - 2.0 * p[1] * p[1]) + 0.3 * p[0] * p[1];
        });
        const int count = 24;
        std::vector<double> lhs(count, 0.0);
        for (int m = 0; m <= 4; ++m)
            for (int l = 1; l <= harmonic_count(2, m); ++l) {
                const auto prof = harmonic_project(f, m, l, count);
                for (int i = 0; i < count; ++i) lhs[i] += prof.values[i] * prof.values[i];
            }
        // angular L2 norm per radius via raw quadrature
        const auto quad = sphere_quadrature(2, 256);
        for (int i = 0; i < count; ++i) {
            const double r = 2.0 * 0.98 * i / (count - 1) * 0.0 + lhs[i] * 0.0 +
                             (i * (g.fit_radius()) / (count - 1));
            double l2 = 0.0;
            for (std::size_t qi = 0; qi < quad.directions.size(); ++qi) {
                const Point p{r * quad.directions[qi][0], r * quad.directions[qi][1], 0.0};
                const double v = interpolate(f, p);
                l2 += quad.weights[qi] * v * v;
            }
            CHECK(lhs[i] <= l2 + 1e-9);
        }
    }
    CHECK_THROWS_AS(harmonic_project(GridField(centered_geometry(2, 16, 1.0)), 1, 3, 16),
                    domain_error);
}

TEST_CASE("convolve_radial behaves like the continuum convolution") {
    GridGeometry g = centered_geometry(2, 128, 2.0);
    const double h = g.spacing;
    const GridField f = make_field(g, [](const Point& p) {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        return std::exp(-r2 / 0.18);
    });

    SECTION("normalized delta approximation acts as the identity") {
        // tent of radius 2h, normalized to unit mass in the plane
        const double a = 2.0 * h;
        const double mass = 2.0 * pi * (a * a / 2.0 - a * a / 3.0); // int (1 - r/a) r dr dtheta
        const auto kernel = make_radial_profile(a, 64, [&](double r) {
            return (1.0 - r / a) / mass;
        });
        const auto out = convolve_radial(f, kernel, a);
        double err = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            err = std::max(err, std::abs(out.values[i] - f.values[i]));
        CHECK(err < 30.0 * h * h); // O(h^2) with the kernel's own width constant
    }

    SECTION("radial fields stay radial") {
        const auto kernel = make_radial_profile(0.5, 64, [](double r) {
            return std::exp(-r * r / 0.02);
        });
        const auto out = convolve_radial(f, kernel, 0.5);
        const auto prof = radialize(out, 32);
        const auto rebuilt = radial_field(out.geom, prof, true);
        double err = 0.0, scale = out.max_abs();
        for (int i = 0; i < g.shape[0]; ++i)
            for (int j = 0; j < g.shape[1]; ++j) {
                const Point p = g.point(i, j, 0);
                if (std::hypot(p[0], p[1]) < prof.r_max * 0.95)
                    err = std::max(err, std::abs(out.at(i, j) - rebuilt.at(i, j)));
            }
        CHECK(err / scale < 2e-3);
    }
}

TEST_CASE("radialization commutes with radial convolution") {
    // (u * v)^# == u^# * v within twice the interpolation error budget
    GridGeometry g = centered_geometry(2, 128, 2.0);
    const GridField u = make_field(g, [](const Point& p) {
        const double dx = p[0] - 0.35, dy = p[1] + 0.2;
        return std::exp(-(dx * dx + dy * dy) / 0.08);
    });
    const auto v = make_radial_profile(0.4, 64, [](double r) {
        return std::exp(-r * r / 0.015);
    });

    const auto lhs = radialize(convolve_radial(u, v, 0.4), 40);

    const auto u_sharp = radialize(u, 40);
    const auto u_field = radial_field(g, u_sharp, true);
    const auto rhs = radialize(convolve_radial(u_field, v, 0.4), 40);

    double scale = 0.0;
    for (double x : lhs.values) scale = std::max(scale, std::abs(x));
    for (int i = 0; i < lhs.count; ++i) {
        if (lhs.radius(i) > 1.5) continue; // outer radii probe the u^# resampling tail
        CHECK(std::abs(lhs.values[i] - rhs.values[i]) < 2.0 * 8.0 * g.spacing * g.spacing * scale);
    }
}

TEST_CASE("radial convolution preserves the harmonic sparsity pattern") {
    // f = g(r) Y^2_1: after convolving with a radial kernel, channels absent
    // from the input must stay at the numerical floor (the floor itself is
    // set by the multilinear sphere sampling, so it is measured, not assumed).
    GridGeometry g = centered_geometry(2, 128, 2.0);
    const GridField f = make_field(g, [](const Point& p) {
        const double r = std::hypot(p[0], p[1]);
        const double th = std::atan2(p[1], p[0]);
        return std::exp(-r * r / 0.18) * std::sqrt(2.0) * std::cos(2.0 * th);
    });
    const auto kernel = make_radial_profile(0.4, 64, [](double r) {
        return std::exp(-r * r / 0.02);
    });
    const auto h = convolve_radial(f, kernel, 0.4);

    const auto channel_env = [&](const GridField& u, int m, int l) {
        const auto prof = harmonic_project(u, m, l, 24);
        double s = 0.0;
        for (double v : prof.values) s = std::max(s, std::abs(v));
        return s;
    };

    const double sig_f = channel_env(f, 2, 1);
    const double sig_h = channel_env(h, 2, 1);
    CHECK(sig_f > 0.5);
    CHECK(sig_h > 0.0);

    double floor_f = 0.0, floor_h = 0.0;
    for (int m = 0; m <= 4; ++m)
        for (int l = 1; l <= harmonic_count(2, m); ++l) {
            if (m == 2 && l == 1) continue;
            floor_f = std::max(floor_f, channel_env(f, m, l) / sig_f);
            floor_h = std::max(floor_h, channel_env(h, m, l) / sig_h);
        }
    // no new channel may rise above the measured input floor (plus a strict
    // absolute allowance for the convolution arithmetic itself)
    CHECK(floor_h <= 2.0 * floor_f + 1e-8);
}

TEST_CASE("profile math building blocks") {
    SECTION("cumulative integral is O(h^4) on smooth data") {
        const int n = 101;
        const double h = 1.0 / (n - 1);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = std::sin(3.0 * i * h);
        const auto I = profile_math::cumulative_integral(y, h);
        for (int i = 0; i < n; ++i) {
            const double exact = (1.0 - std::cos(3.0 * i * h)) / 3.0;
            CHECK(std::abs(I[i] - exact) < 1e-8);
        }
        profile_math::Primitive P(y, h);
        CHECK(std::abs(P(0.437) - (1.0 - std::cos(3.0 * 0.437)) / 3.0) < 1e-8);
    }
    SECTION("derivative is O(h^4)") {
        const int n = 101;
        const double h = 1.0 / (n - 1);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = std::exp(i * h);
        const auto d = profile_math::derivative(y, h);
        for (int i = 0; i < n; ++i) CHECK(std::abs(d[i] - y[i]) < 1e-7);
    }
}

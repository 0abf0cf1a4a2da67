#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sphermean/specfun.hpp"

using namespace sphermean;
using namespace sphermean::specfun;

namespace {

// Independent oracle: plain long-double power series for J_0 only, kept
// deliberately separate from the library evaluator (no shared code paths).
long double oracle_j0(long double x) {
    long double term = 1.0L, sum = 1.0L;
    const long double q = x * x * 0.25L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-30L) break;
    }
    return sum;
}

// Second independent oracle, good at any desk-scale x: the integral
// representation J_0(x) = (1/2pi) int_0^{2pi} cos(x sin t) dt evaluated by
// the periodic trapezoid rule, whose aliasing error is 2 J_{2N}(x) and thus
// vanishes utterly for 2N >> x. (The power series above loses digits to
// cancellation past x ~ 35.)
long double oracle_j0_quad(long double x) {
    constexpr int N = 512;
    long double sum = 0.0L;
    for (int k = 0; k < N; ++k) {
        const long double t = (2.0L * static_cast<long double>(sphermean::pi) * k) / N;
        sum += std::cos(x * std::sin(t));
    }
    return sum / N;
}

// Bisection on the oracle: first positive zero of J_0.
double oracle_j0_first_zero() {
    long double lo = 2.0L, hi = 3.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (oracle_j0(lo) * oracle_j0(mid) <= 0.0L) hi = mid;
        else lo = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

double j_half_closed(double x) { return std::sqrt(2.0 / (pi * x)) * std::sin(x); }

double j_three_half_closed(double x) {
    return std::sqrt(2.0 / (pi * x)) * (std::sin(x) / x - std::cos(x));
}

} // namespace

TEST_CASE("bessel_j matches the series oracle and closed forms") {
    CHECK(bessel_j(BesselOrder(0.0), 0.0) == 1.0);

    const double z0 = oracle_j0_first_zero();
    CHECK(std::abs(z0 - 2.404825557695773) < 1e-13); // frozen from the oracle
    CHECK(std::abs(bessel_j(BesselOrder(0.0), z0)) < 1e-12);

    // J_0 against the oracles across both evaluation regimes. The series
    // oracle keeps 1e-13 only below x ~ 18 (cancellation); the quadrature
    // oracle is good everywhere.
    for (double x = 0.05; x <= 18.0; x += 0.37) {
        CHECK(std::abs(bessel_j(BesselOrder(0.0), x) - static_cast<double>(oracle_j0(x))) < 1e-12);
    }
    for (double x = 0.05; x <= 50.0; x += 0.37) {
        CHECK(std::abs(bessel_j(BesselOrder(0.0), x) - static_cast<double>(oracle_j0_quad(x))) <
              1e-12);
    }

    // Half-integer closed forms on (0, 50].
    for (double x = 0.05; x <= 50.0; x += 0.11) {
        CHECK(std::abs(bessel_j(BesselOrder(0.5), x) - j_half_closed(x)) < 1e-12);
        CHECK(std::abs(bessel_j(BesselOrder(1.5), x) - j_three_half_closed(x)) < 1e-10);
    }
}

TEST_CASE("bessel_j rejects invalid input") {
    CHECK_THROWS_AS(bessel_j(BesselOrder(0.0), -1.0), domain_error);
    CHECK_THROWS_AS(bessel_j(BesselOrder(0.0), std::nan("")), domain_error);
    CHECK_THROWS_AS(BesselOrder(-0.5), domain_error);
}

TEST_CASE("evaluation regimes agree across the series cut") {
    // The series/asymptotic handover must be seamless; sample both sides.
    for (double nu : {0.0, 0.5, 1.0, 1.5, 3.0, 5.5, 8.0, 10.0}) {
        const double cut = std::max(12.0, 2.0 * nu);
        for (double d : {-0.5, -0.1, 0.1, 0.5}) {
            const double x = cut + d;
            const double lo = static_cast<double>(specfun::detail::bessel_series(nu, x));
            const double hi = bessel_j(BesselOrder(nu), x);
            CHECK(std::abs(lo - hi) < 1e-12);
        }
    }
}

TEST_CASE("normalized_j basics") {
    for (double p : {0.0, 0.5, 1.0, 2.5, 7.0}) {
        CHECK(normalized_j(BesselOrder(p), 0.0) == 1.0);
    }
    for (double lam = 0.01; lam <= 50.0; lam += 0.13) {
        CHECK(std::abs(normalized_j(BesselOrder(0.5), lam) - std::sin(lam) / lam) < 1e-12);
    }
    CHECK(std::abs(normalized_j(BesselOrder(0.5), pi)) < 1e-12);
}

TEST_CASE("normalized_j_prime identities") {
    CHECK(normalized_j_prime(BesselOrder(0.0), 0.0) == 0.0);
    CHECK(normalized_j_prime(BesselOrder(2.5), 0.0) == 0.0);
    // d/dlam [sin(lam)/lam] at pi is -1/pi.
    CHECK(std::abs(normalized_j_prime(BesselOrder(0.5), pi) + 1.0 / pi) < 1e-10);

    // Central differences converge at O(h^2) to the analytic derivative.
    const BesselOrder p(1.0);
    const double lam = 3.3;
    const double exact = normalized_j_prime(p, lam);
    double prev_err = -1.0;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        const double fd = (normalized_j(p, lam + h) - normalized_j(p, lam - h)) / (2.0 * h);
        const double err = std::abs(fd - exact);
        if (prev_err >= 0.0) CHECK(err < prev_err / 2.5 + 1e-13);
        prev_err = err;
    }
}

TEST_CASE("bessel_zeros finds the tabulated zeros") {
    const double tol = 1e-12;

    SECTION("nu = 1/2: zeros are k pi") {
        const auto table = bessel_zeros(BesselOrder(0.5), 10, tol);
        REQUIRE(table.zeros.size() == 10);
        for (int k = 0; k < 10; ++k) {
            CHECK(std::abs(table.zeros[k] - (k + 1) * pi) < 1e-10);
        }
    }

    SECTION("nu = 0: first zero matches the bisection oracle") {
        const auto table = bessel_zeros(BesselOrder(0.0), 1, tol);
        CHECK(std::abs(table.zeros[0] - oracle_j0_first_zero()) < 1e-10);
    }

    SECTION("strictly increasing, sign change across the bracket, gaps approach pi") {
        for (double nu : {0.0, 0.5, 2.0, 3.7, 8.5}) {
            const auto table = bessel_zeros(BesselOrder(nu), 12, tol);
            for (size_t k = 0; k + 1 < table.zeros.size(); ++k) {
                CHECK(table.zeros[k] < table.zeros[k + 1]);
            }
            for (double z : table.zeros) {
                const double fa = bessel_j(BesselOrder(nu), z - tol);
                const double fb = bessel_j(BesselOrder(nu), z + tol);
                CHECK(fa * fb <= 0.0);
            }
            const auto& zs = table.zeros;
            const double last_gap = zs[zs.size() - 1] - zs[zs.size() - 2];
            CHECK(std::abs(last_gap - pi) < 0.06);
        }
    }

    SECTION("zeros of normalized_j are simple") {
        for (double p : {0.0, 0.5, 1.0, 3.5, 8.0, 8.5}) {
            const auto table = bessel_zeros(BesselOrder(p), 6, tol);
            for (double z : table.zeros) {
                CHECK(std::abs(normalized_j(BesselOrder(p), z)) < 1e-9);
                CHECK(std::abs(normalized_j_prime(BesselOrder(p), z)) > 1e-6);
            }
        }
    }

    CHECK_THROWS_AS(bessel_zeros(BesselOrder(0.0), 0), domain_error);
    CHECK_THROWS_AS(bessel_zeros(BesselOrder(0.0), 3, -1.0), domain_error);
}

TEST_CASE("lower_bound_check classifies the exclusion geometry") {
    const BesselOrder half(0.5);
    ExclusionRegion region{half};
    region.origin_disk_radius = 1.0;

    SECTION("real zeros lie inside the disks") {
        // zeros of J_{1/2} are k pi; centers are pi(k + 1).
        for (int k = 1; k <= 5; ++k) {
            const std::complex<double> z(k * pi, 0.0);
            CHECK(lower_bound_check(half, z, 1e-3, region) == LowerBoundStatus::in_exclusion);
        }
        // and for nu = 0 with a small origin disk, the first zeros sit close
        // to the McMahon centers pi(k + 3/4).
        ExclusionRegion region0{BesselOrder(0.0)};
        region0.origin_disk_radius = 1.0;
        const auto z0 = bessel_zeros(BesselOrder(0.0), 4);
        for (double z : z0.zeros) {
            CHECK(lower_bound_check(BesselOrder(0.0), {z, 0.0}, 1e-3, region0) ==
                  LowerBoundStatus::in_exclusion);
        }
    }

    SECTION("large imaginary argument: exponential growth wins") {
        ExclusionRegion region0{BesselOrder(0.0)};
        const std::complex<double> z(0.0, 25.0);
        CHECK(lower_bound_check(BesselOrder(0.0), z, 1e-2, region0) == LowerBoundStatus::holds);
        // |J_0(iy)| = I_0(y) ~ e^y / sqrt(2 pi y): an oversized C must fail.
        CHECK(lower_bound_check(BesselOrder(0.0), z, 10.0, region0) == LowerBoundStatus::fails);
    }

    SECTION("real midpoints between disks hold with calibrated C") {
        // Calibrate C as half the empirical minimum of |J_nu| sqrt(x) at the
        // midpoints, then verify the bound holds there.
        double cmin = 1e300;
        std::vector<double> mids;
        for (int k = 0; k < 12; ++k) {
            const double mid = 0.5 * (region.center(k) + region.center(k + 1));
            mids.push_back(mid);
            cmin = std::min(cmin, std::abs(bessel_j(half, mid)) * std::sqrt(mid));
        }
        const double C = 0.5 * cmin;
        for (double mid : mids) {
            CHECK(lower_bound_check(half, {mid, 0.0}, C, region) == LowerBoundStatus::holds);
        }
    }

    SECTION("disk scan handles large center offsets") {
        // (2 nu + 3)/4 = 5 for nu = 8.5: the first disks sit far above
        // floor(re/pi), which the scan window must account for
        ExclusionRegion high{BesselOrder(8.5)};
        high.origin_disk_radius = 1.0;
        for (int k = 0; k < 6; ++k) {
            const std::complex<double> on_center(high.center(k), 0.0);
            CHECK(high.contains(on_center));
            const std::complex<double> midway(0.5 * (high.center(k) + high.center(k + 1)), 0.0);
            CHECK(!high.contains(midway));
        }
    }

    SECTION("complex evaluator agrees with the real one on the axis") {
        for (double x = 0.5; x <= 55.0; x += 1.7) {
            const auto v = bessel_j_complex(BesselOrder(1.0), {x, 0.0});
            CHECK(std::abs(v.imag()) < 1e-12);
            CHECK(std::abs(v.real() - bessel_j(BesselOrder(1.0), x)) < 1e-11);
        }
        // symmetry reductions: |J(-z)| = |J(conj z)| = |J(z)|
        const std::complex<double> z(7.3, 2.1);
        const double m = std::abs(bessel_j_complex(half, z));
        CHECK(std::abs(std::abs(bessel_j_complex(half, -z)) - m) < 1e-11);
        CHECK(std::abs(std::abs(bessel_j_complex(half, std::conj(z))) - m) < 1e-11);
    }

    CHECK_THROWS_AS(lower_bound_check(half, {0.0, 0.0}, 1.0, region), domain_error);
}

TEST_CASE("asymptotic_envelope stays bounded across octaves") {
    // n=3, m=0 is |sin t / t| t (plus the derivative branch): close to 1.
    CHECK(asymptotic_envelope(3, 0, 4.0) < 1.2);
    CHECK(asymptotic_envelope(3, 0, 64.0) < 1.2);

    for (int n : {2, 3}) {
        for (int m = 0; m <= 8; ++m) {
            double lo = 1e300, hi = 0.0;
            for (double T = 4.0; T <= 256.0; T *= 2.0) {
                const double e = asymptotic_envelope(n, m, T);
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
            INFO("n=" << n << " m=" << m);
            CHECK(hi / lo < 4.0);
        }
    }

    // n=2, m=0: T=1 and T=64 within an order of magnitude.
    const double e1 = asymptotic_envelope(2, 0, 1.0);
    const double e64 = asymptotic_envelope(2, 0, 64.0);
    CHECK(e1 / e64 < 10.0);
    CHECK(e64 / e1 < 10.0);

    CHECK_THROWS_AS(asymptotic_envelope(4, 0, 4.0), domain_error);
    CHECK_THROWS_AS(asymptotic_envelope(2, 0, 0.5), domain_error);
}

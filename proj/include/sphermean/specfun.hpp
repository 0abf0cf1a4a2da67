#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "sphermean/common.hpp"

namespace sphermean::specfun {

/// Order of a Bessel function of the first kind. Orders in this project are
/// nonnegative reals; the transform path only ever asks for (n-2)/2 and
/// n/2+m-1, but the evaluator accepts any finite nu >= 0 (accuracy contract
/// holds for nu <= 10, x <= 50).
struct BesselOrder {
    double nu = 0.0;

    explicit BesselOrder(double nu_) : nu(nu_) {
        require(std::isfinite(nu) && nu >= 0.0, "BesselOrder: nu must be finite and >= 0");
    }
};

namespace detail {

/// Argument below which the power series is used. Above it the Hankel
/// expansion seeded at the fractional order plus upward recurrence takes
/// over; the two regimes overlap safely for the orders in play.
inline double series_cut(double nu) { return std::max(12.0, 2.0 * nu); }

/// Power series for J_nu, accumulated in long double. The worst-case
/// alternating-term growth at the cut is ~1e6, which long double absorbs
/// while keeping the absolute error comfortably under 1e-12.
inline long double bessel_series(double nu, long double x) {
    if (x == 0.0L) return nu == 0.0 ? 1.0L : 0.0L;
    const long double half = x * 0.5L;
    long double term = std::pow(half, static_cast<long double>(nu)) /
                       std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = term;
    const long double q = half * half;
    for (int k = 1; k < 500; ++k) {
        term *= -q / (static_cast<long double>(k) * (static_cast<long double>(nu) + k));
        sum += term;
        if (k > 4 && std::fabs(term) < 1e-26L * (std::fabs(sum) + 1e-300L)) break;
    }
    return sum;
}

template <typename Complex>
inline Complex bessel_series_c(double nu, Complex z) {
    if (z == Complex(0)) return nu == 0.0 ? Complex(1) : Complex(0);
    const Complex half = z * static_cast<typename Complex::value_type>(0.5);
    Complex term = std::pow(half, static_cast<typename Complex::value_type>(nu)) /
                   std::tgamma(static_cast<typename Complex::value_type>(nu) + 1);
    Complex sum = term;
    const Complex q = half * half;
    for (int k = 1; k < 600; ++k) {
        term *= -q / static_cast<typename Complex::value_type>(k * (nu + k));
        sum += term;
        if (k > 4 && std::abs(term) < 1e-26L * (std::abs(sum) + 1e-300L)) break;
    }
    return sum;
}

/// Hankel asymptotic expansion, truncated at the smallest term. Intended for
/// small orders (the recurrence seeds, mu < 2.5) and x above the series cut,
/// where the optimal truncation error is far below 1e-15.
inline double bessel_asymptotic(double mu, double x) {
    const long double mu4 = 4.0L * mu * mu;
    long double P = 1.0L, Q = 0.0L;
    long double c = 1.0L;
    long double prev = 1e300L;
    for (int j = 1; j <= 60; ++j) {
        const long double odd = 2.0L * j - 1.0L;
        c *= (mu4 - odd * odd) / (8.0L * j * static_cast<long double>(x));
        if (std::fabs(c) >= prev) break; // smallest term reached
        prev = std::fabs(c);
        const int r = j % 4;
        if (r == 1) Q += c;
        else if (r == 2) P -= c;
        else if (r == 3) Q -= c;
        else P += c;
        if (std::fabs(c) < 1e-22L) break;
    }
    const long double chi = static_cast<long double>(x) -
                            (0.5L * mu + 0.25L) * static_cast<long double>(pi);
    const long double amp = std::sqrt(2.0L / (static_cast<long double>(pi) * x));
    return static_cast<double>(amp * (std::cos(chi) * P - std::sin(chi) * Q));
}

template <typename Complex>
inline Complex bessel_asymptotic_c(double mu, Complex z) {
    using Real = typename Complex::value_type;
    const Real mu4 = static_cast<Real>(4.0 * mu * mu);
    Complex P(1), Q(0);
    Complex c(1);
    Real prev = static_cast<Real>(1e300);
    for (int j = 1; j <= 60; ++j) {
        const Real odd = static_cast<Real>(2 * j - 1);
        c *= (mu4 - odd * odd) / (static_cast<Real>(8 * j) * z);
        if (std::abs(c) >= prev) break;
        prev = std::abs(c);
        const int r = j % 4;
        if (r == 1) Q += c;
        else if (r == 2) P -= c;
        else if (r == 3) Q -= c;
        else P += c;
        if (std::abs(c) < static_cast<Real>(1e-22)) break;
    }
    const Complex chi = z - Complex((static_cast<Real>(0.5) * mu + static_cast<Real>(0.25)) *
                                    static_cast<Real>(pi));
    const Complex amp = std::sqrt(Complex(2) / (Complex(static_cast<Real>(pi)) * z));
    return amp * (std::cos(chi) * P - std::sin(chi) * Q);
}

inline double bessel_j_impl(double nu, double x) {
    if (x <= series_cut(nu)) return static_cast<double>(bessel_series(nu, x));
    const double frac = nu - std::floor(nu);
    const int steps = static_cast<int>(std::llround(nu - frac));
    double jm1 = bessel_asymptotic(frac, x);
    if (steps == 0) return jm1;
    double j = bessel_asymptotic(frac + 1.0, x);
    double ord = frac + 1.0;
    for (int s = 1; s < steps; ++s) {
        const double jp1 = (2.0 * ord / x) * j - jm1;
        jm1 = j;
        j = jp1;
        ord += 1.0;
    }
    return j;
}

} // namespace detail

/// J_nu(x) for x >= 0. Power series below max(12, 2 nu); Hankel expansion at
/// the fractional order plus stable upward recurrence beyond. Absolute error
/// <= 1e-12 for x <= 50, nu <= 10.
inline double bessel_j(BesselOrder order, double x) {
    require(std::isfinite(x) && x >= 0.0, "bessel_j: x must be finite and >= 0");
    return detail::bessel_j_impl(order.nu, x);
}

/// J_nu(z) on the complex plane, |z| <= 60 (desk-scale only; used by the
/// exclusion-region check). Series at small |z|, complex Hankel expansion
/// plus recurrence beyond. |J_nu(-z)| = |J_nu(conj z)| = |J_nu(z)| is used
/// to reduce to Re z >= 0, Im z >= 0 where the expansion is valid.
inline std::complex<double> bessel_j_complex(BesselOrder order, std::complex<double> z) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()),
            "bessel_j_complex: non-finite argument");
    require(std::abs(z) <= 60.0, "bessel_j_complex: |z| <= 60 supported");
    using C = std::complex<long double>;
    bool conj = false, neg = false;
    if (z.real() < 0.0) { z = -z; neg = true; }
    if (z.imag() < 0.0) { z = std::conj(z); conj = true; }
    const C zl(z.real(), z.imag());
    C v;
    if (std::abs(z) <= detail::series_cut(order.nu)) {
        v = detail::bessel_series_c(order.nu, zl);
    } else {
        const double frac = order.nu - std::floor(order.nu);
        const int steps = static_cast<int>(std::llround(order.nu - frac));
        C jm1 = detail::bessel_asymptotic_c(frac, zl);
        if (steps == 0) {
            v = jm1;
        } else {
            C j = detail::bessel_asymptotic_c(frac + 1.0, zl);
            long double ord = frac + 1.0;
            for (int s = 1; s < steps; ++s) {
                const C jp1 = (2.0L * ord / zl) * j - jm1;
                jm1 = j;
                j = jp1;
                ord += 1.0L;
            }
            v = j;
        }
    }
    if (conj) v = std::conj(v);
    if (neg) {
        // J_nu(e^{i pi} z) = e^{i nu pi} J_nu(z)
        const C phase = std::exp(C(0, 1) * static_cast<long double>(order.nu * pi));
        v = phase * v;
    }
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

/// Normalized (spherical) Bessel function j_p(lam) = 2^p Gamma(p+1) J_p(lam) / lam^p,
/// with j_p(0) = 1. This is the Fourier multiplier of the normalized sphere
/// measure; it is an even entire function of lam.
inline double normalized_j(BesselOrder p, double lam) {
    require(std::isfinite(lam) && lam >= 0.0, "normalized_j: lam must be finite and >= 0");
    if (lam <= detail::series_cut(p.nu)) {
        // series in lam^2: sum_k (-lam^2/4)^k / (k! (p+1)_k)
        const long double q = static_cast<long double>(lam) * lam * 0.25L;
        long double term = 1.0L, sum = 1.0L;
        for (int k = 1; k < 500; ++k) {
            term *= -q / (static_cast<long double>(k) * (static_cast<long double>(p.nu) + k));
            sum += term;
            if (k > 4 && std::fabs(term) < 1e-26L * (std::fabs(sum) + 1e-300L)) break;
        }
        return static_cast<double>(sum);
    }
    const double scale = std::pow(2.0, p.nu) * std::tgamma(p.nu + 1.0);
    return scale * detail::bessel_j_impl(p.nu, lam) / std::pow(lam, p.nu);
}

/// d/dlam of normalized_j, via the identity j_p'(lam) = -lam/(2(p+1)) j_{p+1}(lam).
/// Vanishes at lam = 0 and is nonzero at the (simple) zeros of j_p.
inline double normalized_j_prime(BesselOrder p, double lam) {
    require(std::isfinite(lam) && lam >= 0.0, "normalized_j_prime: lam must be finite and >= 0");
    return -lam / (2.0 * (p.nu + 1.0)) * normalized_j(BesselOrder(p.nu + 1.0), lam);
}

/// Ascending positive zeros of J_nu, each refined to absolute accuracy tol.
/// Zeros of the normalized j_p coincide with these for p > 0 (the lam^-p
/// factor never vanishes), and with them for p = 0 trivially.
struct BesselZeroTable {
    BesselOrder order;
    std::vector<double> zeros;
    double tol = 0.0;
};

/// First `count` positive zeros of J_nu. Scan with stride pi/4 starting just
/// above nu + 1 (below the first zero for every nu >= 0; zero gaps exceed
/// the stride at desk orders), bisection to tol, then Newton polish kept
/// inside the bracket.
inline BesselZeroTable bessel_zeros(BesselOrder order, int count, double tol = 1e-12) {
    require(count >= 1, "bessel_zeros: count must be >= 1");
    require(tol > 0.0, "bessel_zeros: tol must be > 0");
    const double nu = order.nu;
    const auto f = [nu](double x) { return detail::bessel_j_impl(nu, x); };
    // J_nu'(x) = (nu/x) J_nu(x) - J_{nu+1}(x)
    const auto fp = [nu, &f](double x) {
        return (nu / x) * f(x) - detail::bessel_j_impl(nu + 1.0, x);
    };

    BesselZeroTable table{order, {}, tol};
    table.zeros.reserve(count);
    const double stride = pi / 4.0;
    double a = nu + 1.0;
    double fa = f(a);
    int guard = 0;
    while (static_cast<int>(table.zeros.size()) < count) {
        require(++guard < 100000, "bessel_zeros: bracketing scan failed (implementation bug)");
        double b = a + stride;
        double fb = f(b);
        if (fa == 0.0) { // landed exactly on a zero
            table.zeros.push_back(a);
            a = b;
            fa = fb;
            continue;
        }
        if (fa * fb < 0.0) {
            double lo = a, hi = b, flo = fa;
            while (hi - lo > 0.25 * tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) { lo = hi = mid; break; }
                if (flo * fm < 0.0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            double z = 0.5 * (lo + hi);
            for (int it = 0; it < 2; ++it) {
                const double d = fp(z);
                if (d == 0.0) break;
                const double step = f(z) / d;
                const double cand = z - step;
                if (cand > a && cand < b) z = cand;
            }
            table.zeros.push_back(z);
        }
        a = b;
        fa = fb;
    }
    return table;
}

/// The complex region excluded by the Bessel lower bound: a disk S_0 at the
/// origin (radius is a configuration constant; the source asserts existence
/// only) and disks of radius pi/6 centered at pi(k + (2 nu + 3)/4), k >= 0.
struct ExclusionRegion {
    BesselOrder order;
    double disk_radius = pi / 6.0;
    double origin_disk_radius = 1.0;

    double center(int k) const { return pi * (k + (2.0 * order.nu + 3.0) / 4.0); }

    bool contains(std::complex<double> z) const {
        const double az = std::abs(z);
        if (az <= origin_disk_radius) return true;
        // centers lie on the positive real axis; the modulus of J_nu is
        // symmetric under z -> -z and z -> conj z, so test against |Re z|.
        const double re = std::abs(z.real());
        const double im = z.imag();
        const double offset = (2.0 * order.nu + 3.0) / 4.0;
        const int k0 = std::max(0, static_cast<int>(std::floor(re / pi - offset)) - 1);
        for (int k = k0; k <= k0 + 3; ++k) {
            if (std::hypot(re - center(k), im) <= disk_radius) return true;
        }
        return false;
    }
};

enum class LowerBoundStatus { in_exclusion, holds, fails };

/// Checks |J_nu(z)| >= C e^{|Im z|} / sqrt(|z|) outside the exclusion disks.
/// C is caller-supplied; a workable calibration is half the empirical
/// minimum of |J_nu(x)| sqrt(x) over a real-axis sweep between disks.
inline LowerBoundStatus lower_bound_check(BesselOrder order, std::complex<double> z, double C,
                                          const ExclusionRegion& region) {
    require(z != std::complex<double>(0.0, 0.0), "lower_bound_check: z must be nonzero");
    require(C > 0.0, "lower_bound_check: C must be > 0");
    if (region.contains(z)) return LowerBoundStatus::in_exclusion;
    const double lhs = std::abs(bessel_j_complex(order, z));
    const double rhs = C * std::exp(std::abs(z.imag())) / std::sqrt(std::abs(z));
    return lhs >= rhs ? LowerBoundStatus::holds : LowerBoundStatus::fails;
}

/// sup over a sampled grid of t in [T, 2T] of
///   max(|j_{n/2+m-1}(t)|, |j'_{n/2+m-1}(t)|) t^{(n+2m-1)/2}.
/// Bounded uniformly in T; callers assert boundedness across a T sweep.
inline double asymptotic_envelope(int n, int m, double T) {
    require(n == 2 || n == 3, "asymptotic_envelope: n must be 2 or 3");
    require(m >= 0, "asymptotic_envelope: m must be >= 0");
    require(std::isfinite(T) && T >= 1.0, "asymptotic_envelope: T must be >= 1");
    const BesselOrder p(0.5 * n + m - 1.0);
    const double expo = 0.5 * (n + 2 * m - 1);
    const int samples = std::max(513, static_cast<int>(std::ceil(16.0 * T / pi)));
    double env = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = T + (T * i) / (samples - 1);
        const double v = std::max(std::abs(normalized_j(p, t)), std::abs(normalized_j_prime(p, t)));
        env = std::max(env, v * std::pow(t, expo));
    }
    return env;
}

} // namespace sphermean::specfun

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sphermean/common.hpp"

namespace sphermean::field {

/// Values of a radial function on the uniform radius grid r_i = i r_max/(count-1).
/// `valid`, when non-empty, marks radii whose defining spheres stayed inside
/// the source grid; invalid entries hold 0.
struct RadialProfile {
    double r_max = 1.0;
    int count = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> valid; // empty means "all valid"

    double radius(int i) const { return r_max * i / (count - 1); }
    double step() const { return r_max / (count - 1); }
    bool is_valid(int i) const { return valid.empty() || valid[static_cast<std::size_t>(i)]; }

    void validate() const {
        require(count >= 16 && static_cast<int>(values.size()) == count,
                "RadialProfile: count must be >= 16 and match values");
        require(r_max > 0.0 && std::isfinite(r_max), "RadialProfile: r_max must be > 0");
        for (double v : values) require(std::isfinite(v), "RadialProfile: non-finite value");
    }
};

/// Even profile g on p_i = i p_max/(count-1); the implicit extension is
/// g(-p) = g(p). The Abel pair and the ridge machinery consume these.
struct EvenProfile {
    double p_max = 1.0;
    int count = 0;
    std::vector<double> values;

    double p(int i) const { return p_max * i / (count - 1); }
    double step() const { return p_max / (count - 1); }

    void validate() const {
        require(count >= 32 && static_cast<int>(values.size()) == count,
                "EvenProfile: count must be >= 32 and match values");
        require(p_max > 0.0 && std::isfinite(p_max), "EvenProfile: p_max must be > 0");
        for (double v : values) require(std::isfinite(v), "EvenProfile: non-finite value");
    }
};

/// A profile with declared support offset [p_lo, p_hi]; used by the support
/// propagation checks where functions live on an interval away from zero.
struct OffsetProfile {
    double p_lo = 0.0;
    double p_hi = 1.0;
    int count = 0;
    std::vector<double> values;

    double p(int i) const { return p_lo + (p_hi - p_lo) * i / (count - 1); }
    double step() const { return (p_hi - p_lo) / (count - 1); }
};

namespace profile_math {

/// Cubic (4-point Lagrange) interpolation of uniformly sampled values at the
/// fractional index t; falls back to the one-sided stencil near the ends.
inline double eval_cubic(const std::vector<double>& y, double t) {
    const int n = static_cast<int>(y.size());
    if (n == 1) return y[0];
    if (t <= 0.0) return y[0];
    if (t >= n - 1) return y[n - 1];
    int j = static_cast<int>(std::floor(t));
    j = std::clamp(j, 0, n - 2);
    int s = std::clamp(j - 1, 0, n - 4); // stencil start
    const double u = t - s;
    double v = 0.0;
    for (int m = 0; m < 4; ++m) {
        double L = 1.0;
        for (int q = 0; q < 4; ++q)
            if (q != m) L *= (u - q) / (m - q);
        v += y[s + m] * L;
    }
    return v;
}

/// Prefix integrals I_j = int_0^{x_j} y dx on a uniform grid of step h,
/// O(h^4) via per-interval cubic segments (the 13/24 rule inside, one-sided
/// cubic at the two boundary intervals).
inline std::vector<double> cumulative_integral(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size());
    require(n >= 4, "cumulative_integral: need at least 4 samples");
    std::vector<double> I(n, 0.0);
    for (int j = 0; j + 1 < n; ++j) {
        double seg;
        if (j == 0)
            seg = h * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3]) / 24.0;
        else if (j == n - 2)
            seg = h * (9.0 * y[n - 1] + 19.0 * y[n - 2] - 5.0 * y[n - 3] + y[n - 4]) / 24.0;
        else
            seg = h * (-y[j - 1] + 13.0 * y[j] + 13.0 * y[j + 1] - y[j + 2]) / 24.0;
        I[j + 1] = I[j] + seg;
    }
    return I;
}

/// Integral of the local cubic from x_j to x_j + u*h (0 <= u <= 1), using the
/// same stencils as cumulative_integral. Combined with the prefix table this
/// evaluates int_0^x y for arbitrary x at O(h^4).
inline double partial_segment_integral(const std::vector<double>& y, double h, int j, double u) {
    const int n = static_cast<int>(y.size());
    const int s = std::clamp(j - 1, 0, n - 4);
    const double a = j - s; // offset of segment start inside the stencil
    // integrate Lagrange basis polynomials over [a, a+u]
    double total = 0.0;
    for (int m = 0; m < 4; ++m) {
        // cubic basis L_m(t) = prod_{q != m} (t - q)/(m - q); integrate numerically
        // exactly via 2-point Gauss on the interval (exact for cubics needs 2 nodes)
        const double g1 = a + u * 0.5 * (1.0 - 1.0 / std::sqrt(3.0));
        const double g2 = a + u * 0.5 * (1.0 + 1.0 / std::sqrt(3.0));
        auto L = [m](double t) {
            double r = 1.0;
            for (int q = 0; q < 4; ++q)
                if (q != m) r *= (t - q) / (m - q);
            return r;
        };
        total += y[s + m] * 0.5 * u * (L(g1) + L(g2));
    }
    return total * h;
}

/// int_0^x y dx for arbitrary x in [0, (n-1) h], O(h^4).
class Primitive {
public:
    Primitive(std::vector<double> y, double h) : y_(std::move(y)), h_(h) {
        prefix_ = cumulative_integral(y_, h_);
    }

    double operator()(double x) const {
        const int n = static_cast<int>(y_.size());
        const double t = x / h_;
        require(t >= -1e-9 && t <= n - 1 + 1e-9, "Primitive: query outside the sampled range");
        int j = static_cast<int>(std::floor(t));
        j = std::clamp(j, 0, n - 2);
        const double u = std::clamp(t - j, 0.0, 1.0);
        return prefix_[j] + partial_segment_integral(y_, h_, j, u);
    }

    double full() const { return prefix_.back(); }

private:
    std::vector<double> y_;
    double h_;
    std::vector<double> prefix_;
};

/// First derivative on a uniform grid, 5-point stencils, O(h^4).
inline std::vector<double> derivative(const std::vector<double>& y, double h) {
    const int n = static_cast<int>(y.size());
    require(n >= 5, "derivative: need at least 5 samples");
    std::vector<double> d(n);
    for (int i = 2; i + 2 < n; ++i)
        d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] +
                3.0 * y[n - 5]) / (12.0 * h);
    d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] -
                y[n - 5]) / (12.0 * h);
    return d;
}

} // namespace profile_math

/// Evaluates a radial profile at radius r by cubic interpolation; zero beyond
/// r_max when `zero_beyond` is set (kernels with compact support).
inline double eval_profile(const RadialProfile& p, double r, bool zero_beyond = false) {
    if (r < 0.0) r = -r;
    const double t = r / p.step();
    if (t > p.count - 1) {
        if (zero_beyond) return 0.0;
        require(false, "eval_profile: radius beyond r_max");
    }
    return profile_math::eval_cubic(p.values, t);
}

/// Evaluates an even profile at signed p (uses g(-p) = g(p)); zero beyond
/// p_max when requested.
inline double eval_even(const EvenProfile& g, double p, bool zero_beyond = true) {
    const double a = std::abs(p);
    const double t = a / g.step();
    if (t > g.count - 1) {
        if (zero_beyond) return 0.0;
        require(false, "eval_even: argument beyond p_max");
    }
    return profile_math::eval_cubic(g.values, t);
}

template <typename Fn>
inline EvenProfile make_even_profile(double p_max, int count, Fn&& fn) {
    EvenProfile g;
    g.p_max = p_max;
    g.count = count;
    g.values.resize(count);
    for (int i = 0; i < count; ++i) g.values[i] = fn(g.p(i));
    g.validate();
    return g;
}

template <typename Fn>
inline RadialProfile make_radial_profile(double r_max, int count, Fn&& fn) {
    RadialProfile f;
    f.r_max = r_max;
    f.count = count;
    f.values.resize(count);
    for (int i = 0; i < count; ++i) f.values[i] = fn(f.radius(i));
    f.validate();
    return f;
}

} // namespace sphermean::field

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sphermean/common.hpp"
#include "sphermean/field_ops.hpp"
#include "sphermean/grid.hpp"
#include "sphermean/profile.hpp"
#include "sphermean/sphere_quadrature.hpp"

namespace sphermean::abel {

using field::EvenProfile;
using field::GridField;
using field::GridGeometry;
using field::OffsetProfile;
using field::RadialProfile;
namespace pm = sphermean::field::profile_math;

/// Dimension and sphere-area conventions for the Abel pair. omega(k) is the
/// surface area of the unit sphere S^{k-1} in R^k (omega_2 = 2 pi,
/// omega_3 = 4 pi); the g == 1 fixed point of the forward transform pins the
/// convention. n = 3 is the fully supported configuration; n = 2 has
/// (n-3)/2 = -1/2 endpoint singularities and requires the singular-endpoint
/// quadrature flag.
struct AbelParams {
    int n = 3;
    bool singular_quadrature = false;

    void validate() const {
        require(n == 2 || n == 3, "AbelParams: n must be 2 or 3");
        if (n == 2)
            require(singular_quadrature,
                    "AbelParams: n = 2 requires singular-endpoint quadrature (unsupported "
                    "configuration otherwise)");
    }

    static double omega(int k) {
        switch (k) {
            case 1: return 2.0;       // S^0: two points
            case 2: return 2.0 * pi;  // circle
            case 3: return 4.0 * pi;  // sphere
            default: require(false, "omega: k must be 1..3"); return 0.0;
        }
    }
};

/// Forward Abel-type transform: the radial profile of the radialized ridge,
///   f(r) = 2 (omega_{n-1}/omega_n) r^{2-n} int_0^r (r^2 - p^2)^{(n-3)/2} g(p) dp.
/// For n = 3 the exponent is 0 and this reduces to f(r) = (1/r) int_0^r g.
/// For n = 2 the endpoint singularity is absorbed by p = r sin(phi).
inline RadialProfile abel_forward(const EvenProfile& g, const AbelParams& params) {
    params.validate();
    g.validate();
    const int n = g.count;
    const double h = g.step();
    RadialProfile f;
    f.r_max = g.p_max;
    f.count = n;
    f.values.assign(n, 0.0);

    if (params.n == 3) {
        pm::Primitive P(g.values, h);
        f.values[0] = g.values[0]; // limit of (1/r) int_0^r g
        for (int i = 1; i < n; ++i) f.values[i] = P(g.p(i)) / g.p(i);
        return f;
    }

    // n = 2: f(r) = (2/pi) int_0^{pi/2} g(r sin phi) dphi
    std::vector<double> gx, gw;
    field::detail::gauss_legendre(48, gx, gw);
    for (int i = 0; i < n; ++i) {
        const double r = g.p(i);
        double acc = 0.0;
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const double phi = 0.25 * pi * (gx[q] + 1.0);
            acc += 0.25 * pi * gw[q] * field::eval_even(g, r * std::sin(phi), false);
        }
        f.values[i] = (2.0 / pi) * acc;
    }
    return f;
}

struct InverseResult {
    EvenProfile g;
    bool conditioning_warning = false;
    double stencil_disagreement = 0.0;
};

/// Inverse Abel-type transform,
///   g(p) = (2^{n-1} p / (n-2)!) (d/dp^2)^{n-1} int_0^p r^{n-1} (p^2-r^2)^{(n-3)/2} f(r) dr.
/// The (d/dp^2) derivatives are taken literally: the inner integral is
/// resampled onto a uniform grid in u = p^2 and differentiated there with
/// 5-point stencils. A conditioning warning is attached when the stencil at
/// doubled step disagrees by more than 1e-3 relative.
inline InverseResult abel_inverse(const RadialProfile& f, const AbelParams& params,
                                  int u_samples = 0) {
    params.validate();
    f.validate();
    const int n = f.count;
    const double h = f.step();
    const double u_max = f.r_max * f.r_max;
    if (u_samples <= 0) {
        // The inner integral behaves like u^{3/2} near u = 0, so the stencil
        // error at radius p scales as (hu/p^2)^4; hu ~ 2.5e-4 keeps the
        // round-trip well under 1e-6 down to p ~ 0.1.
        u_samples = std::clamp(static_cast<int>(u_max / 1.25e-4), 8193, 65537);
    }
    require(u_samples >= 65, "abel_inverse: u_samples too small");
    const double hu = u_max / (u_samples - 1);

    // inner integral I(p), evaluated exactly at p = sqrt(u_j)
    std::vector<double> I_u(u_samples);
    if (params.n == 3) {
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = f.radius(i) * f.radius(i) * f.values[i];
        pm::Primitive P(y, h);
        for (int j = 0; j < u_samples; ++j) I_u[j] = P(std::sqrt(j * hu));
    } else {
        // n = 2: I(p) = int_0^p r f(r) / sqrt(p^2 - r^2) dr = p int_0^{pi/2} sin(phi) f(p sin phi) dphi
        std::vector<double> gx, gw;
        field::detail::gauss_legendre(48, gx, gw);
        for (int j = 0; j < u_samples; ++j) {
            const double p = std::sqrt(j * hu);
            double acc = 0.0;
            for (std::size_t q = 0; q < gx.size(); ++q) {
                const double phi = 0.25 * pi * (gx[q] + 1.0);
                acc += 0.25 * pi * gw[q] * std::sin(phi) * field::eval_profile(f, p * std::sin(phi));
            }
            I_u[j] = p * acc;
        }
    }

    // (d/du)^{n-1}
    std::vector<double> D = pm::derivative(I_u, hu);
    if (params.n == 3) D = pm::derivative(D, hu);

    // the same derivatives at doubled step, for the conditioning probe
    std::vector<double> I_half(I_u.size() / 2);
    for (std::size_t j = 0; j < I_half.size(); ++j) I_half[j] = I_u[2 * j];
    std::vector<double> D2 = pm::derivative(I_half, 2.0 * hu);
    if (params.n == 3) D2 = pm::derivative(D2, 2.0 * hu);
    double disagreement = 0.0, scale = 0.0;
    for (std::size_t j = 4; j + 4 < D2.size(); ++j) scale = std::max(scale, std::abs(D2[j]));
    for (std::size_t j = 4; j + 4 < D2.size(); ++j)
        disagreement = std::max(disagreement, std::abs(D2[j] - D[2 * j]));

    // assemble g on the u grid, then resample to the uniform p grid
    const double front = params.n == 3 ? 4.0 : 2.0; // 2^{n-1}/(n-2)!
    std::vector<double> g_u(u_samples);
    for (int j = 0; j < u_samples; ++j) g_u[j] = front * std::sqrt(j * hu) * D[j];

    InverseResult out;
    out.stencil_disagreement = scale > 0.0 ? disagreement / scale : 0.0;
    out.conditioning_warning = out.stencil_disagreement > 1e-3;
    out.g.p_max = f.r_max;
    out.g.count = n;
    out.g.values.resize(n);
    for (int i = 0; i < n; ++i) {
        const double u = f.radius(i) * f.radius(i);
        out.g.values[i] = pm::eval_cubic(g_u, u / hu);
    }
    return out;
}

/// The 1-D convolution kernel (1 - p^2)_+^{(n-3)/2} of the ridge identity,
/// sampled on [0, 1] with exact support [-1, 1] under even extension. For
/// n = 3 this is the indicator of [-1, 1]; for n = 2 the integrable endpoint
/// singularity is sampled with the last cell's value chosen to preserve the
/// kernel's integral over that cell (requires the singular flag).
inline EvenProfile ridge_convolution_kernel(const AbelParams& params, int count = 129) {
    params.validate();
    require(count >= 33, "ridge_convolution_kernel: count too small");
    EvenProfile k;
    k.p_max = 1.0;
    k.count = count;
    k.values.assign(count, 0.0);
    if (params.n == 3) {
        for (int i = 0; i < count; ++i) k.values[i] = 1.0;
        return k;
    }
    const double h = k.step();
    for (int i = 0; i + 1 < count; ++i) {
        const double p = k.p(i);
        k.values[i] = 1.0 / std::sqrt(1.0 - p * p);
    }
    // preserve int_{1-h}^1 (1-p^2)^{-1/2} dp = pi/2 - asin(1-h) on the last cell
    const double cell = 0.5 * pi - std::asin(1.0 - h);
    k.values[count - 1] = 2.0 * cell / h - k.values[count - 2];
    return k;
}

namespace detail_abel {

/// Primitive of the even extension of g: int_0^x g_even (odd in x).
class EvenPrimitive {
public:
    explicit EvenPrimitive(const EvenProfile& g) : P_(g.values, g.step()), p_max_(g.p_max) {}

    double operator()(double x) const {
        const double a = std::min(std::abs(x), p_max_);
        const double v = P_(a);
        return x >= 0.0 ? v : -v;
    }

    double p_max() const { return p_max_; }

private:
    pm::Primitive P_;
    double p_max_;
};

} // namespace detail_abel

/// g *_1 kernel for the n = 3 indicator kernel, computed exactly as a
/// difference of primitives: (g * 1_{[-1,1]})(s) = G(s+1) - G(s-1) with G the
/// odd primitive of the even extension (g treated as zero beyond its grid).
inline EvenProfile convolve_even_indicator(const EvenProfile& g) {
    detail_abel::EvenPrimitive G(g);
    EvenProfile out;
    out.p_max = g.p_max + 1.0;
    const double h = g.step();
    out.count = static_cast<int>(std::ceil(out.p_max / h)) + 1;
    out.p_max = h * (out.count - 1);
    out.values.resize(out.count);
    for (int i = 0; i < out.count; ++i) {
        const double s = out.p(i);
        const double hi = std::clamp(s + 1.0, -g.p_max, g.p_max);
        const double lo = std::clamp(s - 1.0, -g.p_max, g.p_max);
        out.values[i] = G(hi) - G(lo);
    }
    return out;
}

struct IdentityReport {
    std::vector<double> radii;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> ratio;          // lhs/rhs at non-degenerate radii
    std::vector<double> excluded_radii; // where |rhs| was too small to divide
    double constant = 0.0;              // fitted common ratio (median)
    double spread = 0.0;                // (max-min)/|median| of the ratios
};

/// Checks (A g * delta_S)(x)|_{|x|=d} = const * A(g *_1 (1-p^2)_+^{(n-3)/2})(d)
/// on a sweep of radii, with the two sides computed through independent
/// pipelines: the left through a sampled 3-D radial field and sphere
/// quadrature, the right through the 1-D convolution and the forward
/// transform. Unit sphere radius (the identity is stated after rescaling to
/// R = 1); n = 3 only.
inline IdentityReport convolution_identity_check(const EvenProfile& g,
                                                 const AbelParams& params,
                                                 const std::vector<double>& sample_radii,
                                                 int grid_n = 128, int quad_order = 48) {
    params.validate();
    require(params.n == 3, "convolution_identity_check: implemented for n = 3");
    require(!sample_radii.empty(), "convolution_identity_check: no sample radii");

    double d_max = 0.0;
    for (double d : sample_radii) {
        require(d > 0.0, "convolution_identity_check: radii must be > 0");
        d_max = std::max(d_max, d);
    }
    const double half_extent = d_max + 1.0 + 0.3;

    // LHS: radial field of A g, averaged over spheres of radius 1
    const double reach = half_extent * std::sqrt(3.0) + 0.1;
    const int ext_count = std::max(2049, 4 * g.count);
    EvenProfile g_ext;
    g_ext.p_max = reach;
    g_ext.count = ext_count;
    g_ext.values.resize(ext_count);
    for (int i = 0; i < ext_count; ++i)
        g_ext.values[i] = field::eval_even(g, g_ext.p(i), true);
    const RadialProfile Ag = abel_forward(g_ext, params);

    const GridGeometry geom = field::centered_geometry(3, grid_n, half_extent);
    const GridField F = field::radial_field(geom, Ag, false);
    const auto quad = field::sphere_quadrature(3, quad_order);

    IdentityReport rep;
    rep.radii = sample_radii;
    for (double d : sample_radii)
        rep.lhs.push_back(field::spherical_mean(F, {d, 0.0, 0.0}, 1.0, quad));

    // RHS: A(g *_1 indicator)
    const EvenProfile gk = convolve_even_indicator(g);
    const RadialProfile Agk = abel_forward(gk, params);
    for (double d : sample_radii) {
        require(d <= Agk.r_max, "convolution_identity_check: radius beyond the profile");
        rep.rhs.push_back(field::eval_profile(Agk, d));
    }

    double rhs_scale = 0.0;
    for (double v : rep.rhs) rhs_scale = std::max(rhs_scale, std::abs(v));
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        if (std::abs(rep.rhs[i]) <= 1e-9 * rhs_scale) {
            rep.excluded_radii.push_back(rep.radii[i]);
            continue;
        }
        rep.ratio.push_back(rep.lhs[i] / rep.rhs[i]);
    }
    if (!rep.ratio.empty()) {
        std::vector<double> sorted = rep.ratio;
        std::sort(sorted.begin(), sorted.end());
        rep.constant = sorted[sorted.size() / 2];
        const double lo = sorted.front(), hi = sorted.back();
        rep.spread = std::abs(rep.constant) > 0.0 ? (hi - lo) / std::abs(rep.constant) : 0.0;
    }
    return rep;
}

struct TitchmarshReport {
    bool degenerate = false;   // k identically zero
    double onset_s = 0.0;      // inf { s : |k(s)| > threshold }
    double inf_supp_g = 0.0;   // detected from the profile values
    double expected_onset = 0.0; // inf_supp_g - 1
    double grid_step = 0.0;
};

/// Forward (support-addition) direction of the Titchmarsh step: computes
/// k(s) = int g(p) (1 - |p - s|^2)_+^{(n-3)/2} dp for an offset-supported g
/// and locates the onset of k, which must sit at inf supp(g) - 1. n = 3 only
/// (indicator kernel; exact difference-of-primitives evaluation).
inline TitchmarshReport titchmarsh_forward_check(const OffsetProfile& g, int n,
                                                 double threshold_rel = 1e-9) {
    require(n == 3, "titchmarsh_forward_check: implemented for n = 3");
    require(g.count >= 32 && g.p_lo >= 0.0 && g.p_hi > g.p_lo,
            "titchmarsh_forward_check: bad offset profile");

    TitchmarshReport rep;
    rep.grid_step = g.step();

    double gmax = 0.0;
    for (double v : g.values) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) {
        rep.degenerate = true;
        return rep;
    }
    int first = 0;
    while (first < g.count && std::abs(g.values[first]) <= 1e-12 * gmax) ++first;
    rep.inf_supp_g = g.p(first);
    rep.expected_onset = rep.inf_supp_g - 1.0;

    pm::Primitive P(g.values, g.step());
    const auto Pg = [&](double p) {
        const double c = std::clamp(p, g.p_lo, g.p_hi);
        return P(c - g.p_lo);
    };
    // k(s) = Pg(s+1) - Pg(s-1); scan s on the profile's own step
    const double s_lo = std::max(0.0, g.p_lo - 1.0 - 0.25);
    const double s_hi = g.p_hi - 1.0 + 0.5;
    const int steps = static_cast<int>(std::ceil((s_hi - s_lo) / rep.grid_step)) + 1;
    double kmax = 0.0;
    std::vector<double> ks(steps);
    for (int i = 0; i < steps; ++i) {
        const double s = s_lo + i * rep.grid_step;
        ks[i] = Pg(s + 1.0) - Pg(s - 1.0);
        kmax = std::max(kmax, std::abs(ks[i]));
    }
    if (kmax == 0.0) {
        rep.degenerate = true;
        return rep;
    }
    int onset = 0;
    while (onset < steps && std::abs(ks[onset]) <= threshold_rel * kmax) ++onset;
    rep.onset_s = s_lo + onset * rep.grid_step;
    return rep;
}

struct LocalVerdict {
    enum class Status { pass, hypothesis_flagged, conclusion_failed };
    Status status = Status::pass;
    double means_max = 0.0;       // max |spherical mean| over tested centers
    double means_tol = 0.0;
    field::Point witness_center{0.0, 0.0, 0.0}; // set when hypothesis_flagged
    double interval_end = 0.0;    // 1 + eps - delta
    double g_sup_interval = 0.0;  // sup |A^{-1} f| on [0, interval_end]
    double f_rec_sup_interval = 0.0; // sup |A(A^{-1} f)| on [0, interval_end]
    double scale = 0.0;           // ||f||_inf of the profile
};

/// Desk-scale enactment of the local support-propagation theorem: for a
/// radial profile vanishing on [0,1], measures the radius-1 spherical means
/// at centers inside B(0, eps); if they vanish, pushes the vanishing outward
/// through the Abel pair and reports whether f vanishes on [0, 1+eps-delta].
/// Phantoms that violate the mean hypothesis are flagged with the witness
/// center (consistent with the theorem, not a counterexample). n = 3.
inline LocalVerdict local_theorem_pipeline(const RadialProfile& f, double eps, int n,
                                           double tol_rel = 1e-3, int grid_n = 96,
                                           int quad_order = 32) {
    require(n == 3, "local_theorem_pipeline: implemented for n = 3");
    require(eps > 0.0 && eps < 0.5, "local_theorem_pipeline: eps in (0, 0.5)");
    f.validate();
    require(f.r_max >= 1.0 + eps, "local_theorem_pipeline: profile must cover [0, 1+eps]");

    LocalVerdict v;
    v.scale = 0.0;
    for (double x : f.values) v.scale = std::max(v.scale, std::abs(x));
    // hypothesis on the data: f must vanish on [0, 1]
    for (int i = 0; i < f.count; ++i)
        if (f.radius(i) <= 1.0)
            require(std::abs(f.values[i]) <= 1e-12 * std::max(1.0, v.scale),
                    "local_theorem_pipeline: profile must vanish on [0, 1]");

    const double half_extent = 1.0 + eps + 0.15;
    const GridGeometry geom = field::centered_geometry(3, grid_n, half_extent);
    const GridField F = field::radial_field(geom, f, true);
    const auto quad = field::sphere_quadrature(3, quad_order);

    v.means_tol = tol_rel * std::max(v.scale, 1e-300);
    const double h = geom.spacing;
    const int span = static_cast<int>(std::ceil(eps / h)) + 1;
    const int c0 = grid_n / 2;
    for (int di = -span; di <= span; ++di)
        for (int dj = -span; dj <= span; ++dj)
            for (int dk = -span; dk <= span; ++dk) {
                const field::Point c = geom.point(c0 + di, c0 + dj, c0 + dk);
                if (std::hypot(c[0], c[1], c[2]) >= eps) continue;
                const double m = std::abs(field::spherical_mean(F, c, 1.0, quad));
                if (m > v.means_max) {
                    v.means_max = m;
                    v.witness_center = c;
                }
            }
    if (v.means_max > v.means_tol) {
        v.status = LocalVerdict::Status::hypothesis_flagged;
        return v;
    }

    // conclusion: A^{-1} f vanishes on [0, 1+eps-delta], hence so does f
    AbelParams params{3, false};
    const auto inv = abel_inverse(f, params);
    const RadialProfile f_rec = abel_forward(inv.g, params);
    const double delta = 3.0 * f.step();
    v.interval_end = 1.0 + eps - delta;
    for (int i = 0; i < inv.g.count; ++i) {
        if (inv.g.p(i) > v.interval_end) break;
        v.g_sup_interval = std::max(v.g_sup_interval, std::abs(inv.g.values[i]));
    }
    for (int i = 0; i < f_rec.count; ++i) {
        if (f_rec.radius(i) > v.interval_end) break;
        v.f_rec_sup_interval = std::max(v.f_rec_sup_interval, std::abs(f_rec.values[i]));
    }
    const double conc_tol = tol_rel * std::max(v.scale, 1e-300);
    v.status = (v.g_sup_interval <= conc_tol * 10.0 && v.f_rec_sup_interval <= conc_tol)
                   ? LocalVerdict::Status::pass
                   : LocalVerdict::Status::conclusion_failed;
    return v;
}

} // namespace sphermean::abel

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "sphermean/common.hpp"

namespace sphermean::field {

/// Quadrature for the NORMALIZED sphere measure (weights sum to 1). With
/// this convention the Fourier multiplier of the radius-R sphere average is
/// exactly the normalized Bessel function, with value 1 at xi = 0.
struct SphereQuadrature {
    int dim = 2;
    std::vector<std::array<double, 3>> directions;
    std::vector<double> weights;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace detail

/// Unit-sphere quadrature. n=2: `order` equally spaced angles with equal
/// weights (trigonometric exactness up to degree order-1). n=3: product of
/// Gauss-Legendre in the polar cosine and a uniform azimuth, exact for
/// spherical polynomials well past degree order/2.
inline SphereQuadrature sphere_quadrature(int dim, int order) {
    require(dim == 2 || dim == 3, "sphere_quadrature: dim must be 2 or 3");
    require(order >= 8, "sphere_quadrature: order must be >= 8");
    SphereQuadrature q;
    q.dim = dim;
    if (dim == 2) {
        q.directions.reserve(order);
        q.weights.assign(order, 1.0 / order);
        for (int i = 0; i < order; ++i) {
            const double th = 2.0 * pi * i / order;
            q.directions.push_back({std::cos(th), std::sin(th), 0.0});
        }
        return q;
    }
    const int npol = order / 2 + 1;
    const int naz = order + 1;
    std::vector<double> gx, gw;
    detail::gauss_legendre(npol, gx, gw);
    q.directions.reserve(static_cast<std::size_t>(npol) * naz);
    q.weights.reserve(static_cast<std::size_t>(npol) * naz);
    for (int i = 0; i < npol; ++i) {
        const double c = gx[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double wz = 0.5 * gw[i] / naz; // GL weights sum to 2
        for (int a = 0; a < naz; ++a) {
            const double ph = 2.0 * pi * a / naz;
            q.directions.push_back({s * std::cos(ph), s * std::sin(ph), c});
            q.weights.push_back(wz);
        }
    }
    return q;
}

} // namespace sphermean::field

#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "sphermean/common.hpp"
#include "sphermean/grid.hpp"

namespace sphermean::field {

namespace detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// One-dimensional complex FFT plan. Power-of-two lengths run the iterative
/// radix-2 kernel; anything else goes through Bluestein's chirp transform on
/// top of it, so arbitrary grid shapes are supported.
class Fft1D {
public:
    explicit Fft1D(std::size_t n) : n_(n) {
        if (is_pow2(n_)) {
            build_twiddles(n_);
        } else {
            m_ = next_pow2(2 * n_ - 1);
            build_twiddles(m_);
            // chirp u_k = exp(-i pi k^2 / n); k^2 taken mod 2n keeps the
            // angle argument small and exact.
            chirp_.resize(n_);
            for (std::size_t k = 0; k < n_; ++k) {
                const std::size_t k2 = (k * k) % (2 * n_);
                const double ang = -pi * static_cast<double>(k2) / static_cast<double>(n_);
                chirp_[k] = {std::cos(ang), std::sin(ang)};
            }
            // spectrum of the conjugate chirp, wrapped onto length m
            std::vector<cplx> b(m_, cplx(0.0, 0.0));
            b[0] = std::conj(chirp_[0]);
            for (std::size_t k = 1; k < n_; ++k) {
                b[k] = std::conj(chirp_[k]);
                b[m_ - k] = std::conj(chirp_[k]);
            }
            pow2(b.data(), -1);
            bhat_ = std::move(b);
        }
    }

    std::size_t size() const { return n_; }

    /// In-place transform, sign = -1 forward / +1 inverse (unnormalized).
    void run(cplx* data, int sign) const {
        if (is_pow2(n_)) {
            pow2(data, sign);
            return;
        }
        // Bluestein;  X_k = conj(c_k) * sum_j (x_j conj(c_j)) c_{k-j}  for the
        // forward sign; the inverse is the conjugate transform.
        std::vector<cplx> a(m_, cplx(0.0, 0.0));
        if (sign < 0) {
            for (std::size_t j = 0; j < n_; ++j) a[j] = data[j] * chirp_[j];
        } else {
            for (std::size_t j = 0; j < n_; ++j) a[j] = data[j] * std::conj(chirp_[j]);
        }
        pow2(a.data(), -1);
        if (sign < 0) {
            for (std::size_t j = 0; j < m_; ++j) a[j] *= bhat_[j];
        } else {
            for (std::size_t j = 0; j < m_; ++j) a[j] *= std::conj(bhat_[j]);
        }
        pow2(a.data(), +1);
        const double inv_m = 1.0 / static_cast<double>(m_);
        for (std::size_t k = 0; k < n_; ++k) {
            const cplx c = sign < 0 ? chirp_[k] : std::conj(chirp_[k]);
            data[k] = a[k] * c * inv_m;
        }
    }

private:
    void build_twiddles(std::size_t len) {
        tw_.resize(len / 2);
        for (std::size_t k = 0; k < len / 2; ++k) {
            const double ang = -2.0 * pi * static_cast<double>(k) / static_cast<double>(len);
            tw_[k] = {std::cos(ang), std::sin(ang)};
        }
    }

    void pow2(cplx* x, int sign) const {
        const std::size_t len = is_pow2(n_) ? n_ : m_;
        // bit-reversal permutation
        for (std::size_t i = 1, j = 0; i < len; ++i) {
            std::size_t bit = len >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(x[i], x[j]);
        }
        for (std::size_t half = 1; half < len; half <<= 1) {
            const std::size_t step = len / (2 * half);
            for (std::size_t i = 0; i < len; i += 2 * half) {
                for (std::size_t k = 0; k < half; ++k) {
                    cplx w = tw_[k * step];
                    if (sign > 0) w = std::conj(w);
                    const cplx u = x[i + k];
                    const cplx v = x[i + k + half] * w;
                    x[i + k] = u + v;
                    x[i + k + half] = u - v;
                }
            }
        }
    }

    std::size_t n_ = 0;
    std::size_t m_ = 0; // Bluestein length (0 when n is a power of two)
    std::vector<cplx> tw_;
    std::vector<cplx> chirp_;
    std::vector<cplx> bhat_;
};

/// Unnormalized in-place multidimensional DFT over the row-major array.
/// Lines along each axis are transformed in parallel.
inline void dft_inplace(std::vector<cplx>& data, const std::array<int, 3>& shape, int dim,
                        int sign) {
    for (int axis = 0; axis < dim; ++axis) {
        const int n = shape[axis];
        Fft1D plan(static_cast<std::size_t>(n));
        std::int64_t stride = 1;
        for (int a = axis + 1; a < 3; ++a) stride *= shape[a];
        std::int64_t outer = 1;
        for (int a = 0; a < 3; ++a)
            if (a != axis) outer *= shape[a];
        // enumerate all lines along `axis`
        parallel_for(outer, [&](std::int64_t line) {
            // decompose line index into the non-axis coordinates
            std::int64_t rem = line;
            int idx[3] = {0, 0, 0};
            for (int a = 2; a >= 0; --a) {
                if (a == axis) continue;
                idx[a] = static_cast<int>(rem % shape[a]);
                rem /= shape[a];
            }
            std::int64_t base = (static_cast<std::int64_t>(idx[0]) * shape[1] + idx[1]) *
                                    shape[2] + idx[2];
            std::vector<cplx> buf(n);
            for (int i = 0; i < n; ++i) buf[i] = data[base + i * stride];
            plan.run(buf.data(), sign);
            for (int i = 0; i < n; ++i) data[base + i * stride] = buf[i];
        });
    }
}

} // namespace detail

/// Frequency-domain companion of a GridField. Bins follow the standard
/// discrete layout: along each axis, bin i carries the signed integer
/// frequency i (i <= n/2) or i - n, and the angular frequency is
/// 2 pi (signed) / (n spacing) radians per unit length. The forward
/// transform carries the 1/N normalization, so the zero bin of a real field
/// equals its mean value.
struct SpectralField {
    GridGeometry geom;
    std::vector<std::complex<double>> values;

    /// Signed frequency of bin index i along axis a, in radians per unit.
    double freq(int axis, int i) const {
        const int n = geom.shape[axis];
        const int s = i <= n / 2 ? i : i - n;
        return 2.0 * pi * static_cast<double>(s) / (n * geom.spacing);
    }

    /// |xi| of a bin given its per-axis indices.
    double freq_mag(int i, int j, int k = 0) const {
        const double fx = freq(0, i), fy = freq(1, j);
        const double fz = geom.dim == 3 ? freq(2, k) : 0.0;
        return std::sqrt(fx * fx + fy * fy + fz * fz);
    }
};

/// Discrete Fourier transform with the 1/N convention (DC bin = mean).
inline SpectralField fft_forward(const GridField& f) {
    f.check_finite();
    SpectralField s;
    s.geom = f.geom;
    s.values.assign(f.values.begin(), f.values.end());
    detail::dft_inplace(s.values, f.geom.shape, f.geom.dim, -1);
    const double inv = 1.0 / static_cast<double>(f.geom.size());
    for (auto& v : s.values) v *= inv;
    return s;
}

/// Inverse of fft_forward; returns the real part (imaginary residue of a
/// conjugate-symmetric spectrum is at rounding level).
inline GridField fft_inverse(const SpectralField& s) {
    std::vector<detail::cplx> work(s.values);
    detail::dft_inplace(work, s.geom.shape, s.geom.dim, +1);
    GridField f(s.geom);
    for (std::size_t i = 0; i < work.size(); ++i) f.values[i] = work[i].real();
    return f;
}

/// Applies a radial frequency multiplier to a field with zero-padding: each
/// axis is padded to the next power of two holding shape + 2*guard_cells, the
/// unnormalized DFT is multiplied bin-wise by mult(|xi|), and the original
/// window is cropped back out. This is the engine behind every spectral
/// convolution here; the padding policy is what keeps compact supports from
/// wrapping around.
template <typename Mult>
inline GridField apply_radial_multiplier(const GridField& f, int guard_cells, Mult&& mult) {
    const GridGeometry& g = f.geom;
    GridGeometry pg = g;
    if (guard_cells > 0) {
        for (int a = 0; a < g.dim; ++a)
            pg.shape[a] = static_cast<int>(detail::next_pow2(g.shape[a] + 2 * guard_cells));
    }
    if (g.dim == 2) pg.shape[2] = 1;

    std::vector<detail::cplx> data(static_cast<std::size_t>(pg.size()), detail::cplx(0, 0));
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                data[pg.index(i, j, k)] = f.values[g.index(i, j, k)];

    detail::dft_inplace(data, pg.shape, pg.dim, -1);

    SpectralField probe;
    probe.geom = pg;
    // per-axis frequency tables; |xi| assembled per bin
    std::vector<std::vector<double>> fr(3);
    for (int a = 0; a < pg.dim; ++a) {
        fr[a].resize(pg.shape[a]);
        for (int i = 0; i < pg.shape[a]; ++i) fr[a][i] = probe.freq(a, i);
    }
    parallel_for(pg.shape[0], [&](std::int64_t i) {
        const double fx = fr[0][i];
        for (int j = 0; j < pg.shape[1]; ++j) {
            const double fy = fr[1][j];
            for (int k = 0; k < pg.shape[2]; ++k) {
                const double fz = pg.dim == 3 ? fr[2][k] : 0.0;
                const double xi = std::sqrt(fx * fx + fy * fy + fz * fz);
                data[pg.index(static_cast<int>(i), j, k)] *= mult(xi);
            }
        }
    });

    detail::dft_inplace(data, pg.shape, pg.dim, +1);
    const double inv = 1.0 / static_cast<double>(pg.size());
    GridField out(g);
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k)
                out.values[g.index(i, j, k)] = data[pg.index(i, j, k)].real() * inv;
    return out;
}

} // namespace sphermean::field

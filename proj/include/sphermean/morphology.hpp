#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <queue>
#include <vector>

#include "sphermean/common.hpp"
#include "sphermean/grid.hpp"

namespace sphermean::geometry {

using field::GridGeometry;

/// Boolean voxel mask over a GridField lattice (true = inside K). The window
/// is the universe for morphology: offsets leaving the window are vacuously
/// satisfied in erosion and contribute nothing to dilation, which keeps the
/// erosion/dilation duality exact. Boundedness of K (no true voxels on the
/// outer layer) is a precondition of the domain predicates, not of the raw
/// morphology.
struct DomainMask {
    GridGeometry geom;
    std::vector<std::uint8_t> inside;

    DomainMask() = default;
    explicit DomainMask(const GridGeometry& g, bool fill = false)
        : geom(g), inside(static_cast<std::size_t>(g.size()), fill ? 1 : 0) {
        geom.validate();
    }

    bool at(int i, int j, int k = 0) const { return inside[geom.index(i, j, k)] != 0; }
    void set(int i, int j, int k, bool v) { inside[geom.index(i, j, k)] = v ? 1 : 0; }

    std::int64_t count() const {
        std::int64_t c = 0;
        for (auto v : inside) c += v;
        return c;
    }

    bool empty() const { return count() == 0; }

    /// True when no voxel of the outermost layer is set.
    bool bounded() const {
        const auto& s = geom.shape;
        for (int i = 0; i < s[0]; ++i)
            for (int j = 0; j < s[1]; ++j)
                for (int k = 0; k < s[2]; ++k) {
                    const bool edge = i == 0 || i == s[0] - 1 || j == 0 || j == s[1] - 1 ||
                                      (geom.dim == 3 && (k == 0 || k == s[2] - 1));
                    if (edge && at(i, j, k)) return false;
                }
        return true;
    }

    DomainMask complement() const {
        DomainMask out(geom);
        for (std::size_t i = 0; i < inside.size(); ++i) out.inside[i] = inside[i] ? 0 : 1;
        return out;
    }
};

/// Closed-ball structuring element: the lattice points p with
/// |p| <= R/spacing + 1/2 (in voxel units). The half-voxel tie keeps the
/// element a faithful closed ball under rasterization.
struct BallElement {
    double radius_voxels = 0.0;
    std::vector<std::array<int, 3>> offsets;
};

inline BallElement make_ball(int dim, double R, double spacing) {
    require(dim == 2 || dim == 3, "make_ball: dim must be 2 or 3");
    require(R > 0.0 && spacing > 0.0, "make_ball: R and spacing must be > 0");
    BallElement b;
    b.radius_voxels = R / spacing + 0.5;
    const double r2 = b.radius_voxels * b.radius_voxels + 1e-9;
    const int m = static_cast<int>(b.radius_voxels) + 1;
    const int mz = dim == 3 ? m : 0;
    for (int i = -m; i <= m; ++i)
        for (int j = -m; j <= m; ++j)
            for (int k = -mz; k <= mz; ++k)
                if (i * i + j * j + k * k <= r2) b.offsets.push_back({i, j, k});
    return b;
}

inline void check_ball_fits(const DomainMask& m, const BallElement& b) {
    const int r = static_cast<int>(b.radius_voxels) + 1;
    for (int a = 0; a < m.geom.dim; ++a)
        require(2 * r < m.geom.shape[a], "morphology: ball larger than the grid");
}

/// Morphological erosion with the ball element (window-universe convention).
inline DomainMask erode(const DomainMask& m, const BallElement& ball) {
    check_ball_fits(m, ball);
    const auto& g = m.geom;
    DomainMask out(g);
    parallel_for(g.shape[0], [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                bool all = true;
                for (const auto& o : ball.offsets) {
                    const int x = i + o[0], y = j + o[1], z = k + o[2];
                    if (x < 0 || x >= g.shape[0] || y < 0 || y >= g.shape[1] || z < 0 ||
                        z >= g.shape[2])
                        continue;
                    if (!m.at(x, y, z)) { all = false; break; }
                }
                out.set(i, j, k, all);
            }
    });
    return out;
}

/// Morphological dilation (the ball is symmetric, so no reflection needed).
inline DomainMask dilate(const DomainMask& m, const BallElement& ball) {
    check_ball_fits(m, ball);
    const auto& g = m.geom;
    DomainMask out(g);
    parallel_for(g.shape[0], [&](std::int64_t ii) {
        const int i = static_cast<int>(ii);
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                bool any = false;
                for (const auto& o : ball.offsets) {
                    const int x = i + o[0], y = j + o[1], z = k + o[2];
                    if (x < 0 || x >= g.shape[0] || y < 0 || y >= g.shape[1] || z < 0 ||
                        z >= g.shape[2])
                        continue;
                    if (m.at(x, y, z)) { any = true; break; }
                }
                out.set(i, j, k, any);
            }
    });
    return out;
}

/// The set C of centers whose closed R-ball avoids K. On top of the erosion
/// of the complement, the ball is required to fit inside the window: centers
/// whose ball leaves the grid are unusable by every downstream harness, so
/// for empty K this is "everything minus the R-band at the edge".
inline DomainMask center_set(const DomainMask& K, double R) {
    require(!K.complement().empty(), "center_set: complement is empty");
    const auto ball = make_ball(K.geom.dim, R, K.geom.spacing);
    DomainMask C = erode(K.complement(), ball);
    const auto& g = K.geom;
    const int r = static_cast<int>(std::floor(ball.radius_voxels));
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                const bool fits = i - r >= 0 && i + r < g.shape[0] && j - r >= 0 &&
                                  j + r < g.shape[1] &&
                                  (g.dim == 2 || (k - r >= 0 && k + r < g.shape[2]));
                if (!fits) C.set(i, j, k, false);
            }
    return C;
}

struct Components {
    std::vector<std::int32_t> label; // -1 outside the mask
    int count = 0;
    std::vector<std::int64_t> sizes;
};

/// Face-adjacency (4/6-neighborhood) connected component labeling.
inline Components connected_components(const DomainMask& m) {
    const auto& g = m.geom;
    Components out;
    out.label.assign(static_cast<std::size_t>(g.size()), -1);
    const int dirs2[4][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
    const int dirs3[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    const int ndirs = g.dim == 2 ? 4 : 6;
    const auto* dirs = g.dim == 2 ? dirs2 : dirs3;

    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                const std::int64_t idx = g.index(i, j, k);
                if (!m.inside[idx] || out.label[idx] >= 0) continue;
                const int id = out.count++;
                out.sizes.push_back(0);
                std::queue<std::array<int, 3>> q;
                q.push({i, j, k});
                out.label[idx] = id;
                while (!q.empty()) {
                    const auto v = q.front();
                    q.pop();
                    ++out.sizes[id];
                    for (int d = 0; d < ndirs; ++d) {
                        const int x = v[0] + dirs[d][0], y = v[1] + dirs[d][1],
                                  z = v[2] + dirs[d][2];
                        if (x < 0 || x >= g.shape[0] || y < 0 || y >= g.shape[1] || z < 0 ||
                            z >= g.shape[2])
                            continue;
                        const std::int64_t n = g.index(x, y, z);
                        if (m.inside[n] && out.label[n] < 0) {
                            out.label[n] = id;
                            q.push({x, y, z});
                        }
                    }
                }
            }
    return out;
}

struct RConvexVerdict {
    enum class Status { r_convex, coverage_fail, disconnected };
    Status status = Status::r_convex;
    DomainMask centers;
    int component_count = 0;
    bool has_coverage_witness = false;
    std::array<int, 3> coverage_fail_witness{0, 0, 0}; // uncovered complement voxel
    std::array<int, 3> component_witness_a{0, 0, 0};   // voxels in two components
    std::array<int, 3> component_witness_b{0, 0, 0};

    bool is_r_convex() const { return status == Status::r_convex; }
};

/// The R-convexity predicate: (1) the complement of K (outside a 1-voxel
/// shell around its boundary) is covered by the R-balls centered in C;
/// (2) C is connected. Witnesses are reported on failure. Coverage is only
/// asserted where the window admits a covering ball at all: near the window
/// corners no in-window ball can reach, regardless of K, so those voxels are
/// outside the test domain.
inline RConvexVerdict r_convex(const DomainMask& K, double R) {
    require(R >= 2.0 * K.geom.spacing, "r_convex: R must be at least 2 voxels");
    require(K.bounded(), "r_convex: K must be bounded (outer layer clear)");
    const auto& g = K.geom;

    RConvexVerdict v;
    v.centers = center_set(K, R);

    const auto ball = make_ball(g.dim, R, g.spacing);
    const DomainMask covered = dilate(v.centers, ball);
    const DomainMask coverable = dilate(center_set(DomainMask(g), R), ball);
    const DomainMask shell = dilate(K, make_ball(g.dim, g.spacing, g.spacing));
    for (int i = 0; i < g.shape[0] && !v.has_coverage_witness; ++i)
        for (int j = 0; j < g.shape[1] && !v.has_coverage_witness; ++j)
            for (int k = 0; k < g.shape[2]; ++k) {
                if (K.at(i, j, k) || shell.at(i, j, k) || covered.at(i, j, k) ||
                    !coverable.at(i, j, k))
                    continue;
                v.has_coverage_witness = true;
                v.coverage_fail_witness = {i, j, k};
                break;
            }

    const auto comps = connected_components(v.centers);
    v.component_count = comps.count;
    if (comps.count > 1) {
        bool a_found = false;
        for (int i = 0; i < g.shape[0]; ++i)
            for (int j = 0; j < g.shape[1]; ++j)
                for (int k = 0; k < g.shape[2]; ++k) {
                    const auto lab = comps.label[g.index(i, j, k)];
                    if (lab == 0 && !a_found) {
                        v.component_witness_a = {i, j, k};
                        a_found = true;
                    } else if (lab == 1) {
                        v.component_witness_b = {i, j, k};
                    }
                }
    }

    if (v.has_coverage_witness)
        v.status = RConvexVerdict::Status::coverage_fail;
    else if (comps.count != 1)
        v.status = RConvexVerdict::Status::disconnected;
    return v;
}

} // namespace sphermean::geometry

#ifndef FIGINT_GAUSS3D_HPP
#define FIGINT_GAUSS3D_HPP

/// The divergence theorem one dimension up: closed triangulated surfaces,
/// voxel classification, the flux of a vector field as an additive
/// function of axis-parallel boxes, and the Gauss verification that
/// compares it with the direct surface flux.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "figint/fields.hpp"
#include "figint/integral.hpp"
#include "figint/numeric.hpp"
#include "figint/quadrature.hpp"
#include "figint/rectfn.hpp"

namespace figint {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    constexpr bool operator==(const Vec3&) const = default;
};

[[nodiscard]] constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
[[nodiscard]] constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
[[nodiscard]] constexpr Vec3 operator*(double s, Vec3 a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
[[nodiscard]] constexpr double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
[[nodiscard]] constexpr Vec3 cross(Vec3 a, Vec3 b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
[[nodiscard]] inline double norm(Vec3 a) noexcept { return std::sqrt(dot(a, a)); }

enum class Axis3 : unsigned char { X, Y, Z };

struct Box3 {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0, z0 = 0.0, z1 = 0.0;

    [[nodiscard]] constexpr bool valid() const noexcept { return x0 <= x1 && y0 <= y1 && z0 <= z1; }
    [[nodiscard]] constexpr bool degenerate() const noexcept { return x0 == x1 || y0 == y1 || z0 == z1; }
    [[nodiscard]] constexpr double width() const noexcept { return x1 - x0; }
    [[nodiscard]] constexpr double height() const noexcept { return y1 - y0; }
    [[nodiscard]] constexpr double depth() const noexcept { return z1 - z0; }
    constexpr bool operator==(const Box3&) const = default;
};

[[nodiscard]] constexpr double box_volume(const Box3& b) noexcept {
    return b.width() * b.height() * b.depth();
}
[[nodiscard]] constexpr double box_surface_area(const Box3& b) noexcept {
    return 2.0 * (b.width() * b.height() + b.height() * b.depth() + b.width() * b.depth());
}

[[nodiscard]] inline std::pair<Box3, Box3> split_box(const Box3& b, Axis3 axis, double c) {
    if (!b.valid()) throw std::invalid_argument("split_box: invalid box");
    Box3 lo = b, hi = b;
    switch (axis) {
    case Axis3::X:
        if (!(b.x0 < c && c < b.x1)) throw std::domain_error("split_box: cut not interior");
        lo.x1 = c;
        hi.x0 = c;
        break;
    case Axis3::Y:
        if (!(b.y0 < c && c < b.y1)) throw std::domain_error("split_box: cut not interior");
        lo.y1 = c;
        hi.y0 = c;
        break;
    case Axis3::Z:
        if (!(b.z0 < c && c < b.z1)) throw std::domain_error("split_box: cut not interior");
        lo.z1 = c;
        hi.z0 = c;
        break;
    }
    return {lo, hi};
}

struct Voxel {
    std::int32_t i = 0, j = 0, k = 0;
    constexpr bool operator==(const Voxel&) const = default;
};

struct VoxelGrid {
    Box3 bounds;
    int level = 0;

    [[nodiscard]] std::int64_t cells_per_axis() const noexcept { return std::int64_t{1} << level; }
    [[nodiscard]] double hx() const noexcept { return bounds.width() / static_cast<double>(cells_per_axis()); }
    [[nodiscard]] double hy() const noexcept { return bounds.height() / static_cast<double>(cells_per_axis()); }
    [[nodiscard]] double hz() const noexcept { return bounds.depth() / static_cast<double>(cells_per_axis()); }
    [[nodiscard]] double h() const noexcept { return std::max({hx(), hy(), hz()}); }

    [[nodiscard]] bool in_range(Voxel v) const noexcept {
        const auto n = cells_per_axis();
        return v.i >= 0 && v.j >= 0 && v.k >= 0 && v.i < n && v.j < n && v.k < n;
    }

    /// Corner arithmetic matches DyadicGrid: base + index * side, so a
    /// refined grid reproduces parent corners bit for bit.
    [[nodiscard]] Box3 voxel_box(Voxel v) const noexcept {
        const double wx = hx(), wy = hy(), wz = hz();
        return Box3{bounds.x0 + v.i * wx,       bounds.x0 + (v.i + 1) * wx,
                    bounds.y0 + v.j * wy,       bounds.y0 + (v.j + 1) * wy,
                    bounds.z0 + v.k * wz,       bounds.z0 + (v.k + 1) * wz};
    }

    [[nodiscard]] VoxelGrid refined() const noexcept { return {bounds, level + 1}; }
    constexpr bool operator==(const VoxelGrid&) const = default;
};

/// Triangulated surface; triangle (a,b,c) has outward normal along
/// (b-a) x (c-a) when the mesh is oriented with positive signed volume.
/// eps declares the distance from this mesh to the ideal surface it
/// samples (0 when the mesh itself is the surface under test).
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::int32_t, 3>> triangles;
    double eps = 0.0;
};

struct MeshChecks {
    double area = 0.0;
    double signed_volume = 0.0;
    double total_edge_length = 0.0; // over unique undirected edges
    bool closed = false;
};

namespace detail {

inline std::uint64_t edge_key(std::int32_t a, std::int32_t b) noexcept {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

} // namespace detail

[[nodiscard]] inline MeshChecks mesh_checks(const TriMesh& m) {
    const auto nv = static_cast<std::int64_t>(m.vertices.size());
    for (const auto& t : m.triangles)
        for (int v : t)
            if (v < 0 || v >= nv) throw std::out_of_range("mesh_checks: vertex index out of range");

    MeshChecks r;
    KahanSum area, vol;
    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(m.triangles.size() * 3);
    bool degenerate_edge = false;
    for (const auto& t : m.triangles) {
        const Vec3 a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
        area.add(0.5 * norm(cross(b - a, c - a)));
        vol.add(dot(a, cross(b, c)) / 6.0);
        for (int e = 0; e < 3; ++e) {
            const std::int32_t u = t[e], v = t[(e + 1) % 3];
            if (u == v) degenerate_edge = true;
            ++directed[detail::edge_key(u, v)];
        }
    }
    r.area = area.value();
    r.signed_volume = vol.value();

    // closed and coherently oriented: every directed edge appears once,
    // and its reverse appears once
    r.closed = !m.triangles.empty() && !degenerate_edge;
    KahanSum elen;
    for (const auto& [key, count] : directed) {
        const auto u = static_cast<std::int32_t>(key >> 32);
        const auto v = static_cast<std::int32_t>(key & 0xffffffffu);
        if (count != 1 || directed.find(detail::edge_key(v, u)) == directed.end())
            r.closed = false;
        if (u < v) elen.add(norm(m.vertices[v] - m.vertices[u]));
    }
    r.total_edge_length = elen.value();
    return r;
}

[[nodiscard]] inline Box3 mesh_bounding_box(const TriMesh& m) {
    if (m.vertices.empty()) throw std::invalid_argument("mesh_bounding_box: empty mesh");
    Box3 b{m.vertices[0].x, m.vertices[0].x, m.vertices[0].y,
           m.vertices[0].y, m.vertices[0].z, m.vertices[0].z};
    for (const Vec3& p : m.vertices) {
        b.x0 = std::min(b.x0, p.x);
        b.x1 = std::max(b.x1, p.x);
        b.y0 = std::min(b.y0, p.y);
        b.y1 = std::max(b.y1, p.y);
        b.z0 = std::min(b.z0, p.z);
        b.z1 = std::max(b.z1, p.z);
    }
    return b;
}

namespace detail {

/// Separating-axis triangle/AABB overlap (box given by center + half
/// extents): 3 box axes, the triangle normal, and the 9 edge cross axes.
inline bool tri_box_overlap(Vec3 center, Vec3 half, Vec3 ta, Vec3 tb, Vec3 tc) noexcept {
    const Vec3 v0 = ta - center, v1 = tb - center, v2 = tc - center;
    const Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;

    const auto axis_test = [&](Vec3 axis) {
        const double p0 = dot(v0, axis), p1 = dot(v1, axis), p2 = dot(v2, axis);
        const double r = half.x * std::abs(axis.x) + half.y * std::abs(axis.y) + half.z * std::abs(axis.z);
        return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
    };

    // box axes (AABB overlap)
    if (std::min({v0.x, v1.x, v2.x}) > half.x || std::max({v0.x, v1.x, v2.x}) < -half.x) return false;
    if (std::min({v0.y, v1.y, v2.y}) > half.y || std::max({v0.y, v1.y, v2.y}) < -half.y) return false;
    if (std::min({v0.z, v1.z, v2.z}) > half.z || std::max({v0.z, v1.z, v2.z}) < -half.z) return false;
    // 9 cross axes
    const Vec3 edges[3] = {e0, e1, e2};
    const Vec3 units[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3& e : edges)
        for (const Vec3& u : units)
            if (axis_test(cross(e, u))) return false;
    // triangle plane
    if (axis_test(cross(e0, e1))) return false;
    return true;
}

[[nodiscard]] inline Vec3 closest_point_on_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c) noexcept {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;
    const Vec3 bp = p - b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;
    const Vec3 cp = p - c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    const double denom = 1.0 / (va + vb + vc);
    return a + (vb * denom) * ab + (vc * denom) * ac;
}

[[nodiscard]] inline double point_box_dist3(Vec3 p, const Box3& b) noexcept {
    const double dx = std::max({b.x0 - p.x, 0.0, p.x - b.x1});
    const double dy = std::max({b.y0 - p.y, 0.0, p.y - b.y1});
    const double dz = std::max({b.z0 - p.z, 0.0, p.z - b.z1});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

[[nodiscard]] inline double segment_segment_dist(Vec3 p1, Vec3 q1, Vec3 p2, Vec3 q2) noexcept {
    const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    double s, t;
    if (a == 0.0 && e == 0.0) return norm(r);
    if (a == 0.0) {
        s = 0.0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = dot(d1, r);
        if (e == 0.0) {
            t = 0.0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = dot(d1, d2);
            const double denom = a * e - b * b;
            s = denom != 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return norm((p1 + s * d1) - (p2 + t * d2));
}

/// Euclidean distance between a triangle and a box (0 when they meet);
/// when disjoint, the minimum is attained at a vertex-feature or
/// edge-edge pair, all of which are enumerated.
[[nodiscard]] inline double tri_box_dist(Vec3 a, Vec3 b, Vec3 c, const Box3& box) noexcept {
    const Vec3 center{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1), 0.5 * (box.z0 + box.z1)};
    const Vec3 half{0.5 * box.width(), 0.5 * box.height(), 0.5 * box.depth()};
    if (tri_box_overlap(center, half, a, b, c)) return 0.0;

    double d = std::min({point_box_dist3(a, box), point_box_dist3(b, box), point_box_dist3(c, box)});
    Vec3 corners[8];
    int ci = 0;
    for (double x : {box.x0, box.x1})
        for (double y : {box.y0, box.y1})
            for (double z : {box.z0, box.z1}) corners[ci++] = {x, y, z};
    for (const Vec3& p : corners) d = std::min(d, norm(p - closest_point_on_triangle(p, a, b, c)));

    const Vec3 tri_edges[3][2] = {{a, b}, {b, c}, {c, a}};
    // 12 box edges: 4 along each axis
    const auto edge_scan = [&](int axis) {
        for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) {
                Vec3 p, q;
                if (axis == 0) {
                    p = {box.x0, u ? box.y1 : box.y0, v ? box.z1 : box.z0};
                    q = {box.x1, p.y, p.z};
                } else if (axis == 1) {
                    p = {u ? box.x1 : box.x0, box.y0, v ? box.z1 : box.z0};
                    q = {p.x, box.y1, p.z};
                } else {
                    p = {u ? box.x1 : box.x0, v ? box.y1 : box.y0, box.z0};
                    q = {p.x, p.y, box.z1};
                }
                for (const auto& te : tri_edges)
                    d = std::min(d, segment_segment_dist(te[0], te[1], p, q));
            }
        }
    };
    for (int axis = 0; axis < 3; ++axis) edge_scan(axis);
    return d;
}

} // namespace detail

enum class VoxelLabel : std::uint8_t { Interior, Boundary, Exterior };

class VoxelClassification {
public:
    VoxelClassification(VoxelGrid g, std::vector<VoxelLabel> labels)
        : grid_(g), labels_(std::move(labels)) {}

    [[nodiscard]] const VoxelGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] VoxelLabel label(Voxel v) const noexcept {
        const auto n = grid_.cells_per_axis();
        return labels_[(static_cast<std::size_t>(v.k) * n + v.j) * n + v.i];
    }

    /// Voxels with the given label, ordered by (k, j, i): the fixed
    /// reduction order for figure evaluation.
    [[nodiscard]] std::vector<Voxel> voxels_with(VoxelLabel want) const {
        std::vector<Voxel> out;
        const auto n = grid_.cells_per_axis();
        std::size_t idx = 0;
        for (std::int64_t k = 0; k < n; ++k)
            for (std::int64_t j = 0; j < n; ++j)
                for (std::int64_t i = 0; i < n; ++i, ++idx)
                    if (labels_[idx] == want)
                        out.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                                       static_cast<std::int32_t>(k)});
        return out;
    }

    [[nodiscard]] std::vector<Voxel> inner_voxels() const { return voxels_with(VoxelLabel::Interior); }
    [[nodiscard]] std::vector<Voxel> outer_voxels() const {
        std::vector<Voxel> out;
        const auto n = grid_.cells_per_axis();
        std::size_t idx = 0;
        for (std::int64_t k = 0; k < n; ++k)
            for (std::int64_t j = 0; j < n; ++j)
                for (std::int64_t i = 0; i < n; ++i, ++idx)
                    if (labels_[idx] != VoxelLabel::Exterior)
                        out.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                                       static_cast<std::int32_t>(k)});
        return out;
    }

    [[nodiscard]] std::size_t count(VoxelLabel want) const noexcept {
        std::size_t k = 0;
        for (VoxelLabel l : labels_)
            if (l == want) ++k;
        return k;
    }

    /// Exact volume of a voxel set: count times the exact cell volume.
    [[nodiscard]] double volume_of(VoxelLabel want) const noexcept {
        return static_cast<double>(count(want)) * (grid_.hx() * grid_.hy() * grid_.hz());
    }
    [[nodiscard]] double inner_volume() const noexcept { return volume_of(VoxelLabel::Interior); }
    [[nodiscard]] double outer_volume() const noexcept {
        return static_cast<double>(count(VoxelLabel::Interior) + count(VoxelLabel::Boundary)) *
               (grid_.hx() * grid_.hy() * grid_.hz());
    }

    [[nodiscard]] double boundary_face_area() const noexcept {
        const double hx = grid_.hx(), hy = grid_.hy(), hz = grid_.hz();
        const double per = 2.0 * (hx * hy + hy * hz + hx * hz);
        return static_cast<double>(count(VoxelLabel::Boundary)) * per;
    }

private:
    VoxelGrid grid_;
    std::vector<VoxelLabel> labels_;
};

/// Boundary voxels are those whose closed extent comes within eps of the
/// mesh (separating-axis overlap, plus exact distance when eps > 0);
/// Exterior is flood-filled from the rim with 6-connectivity; the rest is
/// Interior.
[[nodiscard]] inline VoxelClassification classify_voxels(const TriMesh& m, const VoxelGrid& grid) {
    const MeshChecks chk = mesh_checks(m);
    if (!chk.closed)
        throw std::invalid_argument("classify_voxels: mesh is not closed and coherently oriented");
    if (!(m.eps >= 0.0))
        throw std::invalid_argument("classify_voxels: mesh eps must be >= 0");
    const Box3 bb = mesh_bounding_box(m);
    const double eps = m.eps;
    if (bb.x0 - eps <= grid.bounds.x0 || bb.x1 + eps >= grid.bounds.x1 ||
        bb.y0 - eps <= grid.bounds.y0 || bb.y1 + eps >= grid.bounds.y1 ||
        bb.z0 - eps <= grid.bounds.z0 || bb.z1 + eps >= grid.bounds.z1)
        throw std::domain_error("classify_voxels: grid bounds must strictly contain the dilated mesh");

    const std::int64_t n = grid.cells_per_axis();
    const std::size_t ncells = static_cast<std::size_t>(n) * n * n;
    const double hx = grid.hx(), hy = grid.hy(), hz = grid.hz();

    const unsigned workers = std::max(1u, thread_count());
    const std::size_t ntri = m.triangles.size();
    const std::size_t chunk = (ntri + workers - 1) / workers;
    std::vector<std::vector<std::uint8_t>> marks(workers);

    auto mark_triangles = [&](unsigned w) {
        const std::size_t lo = std::min(ntri, static_cast<std::size_t>(w) * chunk);
        const std::size_t hi = std::min(ntri, lo + chunk);
        if (lo >= hi) return;
        auto& bm = marks[w];
        bm.assign(ncells, 0);
        for (std::size_t s = lo; s < hi; ++s) {
            const auto& t = m.triangles[s];
            const Vec3 a = m.vertices[t[0]], b = m.vertices[t[1]], c = m.vertices[t[2]];
            const double x0 = std::min({a.x, b.x, c.x}) - eps, x1 = std::max({a.x, b.x, c.x}) + eps;
            const double y0 = std::min({a.y, b.y, c.y}) - eps, y1 = std::max({a.y, b.y, c.y}) + eps;
            const double z0 = std::min({a.z, b.z, c.z}) - eps, z1 = std::max({a.z, b.z, c.z}) + eps;
            const auto clampi = [n](std::int64_t v) { return std::clamp<std::int64_t>(v, 0, n - 1); };
            const std::int64_t i0 = clampi(static_cast<std::int64_t>(std::floor((x0 - grid.bounds.x0) / hx)) - 1);
            const std::int64_t i1 = clampi(static_cast<std::int64_t>(std::floor((x1 - grid.bounds.x0) / hx)) + 1);
            const std::int64_t j0 = clampi(static_cast<std::int64_t>(std::floor((y0 - grid.bounds.y0) / hy)) - 1);
            const std::int64_t j1 = clampi(static_cast<std::int64_t>(std::floor((y1 - grid.bounds.y0) / hy)) + 1);
            const std::int64_t k0 = clampi(static_cast<std::int64_t>(std::floor((z0 - grid.bounds.z0) / hz)) - 1);
            const std::int64_t k1 = clampi(static_cast<std::int64_t>(std::floor((z1 - grid.bounds.z0) / hz)) + 1);
            for (std::int64_t k = k0; k <= k1; ++k) {
                for (std::int64_t j = j0; j <= j1; ++j) {
                    for (std::int64_t i = i0; i <= i1; ++i) {
                        const Box3 box = grid.voxel_box({static_cast<std::int32_t>(i),
                                                         static_cast<std::int32_t>(j),
                                                         static_cast<std::int32_t>(k)});
                        bool hit;
                        if (eps == 0.0) {
                            const Vec3 center{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1),
                                              0.5 * (box.z0 + box.z1)};
                            const Vec3 half{0.5 * box.width(), 0.5 * box.height(), 0.5 * box.depth()};
                            hit = detail::tri_box_overlap(center, half, a, b, c);
                        } else {
                            hit = detail::tri_box_dist(a, b, c, box) <= eps;
                        }
                        if (hit) bm[(static_cast<std::size_t>(k) * n + j) * n + i] = 1;
                    }
                }
            }
        }
    };
    if (workers <= 1) {
        mark_triangles(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(mark_triangles, w);
        for (auto& t : pool) t.join();
    }

    constexpr std::uint8_t kUnknown = 255;
    std::vector<std::uint8_t> labels(ncells, kUnknown);
    for (const auto& bm : marks) {
        if (bm.empty()) continue;
        for (std::size_t k = 0; k < ncells; ++k)
            if (bm[k]) labels[k] = static_cast<std::uint8_t>(VoxelLabel::Boundary);
    }

    auto idx = [n](std::int64_t i, std::int64_t j, std::int64_t k) {
        return (static_cast<std::size_t>(k) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(n) +
               static_cast<std::size_t>(i);
    };
    std::vector<std::array<std::int32_t, 3>> stack;
    auto push_exterior = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
        const std::size_t q = idx(i, j, k);
        if (labels[q] == static_cast<std::uint8_t>(VoxelLabel::Boundary))
            throw std::domain_error("classify_voxels: dilated mesh reaches the grid rim; enlarge the box");
        if (labels[q] == kUnknown) {
            labels[q] = static_cast<std::uint8_t>(VoxelLabel::Exterior);
            stack.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                             static_cast<std::int32_t>(k)});
        }
    };
    for (std::int64_t a = 0; a < n; ++a) {
        for (std::int64_t b = 0; b < n; ++b) {
            push_exterior(a, b, 0);
            push_exterior(a, b, n - 1);
            push_exterior(a, 0, b);
            push_exterior(a, n - 1, b);
            push_exterior(0, a, b);
            push_exterior(n - 1, a, b);
        }
    }
    while (!stack.empty()) {
        const auto [ci, cj, ck] = stack.back();
        stack.pop_back();
        constexpr std::int32_t dd[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                           {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        for (const auto& d : dd) {
            const std::int64_t ni = ci + d[0], nj = cj + d[1], nk = ck + d[2];
            if (ni < 0 || nj < 0 || nk < 0 || ni >= n || nj >= n || nk >= n) continue;
            const std::size_t q = idx(ni, nj, nk);
            if (labels[q] == kUnknown) {
                labels[q] = static_cast<std::uint8_t>(VoxelLabel::Exterior);
                stack.push_back({static_cast<std::int32_t>(ni), static_cast<std::int32_t>(nj),
                                 static_cast<std::int32_t>(nk)});
            }
        }
    }

    std::vector<VoxelLabel> out(ncells);
    for (std::size_t q = 0; q < ncells; ++q)
        out[q] = labels[q] == kUnknown ? VoxelLabel::Interior : static_cast<VoxelLabel>(labels[q]);
    return VoxelClassification(grid, std::move(out));
}

/// Additive function of axis-parallel boxes, the 3D analog of
/// RectangleFunction.
struct BoxFunction {
    std::function<double(const Box3&)> eval;
    std::string name;
    AbsContinuity abs_continuity = AbsContinuity::Unknown;

    double operator()(const Box3& b) const { return eval(b); }
};

[[nodiscard]] inline BoxFunction volume_function() {
    return {[](const Box3& b) { return box_volume(b); }, "volume", AbsContinuity::Yes};
}

namespace detail {

/// Outward flux through the 6 faces with globally aligned tensor panels.
/// Opposite faces are integrated with identical absolute panel/node sets
/// and subtracted pairwise, so a constant field cancels bitwise.
inline double box_flux(const VectorField3& v, const Box3& b, const GaussLegendre& gl,
                       double panel_width) {
    if (!b.valid()) throw std::invalid_argument("box_flux: invalid box");
    if (b.degenerate()) return 0.0;
    const auto face_x = [&](double x) {
        return integrate_rect([&](double y, double z) { return v.u(x, y, z); },
                              b.y0, b.y1, b.z0, b.z1, gl, panel_width);
    };
    const auto face_y = [&](double y) {
        return integrate_rect([&](double x, double z) { return v.v(x, y, z); },
                              b.x0, b.x1, b.z0, b.z1, gl, panel_width);
    };
    const auto face_z = [&](double z) {
        return integrate_rect([&](double x, double y) { return v.w(x, y, z); },
                              b.x0, b.x1, b.y0, b.y1, gl, panel_width);
    };
    KahanSum acc;
    acc.add(face_x(b.x1) - face_x(b.x0));
    acc.add(face_y(b.y1) - face_y(b.y0));
    acc.add(face_z(b.z1) - face_z(b.z0));
    return acc.value();
}

} // namespace detail

[[nodiscard]] inline BoxFunction flux_function(const VectorField3& v, const QuadratureSpec& q = {}) {
    auto gl = std::make_shared<GaussLegendre>(q.order);
    const double pw = q.panel_width;
    return {[v, gl, pw](const Box3& b) { return detail::box_flux(v, b, *gl, pw); },
            "flux[" + v.name + "]", AbsContinuity::Unknown};
}

[[nodiscard]] inline double box_additivity_defect(const BoxFunction& F, const Box3& b, Axis3 axis,
                                                  double c) {
    const auto [lo, hi] = split_box(b, axis, c);
    return std::abs(F(b) - F(lo) - F(hi));
}

/// Sum of F over the boxes of the given voxels in their stored order.
[[nodiscard]] inline double evaluate_on_voxels(const BoxFunction& F, const VoxelGrid& grid,
                                               const std::vector<Voxel>& voxels) {
    return parallel_kahan_sum(voxels.size(),
                              [&](std::size_t i) { return F(grid.voxel_box(voxels[i])); });
}

// --- direct surface flux ---------------------------------------------------

struct SurfaceFluxResult {
    double value = 0.0;
    double coarse = 0.0;
    double delta = 0.0;
    bool settled = false;
    std::size_t triangles = 0;
};

namespace detail {

struct TriTerm {
    double value;
    double magnitude;
};

/// Flux of v through one triangle, subdivided 4^depth times at edge
/// midpoints (the subdivision stays on the flat triangle: the mesh is the
/// surface under test).  Centroid rule per leaf; flux element is
/// v(centroid) . (e1 x e2) / 2.
inline void tri_flux_terms(const VectorField3& v, Vec3 a, Vec3 b, Vec3 c, int depth,
                           TriTerm& acc) {
    if (depth == 0) {
        const Vec3 n2 = cross(b - a, c - a); // twice the area-weighted normal
        const Vec3 g = (1.0 / 3.0) * (a + b + c);
        const double term =
            0.5 * (v.u(g.x, g.y, g.z) * n2.x + v.v(g.x, g.y, g.z) * n2.y + v.w(g.x, g.y, g.z) * n2.z);
        acc.value += term;
        acc.magnitude += std::abs(term);
        return;
    }
    const Vec3 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    tri_flux_terms(v, a, ab, ca, depth - 1, acc);
    tri_flux_terms(v, ab, b, bc, depth - 1, acc);
    tri_flux_terms(v, ca, bc, c, depth - 1, acc);
    tri_flux_terms(v, ab, bc, ca, depth - 1, acc);
}

inline PolylineSum mesh_flux_sum(const VectorField3& v, const TriMesh& m, int depth) {
    const std::size_t n = m.triangles.size();
    std::vector<double> terms(n);
    std::vector<double> mags(n);
    parallel_for(n, [&](std::size_t i) {
        const auto& t = m.triangles[i];
        TriTerm acc{0.0, 0.0};
        tri_flux_terms(v, m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]], depth, acc);
        terms[i] = acc.value;
        mags[i] = acc.magnitude;
    });
    KahanSum acc;
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(terms[i]);
        mag += mags[i];
    }
    return {acc.value(), mag};
}

} // namespace detail

[[nodiscard]] inline SurfaceFluxResult surface_flux_checked(const VectorField3& v, const TriMesh& m,
                                                            int refine_depth) {
    if (refine_depth < 0)
        throw std::invalid_argument("surface_flux: refine_depth must be >= 0");
    const MeshChecks chk = mesh_checks(m);
    if (!chk.closed)
        throw std::invalid_argument("surface_flux: mesh is not closed and coherently oriented");
    const int coarse_depth = std::max(0, refine_depth - 1);
    const auto cs = detail::mesh_flux_sum(v, m, coarse_depth);
    const auto fs = refine_depth == 0 ? cs : detail::mesh_flux_sum(v, m, refine_depth);
    SurfaceFluxResult r;
    r.value = fs.value;
    r.coarse = cs.value;
    r.delta = fs.value - cs.value;
    r.settled = std::abs(r.delta) <= 10.0 * DBL_EPSILON * fs.magnitude;
    r.triangles = m.triangles.size() << (2 * refine_depth);
    return r;
}

[[nodiscard]] inline double surface_flux(const VectorField3& v, const TriMesh& m, int refine_depth) {
    return surface_flux_checked(v, m, refine_depth).value;
}

// --- convergence studies over voxel grids ----------------------------------

[[nodiscard]] inline Box3 default_bounding_box3(const TriMesh& m, int coarsest_level) {
    const Box3 bb = mesh_bounding_box(m);
    const double eps = m.eps;
    double pad[3] = {0.25 * bb.width() + eps, 0.25 * bb.height() + eps, 0.25 * bb.depth() + eps};
    if (coarsest_level >= 3) {
        const double scale = static_cast<double>(std::int64_t{1} << coarsest_level);
        pad[0] = std::max(pad[0], 2.0 * bb.width() / (scale - 4.0));
        pad[1] = std::max(pad[1], 2.0 * bb.height() / (scale - 4.0));
        pad[2] = std::max(pad[2], 2.0 * bb.depth() / (scale - 4.0));
    }
    return Box3{bb.x0 - pad[0], bb.x1 + pad[0], bb.y0 - pad[1],
                bb.y1 + pad[1], bb.z0 - pad[2], bb.z1 + pad[2]};
}

[[nodiscard]] inline Box3 resolve_bounds3(const TriMesh& m, int n_min, std::optional<Box3> user) {
    return user ? *user : default_bounding_box3(m, n_min);
}

/// Inner/outer volume bracket per level; the 3D Jordan content study.
[[nodiscard]] inline ConvergenceReport jordan_volume(const TriMesh& m, int n_min, int n_max,
                                                     std::optional<Box3> bounds = {}) {
    const Box3 box = resolve_bounds3(m, n_min, bounds);
    return detail::run_levels(n_min, n_max, std::nullopt, [&](int n) {
        const auto cls = classify_voxels(m, VoxelGrid{box, n});
        LevelRow row;
        row.level = n;
        row.h = cls.grid().h();
        row.inner = cls.inner_volume();
        row.outer = cls.outer_volume();
        row.gap = row.outer - row.inner;
        row.inner_area = row.inner;
        row.outer_area = row.outer;
        row.boundary_cells = cls.count(VoxelLabel::Boundary);
        row.boundary_perimeter = cls.boundary_face_area();
        return row;
    });
}

/// Figure integral of a box function over the region enclosed by the
/// mesh: F on inner and outer voxel figures per dyadic level.
[[nodiscard]] inline ConvergenceReport box_figure_integral(const BoxFunction& F, const TriMesh& m,
                                                           int n_min, int n_max,
                                                           std::optional<double> tol = {},
                                                           std::optional<Box3> bounds = {}) {
    if (tol && !(*tol > 0.0))
        throw std::invalid_argument("box_figure_integral: tolerance must be > 0");
    const Box3 box = resolve_bounds3(m, n_min, bounds);
    return detail::run_levels(n_min, n_max, tol, [&](int n) {
        const VoxelGrid grid{box, n};
        const auto cls = classify_voxels(m, grid);
        LevelRow row;
        row.level = n;
        row.h = grid.h();
        row.inner = evaluate_on_voxels(F, grid, cls.inner_voxels());
        row.outer = evaluate_on_voxels(F, grid, cls.outer_voxels());
        row.gap = std::abs(row.outer - row.inner);
        row.inner_area = cls.inner_volume();
        row.outer_area = cls.outer_volume();
        row.boundary_cells = cls.count(VoxelLabel::Boundary);
        row.boundary_perimeter = cls.boundary_face_area();
        return row;
    });
}

struct GaussParams {
    int n_min = 3;
    int n_max = 6;
    std::optional<Box3> bounds;
    double tol_flux = 1e-4;            // lhs tolerance, analog of tol_line
    std::optional<double> tol_figure;  // default: achieved gap at finest level
    QuadratureSpec quadrature;         // panel_width <= 0: finest voxel side
    int flux_depth = 2;                // surface subdivision depth for the lhs
};

struct GaussReport {
    SurfaceFluxResult lhs_check;
    double lhs = 0.0;
    ConvergenceReport rhs;
    int orientation = +1; // sign of the mesh's signed volume
    double discrepancy = 0.0;
    bool bracket = false;
    bool pass = false;
    double tol_flux = 0.0;
    double tol_figure = 0.0;
    double tol_total = 0.0;
};

[[nodiscard]] inline QuadratureSpec resolve_quadrature3(QuadratureSpec q, const Box3& bounds, int n_max) {
    if (q.panel_width <= 0.0) {
        const VoxelGrid finest{bounds, n_max};
        q.panel_width = std::min({finest.hx(), finest.hy(), finest.hz()});
    }
    return q;
}

[[nodiscard]] inline GaussReport gauss_verify(const VectorField3& v, const TriMesh& m,
                                              const GaussParams& params = {}) {
    if (!(params.tol_flux > 0.0))
        throw std::invalid_argument("gauss_verify: tol_flux must be > 0");
    if (params.tol_figure && !(*params.tol_figure > 0.0))
        throw std::invalid_argument("gauss_verify: tol_figure must be > 0");

    const MeshChecks chk = mesh_checks(m);
    if (!chk.closed)
        throw std::invalid_argument("gauss_verify: mesh is not closed and coherently oriented");
    const Box3 box = resolve_bounds3(m, params.n_min, params.bounds);
    const QuadratureSpec q = resolve_quadrature3(params.quadrature, box, params.n_max);

    GaussReport rep;
    rep.lhs_check = surface_flux_checked(v, m, params.flux_depth);
    rep.lhs = rep.lhs_check.value;
    rep.rhs = box_figure_integral(flux_function(v, q), m, params.n_min, params.n_max,
                                  params.tol_figure, box);
    rep.orientation = chk.signed_volume >= 0.0 ? +1 : -1;

    const double s = static_cast<double>(rep.orientation);
    rep.discrepancy = std::abs(rep.lhs - s * rep.rhs.estimate);
    const LevelRow& fin = rep.rhs.last();
    const double lo = std::min(s * fin.inner, s * fin.outer) - params.tol_flux;
    const double hi = std::max(s * fin.inner, s * fin.outer) + params.tol_flux;
    rep.bracket = lo <= rep.lhs && rep.lhs <= hi;

    rep.tol_flux = params.tol_flux;
    rep.tol_figure = rep.rhs.tolerance;
    rep.tol_total = rep.tol_flux + rep.tol_figure;
    rep.pass = rep.rhs.converged && rep.discrepancy <= rep.tol_total && rep.bracket;
    return rep;
}

struct VoxelAreaAudit {
    double total_face_area = 0.0;
    double bound = 0.0; // 24 * mesh area + 24 * h * total edge length
    double ratio = 0.0;
};

/// Audits the boundary-cover face-area sum against the uniform-voxel
/// weakening of the surface-cover bound.
[[nodiscard]] inline VoxelAreaAudit voxel_area_audit(const TriMesh& m, const VoxelGrid& grid) {
    const MeshChecks chk = mesh_checks(m);
    const VoxelClassification cls = classify_voxels(m, grid);
    VoxelAreaAudit a;
    a.total_face_area = cls.boundary_face_area();
    a.bound = 24.0 * chk.area + 24.0 * grid.h() * chk.total_edge_length;
    a.ratio = a.total_face_area / a.bound;
    return a;
}

inline constexpr const char* kGaussCsvHeader =
    "lhs,rhs_estimate,discrepancy,gap,bracket,converged,pass,orientation,tol_flux,tol_figure,tol_total\n";

[[nodiscard]] inline std::string gauss_csv(const GaussReport& rep) {
    std::string out = kCsvSchemaLine;
    out += kGaussCsvHeader;
    detail::csv_number(out, rep.lhs);
    out += ',';
    detail::csv_number(out, rep.rhs.estimate);
    out += ',';
    detail::csv_number(out, rep.discrepancy);
    out += ',';
    detail::csv_number(out, rep.rhs.last().gap);
    out += ',';
    detail::csv_int(out, rep.bracket ? 1 : 0);
    out += ',';
    detail::csv_int(out, rep.rhs.converged ? 1 : 0);
    out += ',';
    detail::csv_int(out, rep.pass ? 1 : 0);
    out += ',';
    detail::csv_int(out, rep.orientation);
    out += ',';
    detail::csv_number(out, rep.tol_flux);
    out += ',';
    detail::csv_number(out, rep.tol_figure);
    out += ',';
    detail::csv_number(out, rep.tol_total);
    out += '\n';
    out += kLevelCsvHeader;
    append_level_rows(out, rep.rhs);
    return out;
}

} // namespace figint

#endif // FIGINT_GAUSS3D_HPP

#ifndef FIGINT_SHAPES_HPP
#define FIGINT_SHAPES_HPP

/// Named test regions and surfaces: unit square, inscribed-polygon disk,
/// L-shaped hexagon, unit cube mesh, icosphere.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "figint/gauss3d.hpp"
#include "figint/region2d.hpp"

namespace figint {

/// Counterclockwise unit square [0,1]^2.
[[nodiscard]] inline Curve make_square_curve() {
    return Curve::make({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

/// Regular n-gon inscribed in the unit circle, counterclockwise.  The
/// declared error is the sagitta 1 - cos(pi/n): the circle bulges at most
/// that far outside each chord.
[[nodiscard]] inline Curve make_disk_curve(int n) {
    if (n < 3) throw std::invalid_argument("make_disk_curve: need at least 3 vertices");
    std::vector<Point2> v;
    v.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        v.push_back({std::cos(t), std::sin(t)});
    }
    const double eps = 1.0 - std::cos(std::numbers::pi / static_cast<double>(n));
    return Curve::make(std::move(v), eps);
}

/// L-shaped hexagon (the unit 2x2 square minus its upper-right quarter),
/// counterclockwise, area 3.
[[nodiscard]] inline Curve make_lshape_curve() {
    return Curve::make({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
}

/// Unit cube [0,1]^3 as 12 outward-oriented triangles.
[[nodiscard]] inline TriMesh make_cube_mesh() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                  {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    m.triangles = {{0, 2, 1}, {0, 3, 2},  // z = 0
                   {4, 5, 6}, {4, 6, 7},  // z = 1
                   {0, 1, 5}, {0, 5, 4},  // y = 0
                   {3, 7, 6}, {3, 6, 2},  // y = 1
                   {0, 4, 7}, {0, 7, 3},  // x = 0
                   {1, 2, 6}, {1, 6, 5}}; // x = 1
    return m;
}

/// Icosphere: icosahedron subdivided `depth` times, each new vertex
/// projected to the unit sphere at construction.  The returned polyhedron
/// itself is the surface under test (eps = 0): no further projection
/// happens downstream.
[[nodiscard]] inline TriMesh make_icosphere(int depth) {
    if (depth < 0 || depth > 7)
        throw std::invalid_argument("make_icosphere: depth must be in 0..7");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                  {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                  {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : m.vertices) v = (1.0 / norm(v)) * v;
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                   {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                   {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                   {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int d = 0; d < depth; ++d) {
        std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> midpoint;
        auto mid = [&](std::int32_t a, std::int32_t b) {
            const auto key = std::minmax(a, b);
            if (const auto it = midpoint.find(key); it != midpoint.end()) return it->second;
            Vec3 p = 0.5 * (m.vertices[a] + m.vertices[b]);
            p = (1.0 / norm(p)) * p;
            const auto idx = static_cast<std::int32_t>(m.vertices.size());
            m.vertices.push_back(p);
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<std::int32_t, 3>> next;
        next.reserve(m.triangles.size() * 4);
        for (const auto& tri : m.triangles) {
            const std::int32_t ab = mid(tri[0], tri[1]);
            const std::int32_t bc = mid(tri[1], tri[2]);
            const std::int32_t ca = mid(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({ab, tri[1], bc});
            next.push_back({ca, bc, tri[2]});
            next.push_back({ab, bc, ca});
        }
        m.triangles = std::move(next);
    }

    // orientation guard: outward normals mean positive signed volume
    if (mesh_checks(m).signed_volume < 0.0)
        for (auto& tri : m.triangles) std::swap(tri[1], tri[2]);
    return m;
}

} // namespace figint

#endif // FIGINT_SHAPES_HPP

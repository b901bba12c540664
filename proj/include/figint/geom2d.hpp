#ifndef FIGINT_GEOM2D_HPP
#define FIGINT_GEOM2D_HPP

/// Exact axis-parallel rectangle and figure algebra.
///
/// A Figure is a finite union of axis-parallel rectangles with pairwise
/// disjoint interiors; shared edges are permitted and degenerate (zero
/// area) rectangles are legal values.  Figures assembled from the cells
/// of one dyadic grid keep their cell indices, which makes the non-overlap
/// invariant structural and allows oriented boundary-edge extraction with
/// interior-edge cancellation.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "figint/numeric.hpp"

namespace figint {

struct Point2 {
    double x = 0;
    double y = 0;

    constexpr bool operator==(const Point2&) const = default;
};

enum class Axis2 : std::uint8_t { X, Y };

/// Closed axis-parallel rectangle [x0,x1] x [y0,y1].  Degenerate spans
/// (x0 == x1 or y0 == y1) are allowed and carry zero area.
struct Rect {
    double x0 = 0, x1 = 0;
    double y0 = 0, y1 = 0;

    constexpr bool operator==(const Rect&) const = default;

    [[nodiscard]] constexpr bool valid() const noexcept { return x0 <= x1 && y0 <= y1; }
    [[nodiscard]] constexpr bool degenerate() const noexcept { return x0 == x1 || y0 == y1; }
    [[nodiscard]] constexpr double width() const noexcept { return x1 - x0; }
    [[nodiscard]] constexpr double height() const noexcept { return y1 - y0; }
    [[nodiscard]] constexpr bool contains(Point2 p) const noexcept {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

[[nodiscard]] constexpr double rect_area(const Rect& r) noexcept {
    return (r.x1 - r.x0) * (r.y1 - r.y0);
}

[[nodiscard]] constexpr double rect_perimeter(const Rect& r) noexcept {
    return 2.0 * (r.x1 - r.x0) + 2.0 * (r.y1 - r.y0);
}

/// Splits r at coordinate c, which must lie strictly inside the span on
/// the given axis.  The two halves tile r and share one edge.
[[nodiscard]] inline std::pair<Rect, Rect> split_rect(const Rect& r, Axis2 axis, double c) {
    if (axis == Axis2::X) {
        if (!(c > r.x0 && c < r.x1))
            throw std::domain_error("split_rect: cut not strictly inside x-span");
        return {Rect{r.x0, c, r.y0, r.y1}, Rect{c, r.x1, r.y0, r.y1}};
    }
    if (!(c > r.y0 && c < r.y1))
        throw std::domain_error("split_rect: cut not strictly inside y-span");
    return {Rect{r.x0, r.x1, r.y0, c}, Rect{r.x0, r.x1, c, r.y1}};
}

struct Cell {
    std::int32_t i = 0; // column (x)
    std::int32_t j = 0; // row (y)

    constexpr bool operator==(const Cell&) const = default;
    constexpr auto operator<=>(const Cell&) const = default;
};

/// Uniform 2^n x 2^n partition of a bounding rectangle.  Cell corners are
/// affine dyadic coordinates of the bounds, so the four level-(n+1)
/// children of a cell tile it exactly, bitwise.
struct DyadicGrid {
    Rect bounds;
    int level = 0;

    DyadicGrid() = default;
    DyadicGrid(Rect b, int n) : bounds(b), level(n) {
        if (!b.valid() || b.degenerate())
            throw std::invalid_argument("DyadicGrid: bounds must be a non-degenerate rectangle");
        if (n < 0 || n > 30)
            throw std::invalid_argument("DyadicGrid: level out of range");
    }

    [[nodiscard]] std::int64_t cells_per_axis() const noexcept { return std::int64_t{1} << level; }
    [[nodiscard]] double hx() const noexcept { return bounds.width() / static_cast<double>(cells_per_axis()); }
    [[nodiscard]] double hy() const noexcept { return bounds.height() / static_cast<double>(cells_per_axis()); }
    /// Largest cell side; the h reported in convergence tables.
    [[nodiscard]] double h() const noexcept { return std::max(hx(), hy()); }

    [[nodiscard]] bool in_range(Cell c) const noexcept {
        const auto n = cells_per_axis();
        return c.i >= 0 && c.j >= 0 && c.i < n && c.j < n;
    }

    [[nodiscard]] Rect cell_rect(Cell c) const noexcept {
        const double w = hx(), h = hy();
        return Rect{bounds.x0 + c.i * w, bounds.x0 + (c.i + 1) * w,
                    bounds.y0 + c.j * h, bounds.y0 + (c.j + 1) * h};
    }

    [[nodiscard]] DyadicGrid refined() const { return DyadicGrid(bounds, level + 1); }

    constexpr bool operator==(const DyadicGrid&) const = default;
};

/// Finite union of non-overlapping rectangles.  When assembled from grid
/// cells the grid and sorted cell list are kept alongside the explicit
/// rectangles; operations that need cell adjacency (boundary extraction,
/// refinement) require that provenance.
struct Figure {
    std::vector<Rect> rects;
    std::optional<DyadicGrid> grid;
    std::vector<Cell> cells; // sorted (j, i); parallel to rects when grid is set

    [[nodiscard]] bool from_grid() const noexcept { return grid.has_value(); }
    [[nodiscard]] std::size_t size() const noexcept { return rects.size(); }
    [[nodiscard]] bool empty() const noexcept { return rects.empty(); }
};

/// Area of a figure.  Grid figures have equal-area cells, so the sum is a
/// single product; this keeps inner/outer areas exactly monotone under
/// dyadic refinement (rounding a scaled product is monotone).  Explicit
/// rect lists are reduced in index order with compensated summation.
[[nodiscard]] inline double figure_area(const Figure& f) noexcept {
    if (f.from_grid()) {
        const double cell = f.grid->hx() * f.grid->hy();
        return static_cast<double>(f.cells.size()) * cell;
    }
    KahanSum acc;
    for (const Rect& r : f.rects) acc.add(rect_area(r));
    return acc.value();
}

[[nodiscard]] inline Figure figure_from_rects(std::vector<Rect> rects) {
    for (const Rect& r : rects)
        if (!r.valid()) throw std::invalid_argument("figure_from_rects: invalid rectangle");
    // degenerate pieces contribute nothing; drop them
    std::erase_if(rects, [](const Rect& r) { return r.degenerate(); });
    Figure f;
    f.rects = std::move(rects);
    return f;
}

[[nodiscard]] inline Figure figure_from_cells(const DyadicGrid& grid, std::vector<Cell> cells) {
    for (Cell c : cells)
        if (!grid.in_range(c)) throw std::out_of_range("figure_from_cells: cell index out of range");
    std::sort(cells.begin(), cells.end(),
              [](Cell a, Cell b) { return std::pair(a.j, a.i) < std::pair(b.j, b.i); });
    if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
        throw std::invalid_argument("figure_from_cells: duplicate cell");
    Figure f;
    f.grid = grid;
    f.rects.reserve(cells.size());
    for (Cell c : cells) f.rects.push_back(grid.cell_rect(c));
    f.cells = std::move(cells);
    return f;
}

/// Replaces every cell by its four level-(n+1) children.  The covered
/// point set, and hence figure_area, is unchanged.
[[nodiscard]] inline Figure refine_figure(const Figure& f) {
    if (!f.from_grid())
        throw std::invalid_argument("refine_figure: figure has no grid provenance");
    std::vector<Cell> kids;
    kids.reserve(f.cells.size() * 4);
    for (Cell c : f.cells) {
        kids.push_back({2 * c.i, 2 * c.j});
        kids.push_back({2 * c.i + 1, 2 * c.j});
        kids.push_back({2 * c.i, 2 * c.j + 1});
        kids.push_back({2 * c.i + 1, 2 * c.j + 1});
    }
    return figure_from_cells(f.grid->refined(), std::move(kids));
}

/// One axis-parallel boundary edge, oriented.  For horizontal edges the
/// fixed coordinate is y and the span is in x; sign +1 means traversal in
/// the increasing direction.  Counterclockwise cell traversal yields
/// bottom +, right +, top -, left -.
struct OrientedEdge {
    Axis2 axis = Axis2::X; // X: horizontal edge (span in x), Y: vertical edge (span in y)
    double fixed = 0;
    double lo = 0, hi = 0;
    int sign = +1;

    [[nodiscard]] double length() const noexcept { return hi - lo; }
};

/// Oriented boundary of a grid figure.  Each cell contributes its four
/// sides CCW; a side shared by two cells is traversed twice in opposite
/// directions and cancels, so only the topological boundary remains.
/// Edges are emitted per cell and not merged.
[[nodiscard]] inline std::vector<OrientedEdge> figure_boundary_edges(const Figure& f) {
    if (!f.from_grid())
        throw std::invalid_argument("figure_boundary_edges: figure must come from one grid");
    const DyadicGrid& g = *f.grid;
    const std::int64_t n = g.cells_per_axis();
    // occupancy bitmap for O(1) neighbour lookups
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    auto at = [&](std::int64_t i, std::int64_t j) -> std::uint8_t& {
        return occ[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
    };
    for (Cell c : f.cells) at(c.i, c.j) = 1;
    auto present = [&](std::int64_t i, std::int64_t j) {
        return i >= 0 && j >= 0 && i < n && j < n && at(i, j) != 0;
    };

    std::vector<OrientedEdge> edges;
    for (std::size_t k = 0; k < f.cells.size(); ++k) {
        const Cell c = f.cells[k];
        const Rect r = f.rects[k];
        if (!present(c.i, c.j - 1)) edges.push_back({Axis2::X, r.y0, r.x0, r.x1, +1}); // bottom
        if (!present(c.i + 1, c.j)) edges.push_back({Axis2::Y, r.x1, r.y0, r.y1, +1}); // right
        if (!present(c.i, c.j + 1)) edges.push_back({Axis2::X, r.y1, r.x0, r.x1, -1}); // top
        if (!present(c.i - 1, c.j)) edges.push_back({Axis2::Y, r.x0, r.y0, r.y1, -1}); // left
    }
    return edges;
}

} // namespace figint

#endif // FIGINT_GEOM2D_HPP

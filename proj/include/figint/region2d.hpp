#ifndef FIGINT_REGION2D_HPP
#define FIGINT_REGION2D_HPP

/// Rectifiable closed curves and classification of dyadic grid cells into
/// Interior / Boundary / Exterior relative to the Jordan region a curve
/// bounds.
///
/// A Curve is a simple closed polyline (last vertex joins the first) with
/// a declared approximation error eps >= 0: the ideal curve it samples
/// lies within distance eps of the polyline.  Classification dilates the
/// polyline by eps, so Boundary cells are exactly the cells whose closed
/// extent comes within eps of it; any cell that merely touches the
/// polyline is Boundary (conservative tie-break), which keeps
/// inner figure <= region <= outer figure guaranteed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "figint/geom2d.hpp"
#include "figint/numeric.hpp"

namespace figint {

namespace detail {

inline double dot2(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double cross2(Point2 a, Point2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline Point2 sub2(Point2 a, Point2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
inline double dist2(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

inline double point_segment_dist(Point2 p, Point2 a, Point2 b) noexcept {
    const Point2 ab = sub2(b, a);
    const double len2 = dot2(ab, ab);
    if (len2 == 0.0) return dist2(p, a);
    const double t = std::clamp(dot2(sub2(p, a), ab) / len2, 0.0, 1.0);
    return dist2(p, Point2{a.x + t * ab.x, a.y + t * ab.y});
}

inline double point_rect_dist(Point2 p, const Rect& r) noexcept {
    const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
    const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
    return std::hypot(dx, dy);
}

/// Liang-Barsky: does the closed segment meet the closed rectangle?
inline bool segment_intersects_rect(Point2 a, Point2 b, const Rect& r) noexcept {
    double t0 = 0.0, t1 = 1.0;
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - r.x0, r.x1 - a.x, a.y - r.y0, r.y1 - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false; // parallel and outside
        } else {
            const double t = q[i] / p[i];
            if (p[i] < 0.0)
                t0 = std::max(t0, t);
            else
                t1 = std::min(t1, t);
            if (t0 > t1) return false;
        }
    }
    return true;
}

/// Distance between a closed segment and a closed rectangle (0 if they
/// meet).  When disjoint, the minimum is attained either at a segment
/// endpoint or at a rectangle corner.
inline double segment_rect_dist(Point2 a, Point2 b, const Rect& r) noexcept {
    if (segment_intersects_rect(a, b, r)) return 0.0;
    double d = std::min(point_rect_dist(a, r), point_rect_dist(b, r));
    const Point2 corners[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    for (const Point2& c : corners) d = std::min(d, point_segment_dist(c, a, b));
    return d;
}

/// Proper or touching intersection of closed segments [a,b] and [c,d].
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) noexcept {
    const auto orient = [](Point2 p, Point2 q, Point2 s) {
        const double v = cross2(sub2(q, p), sub2(s, p));
        return (v > 0.0) - (v < 0.0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    const auto on = [](Point2 p, Point2 q, Point2 s) {
        return std::min(p.x, q.x) <= s.x && s.x <= std::max(p.x, q.x) &&
               std::min(p.y, q.y) <= s.y && s.y <= std::max(p.y, q.y);
    };
    if (o1 == 0 && on(a, b, c)) return true;
    if (o2 == 0 && on(a, b, d)) return true;
    if (o3 == 0 && on(c, d, a)) return true;
    if (o4 == 0 && on(c, d, b)) return true;
    return false;
}

} // namespace detail

/// Simple closed rectifiable curve as an oriented polyline.  The vertex
/// list is not repeated: segment i runs from vertex i to vertex (i+1) mod n.
class Curve {
public:
    /// Validates and builds a curve: at least 3 vertices, no zero-length
    /// segment, nonzero signed area, simple (non-self-intersecting).
    static Curve make(std::vector<Point2> vertices, double eps = 0.0) {
        if (vertices.size() >= 2 && vertices.front() == vertices.back())
            vertices.pop_back(); // tolerate an explicitly repeated closing vertex
        if (vertices.size() < 3)
            throw std::invalid_argument("Curve: need at least 3 vertices");
        if (!(eps >= 0.0))
            throw std::invalid_argument("Curve: approximation error must be >= 0");
        Curve c(std::move(vertices), eps);
        if (c.signed_area() == 0.0)
            throw std::invalid_argument("Curve: signed area is zero");
        c.check_simple();
        return c;
    }

    [[nodiscard]] const std::vector<Point2>& vertices() const noexcept { return verts_; }
    [[nodiscard]] std::size_t segment_count() const noexcept { return verts_.size(); }
    [[nodiscard]] std::pair<Point2, Point2> segment(std::size_t i) const noexcept {
        return {verts_[i], verts_[(i + 1) % verts_.size()]};
    }
    [[nodiscard]] double epsilon() const noexcept { return eps_; }
    [[nodiscard]] double length() const noexcept { return arclen_.back(); }
    /// Cumulative arc length; arclen()[i] is the length up to vertex i.
    [[nodiscard]] const std::vector<double>& arclen() const noexcept { return arclen_; }
    [[nodiscard]] double signed_area() const noexcept { return signed_area_; }
    [[nodiscard]] int orientation_sign() const noexcept { return signed_area_ > 0.0 ? +1 : -1; }

    [[nodiscard]] Rect bounding_box() const noexcept {
        Rect r{verts_[0].x, verts_[0].x, verts_[0].y, verts_[0].y};
        for (const Point2& p : verts_) {
            r.x0 = std::min(r.x0, p.x);
            r.x1 = std::max(r.x1, p.x);
            r.y0 = std::min(r.y0, p.y);
            r.y1 = std::max(r.y1, p.y);
        }
        return r;
    }

    [[nodiscard]] Curve reversed() const {
        std::vector<Point2> v(verts_.rbegin(), verts_.rend());
        return Curve(std::move(v), eps_);
    }

    [[nodiscard]] double distance_to(Point2 p) const noexcept {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < segment_count(); ++i) {
            const auto [a, b] = segment(i);
            d = std::min(d, detail::point_segment_dist(p, a, b));
        }
        return d;
    }

private:
    friend Curve refine_curve(const Curve&, double);

    explicit Curve(std::vector<Point2> v, double eps) : verts_(std::move(v)), eps_(eps) {
        const std::size_t n = verts_.size();
        arclen_.resize(n + 1);
        arclen_[0] = 0.0;
        KahanSum len;
        KahanSum area2;
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 a = verts_[i];
            const Point2 b = verts_[(i + 1) % n];
            const double seg = detail::dist2(a, b);
            if (seg == 0.0)
                throw std::invalid_argument("Curve: zero-length segment");
            len.add(seg);
            arclen_[i + 1] = len.value();
            area2.add(detail::cross2(a, b));
        }
        signed_area_ = 0.5 * area2.value();
    }

    /// Self-intersection test with a uniform spatial hash over segment
    /// bounding boxes; adjacent segments are allowed to touch only at
    /// their shared vertex (collinear continuation is fine, backtracking
    /// is not).
    void check_simple() const {
        const std::size_t n = segment_count();
        const Rect bb = bounding_box();
        const int buckets = std::max<int>(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
        const double bw = std::max(bb.width(), 1e-300) / buckets;
        const double bh = std::max(bb.height(), 1e-300) / buckets;
        auto bucket_x = [&](double x) {
            return std::clamp(static_cast<int>((x - bb.x0) / bw), 0, buckets - 1);
        };
        auto bucket_y = [&](double y) {
            return std::clamp(static_cast<int>((y - bb.y0) / bh), 0, buckets - 1);
        };
        std::vector<std::vector<std::uint32_t>> grid(static_cast<std::size_t>(buckets) * buckets);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [a, b] = segment(i);
            const int ix0 = bucket_x(std::min(a.x, b.x)), ix1 = bucket_x(std::max(a.x, b.x));
            const int iy0 = bucket_y(std::min(a.y, b.y)), iy1 = bucket_y(std::max(a.y, b.y));
            for (int iy = iy0; iy <= iy1; ++iy)
                for (int ix = ix0; ix <= ix1; ++ix)
                    grid[static_cast<std::size_t>(iy) * buckets + ix].push_back(static_cast<std::uint32_t>(i));
        }
        for (const auto& cell : grid) {
            for (std::size_t p = 0; p < cell.size(); ++p) {
                for (std::size_t q = p + 1; q < cell.size(); ++q) {
                    const std::size_t i = cell[p], j = cell[q];
                    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
                    const auto [a, b] = segment(lo);
                    const auto [c, d] = segment(hi);
                    const bool adjacent = (hi == lo + 1) || (lo == 0 && hi == n - 1);
                    if (adjacent) {
                        // shared vertex; reject collinear backtracking
                        const Point2 u = detail::sub2(b, a);
                        const Point2 v = detail::sub2(d, c);
                        if (detail::cross2(u, v) == 0.0 && detail::dot2(u, v) < 0.0)
                            throw std::invalid_argument("Curve: polyline backtracks on itself");
                        continue;
                    }
                    if (detail::segments_intersect(a, b, c, d))
                        throw std::invalid_argument("Curve: polyline is self-intersecting");
                }
            }
        }
    }

    std::vector<Point2> verts_;
    std::vector<double> arclen_;
    double eps_ = 0.0;
    double signed_area_ = 0.0;
};

[[nodiscard]] inline double curve_length(const Curve& c) noexcept { return c.length(); }
[[nodiscard]] inline double curve_signed_area(const Curve& c) noexcept { return c.signed_area(); }

/// Splits every segment into 2^k equal parts until each is no longer than
/// max_seg.  The original vertices are kept, so the point set and the
/// total length are unchanged (up to lerp rounding); a curve that is
/// already fine enough is returned as-is.
[[nodiscard]] inline Curve refine_curve(const Curve& c, double max_seg) {
    if (!(max_seg > 0.0))
        throw std::domain_error("refine_curve: max_seg must be > 0");
    const std::size_t n = c.segment_count();
    bool fine = true;
    for (std::size_t i = 0; i < n && fine; ++i) {
        const auto [a, b] = c.segment(i);
        fine = detail::dist2(a, b) <= max_seg;
    }
    if (fine) return c;

    std::vector<Point2> out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = c.segment(i);
        const double len = detail::dist2(a, b);
        std::uint64_t parts = 1;
        while (len / static_cast<double>(parts) > max_seg) parts *= 2;
        for (std::uint64_t k = 0; k < parts; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(parts);
            out.push_back({std::lerp(a.x, b.x, t), std::lerp(a.y, b.y, t)});
        }
    }
    // midpoint insertion preserves simplicity; skip the O(n log n) recheck
    return Curve(std::move(out), c.epsilon());
}

/// Even-odd (crossing parity) membership test.  Returns nullopt when p is
/// within eps of the polyline, where membership is indeterminate.
[[nodiscard]] inline std::optional<bool> point_in_region(const Curve& c, Point2 p) {
    if (c.distance_to(p) <= c.epsilon()) return std::nullopt;
    bool inside = false;
    const std::size_t n = c.segment_count();
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = c.segment(i);
        if ((a.y <= p.y) != (b.y <= p.y)) {
            const double xcross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

enum class CellLabel : std::uint8_t { Interior, Boundary, Exterior };

/// Per-cell Interior/Boundary/Exterior labels for one grid.
class CellClassification {
public:
    CellClassification(DyadicGrid g, std::vector<CellLabel> labels)
        : grid_(g), labels_(std::move(labels)) {}

    [[nodiscard]] const DyadicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] CellLabel label(Cell c) const noexcept {
        return labels_[static_cast<std::size_t>(c.j) * static_cast<std::size_t>(grid_.cells_per_axis()) + c.i];
    }

    [[nodiscard]] std::vector<Cell> cells_with(CellLabel want) const {
        std::vector<Cell> out;
        const auto n = grid_.cells_per_axis();
        for (std::int64_t j = 0; j < n; ++j)
            for (std::int64_t i = 0; i < n; ++i)
                if (labels_[static_cast<std::size_t>(j) * n + i] == want)
                    out.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
        return out;
    }

    /// Union of Interior cells: the inner figure of the region.
    [[nodiscard]] Figure inner_figure() const {
        return figure_from_cells(grid_, cells_with(CellLabel::Interior));
    }
    /// Union of Interior and Boundary cells: the outer (covering) figure.
    [[nodiscard]] Figure outer_figure() const {
        auto cells = cells_with(CellLabel::Interior);
        auto bnd = cells_with(CellLabel::Boundary);
        cells.insert(cells.end(), bnd.begin(), bnd.end());
        return figure_from_cells(grid_, std::move(cells));
    }

    [[nodiscard]] std::size_t count(CellLabel want) const noexcept {
        std::size_t k = 0;
        for (CellLabel l : labels_)
            if (l == want) ++k;
        return k;
    }

    /// Total perimeter of the Boundary cells (each counted individually).
    [[nodiscard]] double boundary_perimeter() const noexcept {
        const double per = 2.0 * (grid_.hx() + grid_.hy());
        return static_cast<double>(count(CellLabel::Boundary)) * per;
    }

private:
    DyadicGrid grid_;
    std::vector<CellLabel> labels_;
};

/// Labels every cell of the grid.  Boundary cells are those whose closed
/// extent comes within eps of the polyline (segment-rectangle distance);
/// Exterior is flood-filled from the rim through non-Boundary cells with
/// 4-connectivity; the rest is Interior.  The rim must be clear of the
/// dilated curve, otherwise the bounding box is too small.
[[nodiscard]] inline CellClassification classify_cells(const Curve& c, const DyadicGrid& grid) {
    const Rect bb = c.bounding_box();
    const double eps = c.epsilon();
    if (bb.x0 - eps <= grid.bounds.x0 || bb.x1 + eps >= grid.bounds.x1 ||
        bb.y0 - eps <= grid.bounds.y0 || bb.y1 + eps >= grid.bounds.y1)
        throw std::domain_error("classify_cells: grid bounds must strictly contain the dilated curve");

    const std::int64_t n = grid.cells_per_axis();
    const std::size_t ncells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    const double hx = grid.hx(), hy = grid.hy();

    // Boundary marking, parallel over segment chunks into private bitmaps
    // merged by OR; the result is independent of the chunking.
    const unsigned workers = std::max(1u, thread_count());
    const std::size_t nseg = c.segment_count();
    const std::size_t chunk = (nseg + workers - 1) / workers;
    std::vector<std::vector<std::uint8_t>> marks(workers);

    auto mark_segments = [&](unsigned w) {
        const std::size_t lo = std::min(nseg, static_cast<std::size_t>(w) * chunk);
        const std::size_t hi = std::min(nseg, lo + chunk);
        if (lo >= hi) return;
        auto& bm = marks[w];
        bm.assign(ncells, 0);
        for (std::size_t s = lo; s < hi; ++s) {
            const auto [a, b] = c.segment(s);
            // candidate index window from the dilated segment bbox, with a
            // one-cell safety margin against the division rounding
            const double x0 = std::min(a.x, b.x) - eps, x1 = std::max(a.x, b.x) + eps;
            const double y0 = std::min(a.y, b.y) - eps, y1 = std::max(a.y, b.y) + eps;
            const auto clampi = [n](std::int64_t v) { return std::clamp<std::int64_t>(v, 0, n - 1); };
            const std::int64_t i0 = clampi(static_cast<std::int64_t>(std::floor((x0 - grid.bounds.x0) / hx)) - 1);
            const std::int64_t i1 = clampi(static_cast<std::int64_t>(std::floor((x1 - grid.bounds.x0) / hx)) + 1);
            const std::int64_t j0 = clampi(static_cast<std::int64_t>(std::floor((y0 - grid.bounds.y0) / hy)) - 1);
            const std::int64_t j1 = clampi(static_cast<std::int64_t>(std::floor((y1 - grid.bounds.y0) / hy)) + 1);
            for (std::int64_t j = j0; j <= j1; ++j) {
                for (std::int64_t i = i0; i <= i1; ++i) {
                    const Rect cell = grid.cell_rect({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
                    if (detail::segment_rect_dist(a, b, cell) <= eps)
                        bm[static_cast<std::size_t>(j) * n + i] = 1;
                }
            }
        }
    };
    if (workers <= 1) {
        mark_segments(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(mark_segments, w);
        for (auto& t : pool) t.join();
    }

    constexpr std::uint8_t kUnknown = 255;
    std::vector<std::uint8_t> labels(ncells, kUnknown);
    for (const auto& bm : marks) {
        if (bm.empty()) continue;
        for (std::size_t k = 0; k < ncells; ++k)
            if (bm[k]) labels[k] = static_cast<std::uint8_t>(CellLabel::Boundary);
    }

    // flood fill Exterior from the rim (4-connectivity)
    auto idx = [n](std::int64_t i, std::int64_t j) {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    };
    std::vector<std::pair<std::int32_t, std::int32_t>> stack;
    auto push_exterior = [&](std::int64_t i, std::int64_t j) {
        const std::size_t k = idx(i, j);
        if (labels[k] == static_cast<std::uint8_t>(CellLabel::Boundary))
            throw std::domain_error("classify_cells: dilated curve reaches the grid rim; enlarge the bounding box");
        if (labels[k] == kUnknown) {
            labels[k] = static_cast<std::uint8_t>(CellLabel::Exterior);
            stack.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
        }
    };
    for (std::int64_t i = 0; i < n; ++i) {
        push_exterior(i, 0);
        push_exterior(i, n - 1);
    }
    for (std::int64_t j = 0; j < n; ++j) {
        push_exterior(0, j);
        push_exterior(n - 1, j);
    }
    while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        const std::int64_t di[4] = {1, -1, 0, 0};
        const std::int64_t dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const std::int64_t ni = ci + di[d], nj = cj + dj[d];
            if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
            const std::size_t k = idx(ni, nj);
            if (labels[k] == kUnknown) {
                labels[k] = static_cast<std::uint8_t>(CellLabel::Exterior);
                stack.emplace_back(static_cast<std::int32_t>(ni), static_cast<std::int32_t>(nj));
            }
        }
    }

    std::vector<CellLabel> out(ncells);
    for (std::size_t k = 0; k < ncells; ++k)
        out[k] = labels[k] == kUnknown ? CellLabel::Interior : static_cast<CellLabel>(labels[k]);
    return CellClassification(grid, std::move(out));
}

/// Default classification window: the curve's bounding box padded per
/// axis by a quarter of its span, and by enough to keep a two-cell clear
/// rim at the coarsest level in use.
[[nodiscard]] inline Rect default_bounding_box(const Curve& c, int coarsest_level) {
    const Rect bb = c.bounding_box();
    const double eps = c.epsilon();
    double padx = 0.25 * bb.width() + eps;
    double pady = 0.25 * bb.height() + eps;
    if (coarsest_level >= 3) {
        // pad >= 2h at the coarsest level; h depends on the padded width,
        // so solve pad = 2 (w + 2 pad) / 2^n for the fixed point
        const double scale = static_cast<double>(std::int64_t{1} << coarsest_level);
        padx = std::max(padx, 2.0 * bb.width() / (scale - 4.0));
        pady = std::max(pady, 2.0 * bb.height() / (scale - 4.0));
    }
    return Rect{bb.x0 - padx, bb.x1 + padx, bb.y0 - pady, bb.y1 + pady};
}

} // namespace figint

#endif // FIGINT_REGION2D_HPP

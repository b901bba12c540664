#ifndef FIGINT_INTEGRAL_HPP
#define FIGINT_INTEGRAL_HPP

/// The figure integral: the common limit of a rectangle function's values
/// on inner and outer figures of a Jordan region under dyadic refinement.
/// Jordan content is the special case F = area.  Also the direct midpoint
/// line integral along a rectifiable curve.

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "figint/geom2d.hpp"
#include "figint/numeric.hpp"
#include "figint/rectfn.hpp"
#include "figint/region2d.hpp"

namespace figint {

/// One refinement level of a convergence study.  inner/outer are the
/// rectangle-function values on the inner and outer figures; the area
/// columns always carry the plain figure areas (volumes in 3D) so every
/// report exposes the Jordan-content bracket alongside the integrand's.
struct LevelRow {
    int level = 0;
    double h = 0.0;
    double inner = 0.0;
    double outer = 0.0;
    double gap = 0.0;
    double inner_area = 0.0;
    double outer_area = 0.0;
    std::size_t boundary_cells = 0;
    double boundary_perimeter = 0.0;
};

struct ConvergenceReport {
    std::vector<LevelRow> rows;
    double estimate = 0.0;
    bool converged = false;
    double tolerance = 0.0;

    [[nodiscard]] const LevelRow& last() const { return rows.back(); }
};

namespace detail {

/// Shared level loop: runs make_row for n_min..n_max, takes the midpoint
/// of the last bracket as the estimate.  When no tolerance is supplied
/// the achieved gap is reported as the tolerance (the study documents
/// what it got rather than judging it).
template <typename MakeRow>
ConvergenceReport run_levels(int n_min, int n_max, std::optional<double> tol, MakeRow&& make_row) {
    if (n_min < 1) throw std::invalid_argument("convergence study: n_min must be >= 1");
    if (n_max < n_min) throw std::invalid_argument("convergence study: n_max must be >= n_min");
    ConvergenceReport rep;
    rep.rows.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) rep.rows.push_back(make_row(n));
    const LevelRow& fin = rep.rows.back();
    rep.estimate = 0.5 * (fin.inner + fin.outer);
    rep.tolerance = tol ? *tol : std::abs(fin.gap);
    rep.converged = std::abs(fin.gap) <= rep.tolerance;
    return rep;
}

struct LevelFigures {
    CellClassification cls;
    Figure inner;
    Figure outer;
};

inline LevelFigures classify_level(const Curve& c, const Rect& bounds, int level) {
    CellClassification cls = classify_cells(c, DyadicGrid{bounds, level});
    Figure fin = cls.inner_figure();
    Figure fout = cls.outer_figure();
    return {std::move(cls), std::move(fin), std::move(fout)};
}

} // namespace detail

[[nodiscard]] inline Rect resolve_bounds(const Curve& c, int n_min, std::optional<Rect> user) {
    return user ? *user : default_bounding_box(c, n_min);
}

/// Inner and outer Jordan content per level; estimate is the midpoint of
/// the final bracket.  Areas come from the exact grid-cell count path, so
/// inner is non-decreasing and outer non-increasing across nested levels
/// without any rounding caveat.
[[nodiscard]] inline ConvergenceReport jordan_content(const Curve& c, int n_min, int n_max,
                                                      std::optional<Rect> bounds = {}) {
    const Rect box = resolve_bounds(c, n_min, bounds);
    return detail::run_levels(n_min, n_max, std::nullopt, [&](int n) {
        const auto lf = detail::classify_level(c, box, n);
        const double ia = figure_area(lf.inner);
        const double oa = figure_area(lf.outer);
        LevelRow row;
        row.level = n;
        row.h = lf.cls.grid().h();
        row.inner = ia;
        row.outer = oa;
        row.gap = oa - ia; // signed on purpose: a negative value is a bug report
        row.inner_area = ia;
        row.outer_area = oa;
        row.boundary_cells = lf.cls.count(CellLabel::Boundary);
        row.boundary_perimeter = lf.cls.boundary_perimeter();
        return row;
    });
}

/// Figure integral of F over the region bounded by c: F evaluated on the
/// inner and outer figures per level, converged when the final |gap| is
/// within tol.  Omitting tol reports the achieved gap instead.
[[nodiscard]] inline ConvergenceReport figure_integral(const RectangleFunction& F, const Curve& c,
                                                       int n_min, int n_max,
                                                       std::optional<double> tol = {},
                                                       std::optional<Rect> bounds = {}) {
    if (tol && !(*tol > 0.0))
        throw std::invalid_argument("figure_integral: tolerance must be > 0");
    const Rect box = resolve_bounds(c, n_min, bounds);
    return detail::run_levels(n_min, n_max, tol, [&](int n) {
        const auto lf = detail::classify_level(c, box, n);
        LevelRow row;
        row.level = n;
        row.h = lf.cls.grid().h();
        row.inner = evaluate_on_figure(F, lf.inner);
        row.outer = evaluate_on_figure(F, lf.outer);
        row.gap = std::abs(row.outer - row.inner);
        row.inner_area = figure_area(lf.inner);
        row.outer_area = figure_area(lf.outer);
        row.boundary_cells = lf.cls.count(CellLabel::Boundary);
        row.boundary_perimeter = lf.cls.boundary_perimeter();
        return row;
    });
}

/// Midpoint-rule line integral with a halved-resolution consistency check.
/// value is the finer of the two estimates; settled reports whether the
/// halving moved the result by no more than rounding noise (rough fields
/// legitimately keep moving, which is diagnostic, not an error).
struct LineIntegralResult {
    double value = 0.0;
    double coarse = 0.0;
    double delta = 0.0;
    bool settled = false;
    std::size_t segments = 0;
};

namespace detail {

struct PolylineSum {
    double value;
    double magnitude; // sum of |term|, the rounding scale of the reduction
};

inline PolylineSum polyline_midpoint_sum(const VectorField2& v, const Curve& c) {
    const auto& vs = c.vertices();
    const std::size_t n = vs.size();
    std::vector<double> terms(n);
    parallel_for(n, [&](std::size_t i) {
        const Point2 a = vs[i];
        const Point2 b = vs[(i + 1) % n];
        const double mx = 0.5 * (a.x + b.x);
        const double my = 0.5 * (a.y + b.y);
        terms[i] = v.P(mx, my) * (b.x - a.x) + v.Q(mx, my) * (b.y - a.y);
    });
    KahanSum acc;
    double mag = 0.0;
    for (double t : terms) {
        acc.add(t);
        mag += std::abs(t);
    }
    return {acc.value(), mag};
}

} // namespace detail

[[nodiscard]] inline LineIntegralResult line_integral_checked(const VectorField2& v, const Curve& c,
                                                              double max_seg) {
    const Curve coarse = refine_curve(c, max_seg);
    const Curve fine = refine_curve(coarse, 0.5 * max_seg);
    const auto cs = detail::polyline_midpoint_sum(v, coarse);
    const auto fs = detail::polyline_midpoint_sum(v, fine);
    LineIntegralResult r;
    r.value = fs.value;
    r.coarse = cs.value;
    r.delta = fs.value - cs.value;
    r.settled = std::abs(r.delta) <= 10.0 * DBL_EPSILON * fs.magnitude;
    r.segments = fine.segment_count();
    return r;
}

[[nodiscard]] inline double line_integral(const VectorField2& v, const Curve& c, double max_seg) {
    return line_integral_checked(v, c, max_seg).value;
}

namespace detail {

inline void csv_number(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}
inline void csv_int(std::string& out, long long x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", x);
    out += buf;
}

} // namespace detail

inline constexpr const char* kCsvSchemaLine = "# schema=1\n";
inline constexpr const char* kLevelCsvHeader =
    "level,h,inner,outer,gap,inner_area,outer_area,boundary_cells,boundary_perimeter\n";

inline void append_level_rows(std::string& out, const ConvergenceReport& rep) {
    for (const LevelRow& r : rep.rows) {
        detail::csv_int(out, r.level);
        out += ',';
        detail::csv_number(out, r.h);
        out += ',';
        detail::csv_number(out, r.inner);
        out += ',';
        detail::csv_number(out, r.outer);
        out += ',';
        detail::csv_number(out, r.gap);
        out += ',';
        detail::csv_number(out, r.inner_area);
        out += ',';
        detail::csv_number(out, r.outer_area);
        out += ',';
        detail::csv_int(out, static_cast<long long>(r.boundary_cells));
        out += ',';
        detail::csv_number(out, r.boundary_perimeter);
        out += '\n';
    }
}

[[nodiscard]] inline std::string convergence_csv(const ConvergenceReport& rep) {
    std::string out = kCsvSchemaLine;
    out += kLevelCsvHeader;
    append_level_rows(out, rep);
    return out;
}

} // namespace figint

#endif // FIGINT_INTEGRAL_HPP

#ifndef FIGINT_RECTFN_HPP
#define FIGINT_RECTFN_HPP

/// Real-valued functions of axis-parallel rectangles, finitely additive
/// on non-overlapping ones, and their evaluation on figures.  The key
/// member is the circumferential line integral of a vector field around
/// a rectangle's boundary: because quadrature panels are anchored to an
/// absolute mesh, the contributions of an edge shared by two rectangles
/// are bitwise equal with opposite signs, which makes figure evaluation
/// additive up to rounding.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "figint/fields.hpp"
#include "figint/geom2d.hpp"
#include "figint/numeric.hpp"
#include "figint/quadrature.hpp"

namespace figint {

enum class AbsContinuity : unsigned char { Yes, Unknown };

struct RectangleFunction {
    std::function<double(const Rect&)> eval;
    std::string name;
    AbsContinuity abs_continuity = AbsContinuity::Unknown;
    // when set, |F(r)| <= linear_bound * area(r)
    std::optional<double> linear_bound;

    double operator()(const Rect& r) const { return eval(r); }
};

/// F(r) = area(r); exactly additive and absolutely continuous.
inline RectangleFunction area_function() {
    RectangleFunction f;
    f.name = "area";
    f.abs_continuity = AbsContinuity::Yes;
    f.linear_bound = 1.0;
    f.eval = [](const Rect& r) { return rect_area(r); };
    return f;
}

/// F(r) = double integral of the scalar field over r, by tensor-product
/// panel quadrature.  Declaring a bound M on |f| certifies
/// |F(r)| <= M * area(r).
inline RectangleFunction riemann_function(const ScalarField2& f, const QuadratureSpec& q,
                                          std::optional<double> abs_bound = std::nullopt) {
    RectangleFunction F;
    F.name = "riemann(" + f.name + ")";
    F.abs_continuity = abs_bound ? AbsContinuity::Yes : AbsContinuity::Unknown;
    F.linear_bound = abs_bound;
    F.eval = [f, gl = GaussLegendre(q.order), w = q.panel_width](const Rect& r) {
        if (!r.valid()) throw std::domain_error("riemann_function: invalid rectangle");
        return integrate_rect([&f](double x, double y) { return f(x, y); },
                              r.x0, r.x1, r.y0, r.y1, gl, w);
    };
    return F;
}

namespace detail {

/// sum over the four CCW edges: bottom P, right Q, -top P, -left Q.
/// The four edge integrals are formed independently and combined once, so
/// a constant field cancels bitwise.
inline double rect_circulation(const VectorField2& v, const Rect& r,
                               const GaussLegendre& gl, double panel_width) {
    if (!r.valid()) throw std::domain_error("circulation: invalid rectangle");
    if (r.degenerate()) return 0.0; // back-and-forth traversal cancels
    const double bottom =
        integrate_segment([&](double x) { return v.P(x, r.y0); }, r.x0, r.x1, gl, panel_width);
    const double top =
        integrate_segment([&](double x) { return v.P(x, r.y1); }, r.x0, r.x1, gl, panel_width);
    const double right =
        integrate_segment([&](double y) { return v.Q(r.x1, y); }, r.y0, r.y1, gl, panel_width);
    const double left =
        integrate_segment([&](double y) { return v.Q(r.x0, y); }, r.y0, r.y1, gl, panel_width);
    return (bottom - top) + (right - left);
}

} // namespace detail

/// The circumferential line integral of v around the rectangle boundary,
/// counterclockwise, construed as a rectangle function.  Absolute
/// continuity of such functions is not certified here; the tag stays
/// Unknown.
inline RectangleFunction circulation_function(const VectorField2& v, const QuadratureSpec& q) {
    RectangleFunction F;
    F.name = "circulation(" + v.name + ")";
    F.abs_continuity = AbsContinuity::Unknown;
    F.eval = [v, gl = GaussLegendre(q.order), w = q.panel_width](const Rect& r) {
        return detail::rect_circulation(v, r, gl, w);
    };
    return F;
}

/// Sum of F over the figure's rectangles, evaluated in parallel and
/// reduced in the figure's fixed index order with compensated summation.
inline double evaluate_on_figure(const RectangleFunction& F, const Figure& fig) {
    return parallel_kahan_sum(fig.rects.size(), [&](std::size_t k) { return F(fig.rects[k]); });
}

/// |F(r) - F(r1) - F(r2)| for the split of r at c on the given axis.
inline double additivity_defect(const RectangleFunction& F, const Rect& r, Axis2 axis, double c) {
    const auto [r1, r2] = split_rect(r, axis, c);
    return std::abs(F(r) - F(r1) - F(r2));
}

/// Signed sum of edge quadratures over an oriented edge set.  For a grid
/// figure this reproduces evaluate_on_figure(circulation_function(...))
/// because interior edge contributions cancel node-for-node.
inline double circulation_over_edges(const VectorField2& v, const std::vector<OrientedEdge>& edges,
                                     const QuadratureSpec& q) {
    const GaussLegendre gl(q.order);
    return parallel_kahan_sum(edges.size(), [&](std::size_t k) {
        const OrientedEdge& e = edges[k];
        const double val =
            e.axis == Axis2::X
                ? integrate_segment([&](double x) { return v.P(x, e.fixed); }, e.lo, e.hi, gl, q.panel_width)
                : integrate_segment([&](double y) { return v.Q(e.fixed, y); }, e.lo, e.hi, gl, q.panel_width);
        return e.sign * val;
    });
}

} // namespace figint

#endif // FIGINT_RECTFN_HPP

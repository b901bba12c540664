#ifndef FIGINT_VERIFY_HPP
#define FIGINT_VERIFY_HPP

/// Theorem checks: equality of the boundary line integral with the figure
/// integral of the circulation rectangle function, the boundary-cover
/// perimeter audit, and the classical divergence cross-check available
/// for smooth fields.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "figint/fields.hpp"
#include "figint/integral.hpp"
#include "figint/quadrature.hpp"
#include "figint/rectfn.hpp"
#include "figint/region2d.hpp"

namespace figint {

struct GreenParams {
    int n_min = 4;
    int n_max = 9;
    std::optional<Rect> bounds;           // default: padded curve bbox
    double tol_line = 1e-4;
    std::optional<double> tol_figure;     // default: achieved gap at the finest level
    QuadratureSpec quadrature;            // panel_width <= 0: finest grid cell side
    double max_seg = 2e-5;                // polyline resolution for the line integral
};

/// The circulation figure integral is built from counterclockwise cell
/// boundaries, so its estimate carries the region's CCW value regardless
/// of how the curve is oriented; the comparison multiplies it by the
/// curve's orientation sign.
struct GreenReport {
    LineIntegralResult lhs_check;
    double lhs = 0.0;
    ConvergenceReport rhs;
    int orientation = +1;
    double discrepancy = 0.0;
    bool bracket = false;
    bool pass = false;
    double tol_line = 0.0;
    double tol_figure = 0.0;
    double tol_total = 0.0;
};

/// Resolves the default quadrature panel width: the cell side of the
/// finest grid level in use, so cell edges are unions of whole panels.
[[nodiscard]] inline QuadratureSpec resolve_quadrature(QuadratureSpec q, const Rect& bounds, int n_max) {
    if (q.panel_width <= 0.0) {
        const DyadicGrid finest{bounds, n_max};
        q.panel_width = std::min(finest.hx(), finest.hy());
    }
    return q;
}

[[nodiscard]] inline GreenReport green_verify(const VectorField2& v, const Curve& c,
                                              const GreenParams& params = {}) {
    if (!(params.tol_line > 0.0))
        throw std::invalid_argument("green_verify: tol_line must be > 0");
    if (params.tol_figure && !(*params.tol_figure > 0.0))
        throw std::invalid_argument("green_verify: tol_figure must be > 0");
    if (!(params.max_seg > 0.0))
        throw std::invalid_argument("green_verify: max_seg must be > 0");

    const Rect box = resolve_bounds(c, params.n_min, params.bounds);
    const QuadratureSpec q = resolve_quadrature(params.quadrature, box, params.n_max);

    GreenReport rep;
    rep.lhs_check = line_integral_checked(v, c, params.max_seg);
    rep.lhs = rep.lhs_check.value;
    rep.rhs = figure_integral(circulation_function(v, q), c, params.n_min, params.n_max,
                              params.tol_figure, box);
    rep.orientation = c.orientation_sign();

    const double s = static_cast<double>(rep.orientation);
    rep.discrepancy = std::abs(rep.lhs - s * rep.rhs.estimate);
    const LevelRow& fin = rep.rhs.last();
    const double lo = std::min(s * fin.inner, s * fin.outer) - params.tol_line;
    const double hi = std::max(s * fin.inner, s * fin.outer) + params.tol_line;
    rep.bracket = lo <= rep.lhs && rep.lhs <= hi;

    rep.tol_line = params.tol_line;
    rep.tol_figure = rep.rhs.tolerance;
    rep.tol_total = rep.tol_line + rep.tol_figure;
    rep.pass = rep.rhs.converged && rep.discrepancy <= rep.tol_total && rep.bracket;
    return rep;
}

struct PerimeterAudit {
    double total_perimeter = 0.0;
    double bound = 0.0; // 16 L + 16 h, the uniform-grid weakening
    double ratio = 0.0;
};

/// Audits the boundary-cover perimeter sum against 16·L + 16·h.  The
/// constant reflects the uniform dyadic cover: a length-h arc piece can
/// cross up to a 2×2 cell block (perimeter 16h) plus one block of slack.
[[nodiscard]] inline PerimeterAudit perimeter_bound_audit(const Curve& c, const DyadicGrid& grid) {
    const CellClassification cls = classify_cells(c, grid);
    PerimeterAudit a;
    a.total_perimeter = cls.boundary_perimeter();
    a.bound = 16.0 * curve_length(c) + 16.0 * grid.h();
    a.ratio = a.total_perimeter / a.bound;
    return a;
}

/// Classical cross-check for smooth fields: the figure integral of the
/// declared curl, i.e. the double integral of dQ/dx - dP/dy.
[[nodiscard]] inline ConvergenceReport divergence_oracle_report(const VectorField2& v, const Curve& c,
                                                                int n_min, int n_max,
                                                                std::optional<double> tol = {},
                                                                std::optional<Rect> bounds = {},
                                                                QuadratureSpec q = {}) {
    if (!v.curl_z)
        throw std::invalid_argument("divergence_oracle: field has no declared curl");
    const Rect box = resolve_bounds(c, n_min, bounds);
    const QuadratureSpec qr = resolve_quadrature(q, box, n_max);
    const auto curl = *v.curl_z;
    const ScalarField2 integrand{
        [curl](double x, double y) { return curl(x, y); },
        v.name + ".curl",
        Smoothness::Smooth,
    };
    return figure_integral(riemann_function(integrand, qr), c, n_min, n_max, tol, box);
}

[[nodiscard]] inline double divergence_oracle(const VectorField2& v, const Curve& c,
                                              int n_min, int n_max,
                                              std::optional<Rect> bounds = {},
                                              QuadratureSpec q = {}) {
    return divergence_oracle_report(v, c, n_min, n_max, std::nullopt, bounds, q).estimate;
}

inline constexpr const char* kGreenCsvHeader =
    "lhs,rhs_estimate,discrepancy,gap,bracket,converged,pass,orientation,tol_line,tol_figure,tol_total\n";

/// Summary row followed by the embedded per-level table of the rhs.
[[nodiscard]] inline std::string green_csv(const GreenReport& rep) {
    std::string out = kCsvSchemaLine;
    out += kGreenCsvHeader;
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
    detail::csv_number(out, rep.tol_line);
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

#endif // FIGINT_VERIFY_HPP

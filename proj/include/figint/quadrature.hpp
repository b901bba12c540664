#ifndef FIGINT_QUADRATURE_HPP
#define FIGINT_QUADRATURE_HPP

/// Composite Gauss-Legendre quadrature on panels anchored to an absolute
/// mesh {k * panel_width}.  Panel boundaries are a function of absolute
/// coordinates only, never of which rectangle's edge is being integrated:
/// two traversals of the same segment see identical nodes, so shared-edge
/// contributions of adjacent rectangles cancel to rounding, and splitting
/// a rectangle at a mesh-aligned coordinate leaves edge sums unchanged.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "figint/numeric.hpp"

namespace figint {

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].
/// Computed once per order by Newton iteration on the Legendre recurrence.
class GaussLegendre {
public:
    explicit GaussLegendre(int order) {
        if (order < 1 || order > 64)
            throw std::invalid_argument("GaussLegendre: order must be in [1, 64]");
        nodes_.resize(order);
        weights_.resize(order);
        const int n = order;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                // Legendre P_n(x) and derivative via the three-term recurrence
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes_[i] = -x;
            nodes_[n - 1 - i] = x;
            weights_[i] = w;
            weights_[n - 1 - i] = w;
        }
        if (n % 2 == 1) nodes_[n / 2] = 0.0;
    }

    [[nodiscard]] int order() const noexcept { return static_cast<int>(nodes_.size()); }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Panel layout shared by all edge and area integrals.
struct QuadratureSpec {
    int order = 8;          // Gauss-Legendre points per panel
    double panel_width = 0; // absolute mesh spacing; <= 0 means one panel per segment

    QuadratureSpec() = default;
    QuadratureSpec(int ord, double width) : order(ord), panel_width(width) {
        if (ord < 1 || ord > 64)
            throw std::invalid_argument("QuadratureSpec: order must be in [1, 64]");
    }
};

namespace detail {

/// Calls fn(pa, pb) for each panel of [a, b] cut by the absolute mesh
/// {k * h}.  Requires a < b.
template <typename Fn>
void for_each_panel(double a, double b, double h, Fn&& fn) {
    if (!(h > 0)) {
        fn(a, b);
        return;
    }
    // first mesh point strictly greater than a
    auto k = static_cast<std::int64_t>(std::floor(a / h)) + 1;
    while (static_cast<double>(k) * h <= a) ++k;
    double prev = a;
    for (; static_cast<double>(k) * h < b; ++k) {
        const double cut = static_cast<double>(k) * h;
        fn(prev, cut);
        prev = cut;
    }
    fn(prev, b);
}

} // namespace detail

/// Integral of f over the segment [a, b] (a <= b) using mesh-aligned
/// panels.  Identical (a, b) always produces the identical node set and
/// the bitwise-identical value.
template <typename F>
double integrate_segment(F&& f, double a, double b, const GaussLegendre& gl, double panel_width) {
    if (a == b) return 0.0;
    KahanSum acc;
    const auto& xs = gl.nodes();
    const auto& ws = gl.weights();
    detail::for_each_panel(a, b, panel_width, [&](double pa, double pb) {
        const double mid = 0.5 * (pa + pb);
        const double half = 0.5 * (pb - pa);
        for (std::size_t i = 0; i < xs.size(); ++i)
            acc.add(ws[i] * half * f(mid + half * xs[i]));
    });
    return acc.value();
}

/// Tensor-product integral of f(x, y) over [x0,x1] x [y0,y1] with the
/// same absolute panel mesh on each axis.
template <typename F>
double integrate_rect(F&& f, double x0, double x1, double y0, double y1,
                      const GaussLegendre& gl, double panel_width) {
    if (x0 == x1 || y0 == y1) return 0.0;
    KahanSum acc;
    const auto& xs = gl.nodes();
    const auto& ws = gl.weights();
    detail::for_each_panel(x0, x1, panel_width, [&](double pa, double pb) {
        const double mx = 0.5 * (pa + pb), hx = 0.5 * (pb - pa);
        detail::for_each_panel(y0, y1, panel_width, [&](double qa, double qb) {
            const double my = 0.5 * (qa + qb), hy = 0.5 * (qb - qa);
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < xs.size(); ++j)
                    acc.add(ws[i] * ws[j] * hx * hy * f(mx + hx * xs[i], my + hy * xs[j]));
        });
    });
    return acc.value();
}

} // namespace figint

#endif // FIGINT_QUADRATURE_HPP

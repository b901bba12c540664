#include <catch2/catch_amalgamated.hpp>

#include <figint/rectfn.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace figint;

namespace {

// Rectangle with corners on the k/4096 lattice inside [-2, 2], wide enough
// to admit an interior lattice cut.
Rect lattice_rect(std::mt19937_64& rng) {
    const double q = 1.0 / 4096.0;
    std::uniform_int_distribution<int> lo(-8192, 8190);
    std::uniform_int_distribution<int> span(2, 512);
    const int ix = lo(rng), iy = lo(rng);
    const int wx = span(rng), wy = span(rng);
    return Rect{ix * q, std::min(8192, ix + wx) * q, iy * q, std::min(8192, iy + wy) * q};
}

} // namespace

TEST_CASE("area function is exactly additive on lattice rectangles",
          "[rectfn][property]") {
    const RectangleFunction A = area_function();
    CHECK(A(Rect{0, 1, 0, 1}) == 1.0);
    CHECK(A(Rect{0, 0, 0, 5}) == 0.0);
    CHECK(A.abs_continuity == AbsContinuity::Yes);
    CHECK(additivity_defect(A, Rect{0, 1, 0, 1}, Axis2::X, 0.3) == 0.0);

    std::mt19937_64 rng(90401);
    const double q = 1.0 / 4096.0;
    for (int iter = 0; iter < 1000; ++iter) {
        const Rect r = lattice_rect(rng);
        const bool xcut = (rng() & 1) != 0;
        const double lo = xcut ? r.x0 : r.y0;
        const double hi = xcut ? r.x1 : r.y1;
        const auto cells = static_cast<long>(std::round((hi - lo) / q));
        const double c = lo + static_cast<double>(1 + static_cast<long>(rng() % (cells - 1))) * q;
        REQUIRE(additivity_defect(A, r, xcut ? Axis2::X : Axis2::Y, c) == 0.0);
    }
}

TEST_CASE("riemann function integrates scalar fields", "[rectfn]") {
    const QuadratureSpec q(8, 0.25);
    const ScalarField2 one{[](double, double) { return 1.0; }, "one", Smoothness::Smooth};
    const ScalarField2 fx{[](double x, double) { return x; }, "x", Smoothness::Smooth};

    const RectangleFunction F1 = riemann_function(one, q, 1.0);
    CHECK(F1.abs_continuity == AbsContinuity::Yes);
    CHECK(std::abs(F1(Rect{0, 1, 0, 1}) - 1.0) <= 1e-13);
    CHECK(std::abs(F1(Rect{-1, 2, 0, 0.5}) - 1.5) <= 1e-13);

    const RectangleFunction Fx = riemann_function(fx, q);
    CHECK(Fx.abs_continuity == AbsContinuity::Unknown);
    CHECK(std::abs(Fx(Rect{0, 1, 0, 1}) - 0.5) <= 1e-13);

    const auto rot = make_rot();
    const ScalarField2 curl{*rot.curl_z, "curl(rot)", Smoothness::Smooth};
    CHECK(std::abs(riemann_function(curl, q)(Rect{0, 2, 0, 1}) - 2.0) <= 1e-13);

    CHECK_THROWS_AS(F1(Rect{1, 0, 0, 1}), std::domain_error);
}

TEST_CASE("circulation closed forms", "[rectfn]") {
    const QuadratureSpec q(8, 0.0625);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> span(0.01, 2.0);

    const RectangleFunction Fc = circulation_function(make_const2(3.0, -7.0), q);
    const RectangleFunction Fr = circulation_function(make_rot(), q);
    const RectangleFunction Fg = circulation_function(make_grad(), q);
    CHECK(Fr.abs_continuity == AbsContinuity::Unknown);

    for (int iter = 0; iter < 100; ++iter) {
        const double x0 = coord(rng), y0 = coord(rng);
        const Rect r{x0, x0 + span(rng), y0, y0 + span(rng)};
        // constant fields cancel bitwise by construction
        REQUIRE(Fc(r) == 0.0);
        // curl 1: circulation equals the area
        REQUIRE(std::abs(Fr(r) - rect_area(r)) <= 1e-12 * std::max(1.0, rect_area(r)));
        // conservative: circulation vanishes
        REQUIRE(std::abs(Fg(r)) <= 1e-11);
    }

    CHECK(Fr(Rect{0, 1, 0.5, 0.5}) == 0.0); // degenerate traversal cancels

    // identical rectangle, identical bits
    const Rect probe{0.21, 1.77, -0.4, 0.93};
    const RectangleFunction Fw = circulation_function(make_weier(), q);
    CHECK(Fw(probe) == Fw(probe));
}

TEST_CASE("figure evaluation matches the oriented-edge sum", "[rectfn][property]") {
    const DyadicGrid g(Rect{-2, 2, -2, 2}, 4);
    const QuadratureSpec q(8, g.hx());
    std::mt19937_64 rng(600613);
    std::uniform_int_distribution<int> pick(0, 15);

    const std::vector<VectorField2> fields = {make_rot(), make_grad(),
                                              make_weier({0.5, 3, 8})};
    for (int iter = 0; iter < 12; ++iter) {
        std::vector<Cell> cells;
        for (int k = 0; k < 24; ++k) {
            const Cell c{pick(rng), pick(rng)};
            if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
        }
        const Figure fig = figure_from_cells(g, cells);
        const auto edges = figure_boundary_edges(fig);
        for (const auto& v : fields) {
            const double whole = evaluate_on_figure(circulation_function(v, q), fig);
            const double rim = circulation_over_edges(v, edges, q);
            REQUIRE(std::abs(whole - rim) <= 1e-11 * std::max(1.0, std::abs(whole)));
        }
    }
}

TEST_CASE("circulation additivity under mesh-aligned splits", "[rectfn][property]") {
    const double hq = 0.0625;
    const QuadratureSpec q(8, hq);
    std::mt19937_64 rng(140914);
    std::uniform_int_distribution<int> lo(-32, 28);
    std::uniform_int_distribution<int> span(2, 16);

    for (const auto& v : catalog().fields2) {
        const RectangleFunction F = circulation_function(v, q);
        for (int iter = 0; iter < 40; ++iter) {
            const int ix = lo(rng), iy = lo(rng);
            const int wx = span(rng), wy = span(rng);
            const Rect r{ix * hq, (ix + wx) * hq, iy * hq, (iy + wy) * hq};
            const bool xcut = (rng() & 1) != 0;
            const int w = xcut ? wx : wy;
            const double c = (xcut ? r.x0 : r.y0) +
                             static_cast<double>(1 + static_cast<int>(rng() % (w - 1))) * hq;
            REQUIRE(additivity_defect(F, r, xcut ? Axis2::X : Axis2::Y, c) <= 1e-10);
        }
    }
}

TEST_CASE("circulation obeys the oscillation bound", "[rectfn][property]") {
    const QuadratureSpec q(8, 0.0625);
    std::mt19937_64 rng(808080);
    std::uniform_real_distribution<double> coord(-2.0, 1.0);
    std::uniform_real_distribution<double> span(0.05, 1.0);

    for (const auto& v : {make_rot(), make_weier({0.5, 3, 12})}) {
        const RectangleFunction F = circulation_function(v, q);
        for (int iter = 0; iter < 30; ++iter) {
            const double x0 = coord(rng), y0 = coord(rng);
            const Rect r{x0, x0 + span(rng), y0, y0 + span(rng)};
            // sampled oscillation of each component along the boundary
            double pmin = INFINITY, pmax = -INFINITY, qmin = INFINITY, qmax = -INFINITY;
            const int m = 512;
            for (int k = 0; k <= m; ++k) {
                const double tx = r.x0 + (r.width() * k) / m;
                const double ty = r.y0 + (r.height() * k) / m;
                for (double p : {v.P(tx, r.y0), v.P(tx, r.y1)}) {
                    pmin = std::min(pmin, p);
                    pmax = std::max(pmax, p);
                }
                for (double qq : {v.Q(r.x0, ty), v.Q(r.x1, ty)}) {
                    qmin = std::min(qmin, qq);
                    qmax = std::max(qmax, qq);
                }
            }
            const double osc = std::max(pmax - pmin, qmax - qmin);
            const double bound = osc * rect_perimeter(r) + 1e-9;
            REQUIRE(std::abs(F(r)) <= bound);
        }
    }
}

TEST_CASE("absolutely continuous functions obey their linear bound",
          "[rectfn][property]") {
    const QuadratureSpec q(8, 0.25);
    const ScalarField2 fx{[](double x, double) { return x; }, "x", Smoothness::Smooth};
    const RectangleFunction F = riemann_function(fx, q, 2.0); // |x| <= 2 on [-2,2]
    REQUIRE(F.linear_bound.has_value());

    const DyadicGrid g(Rect{-2, 2, -2, 2}, 3);
    std::mt19937_64 rng(22334455);
    std::uniform_int_distribution<int> pick(0, 7);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<Cell> cells;
        for (int k = 0; k < 10; ++k) {
            const Cell c{pick(rng), pick(rng)};
            if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
        }
        const Figure fig = figure_from_cells(g, cells);
        REQUIRE(std::abs(evaluate_on_figure(F, fig)) <=
                *F.linear_bound * figure_area(fig) + 1e-12);
    }
}

TEST_CASE("circulation values are Cauchy in the panel width", "[rectfn]") {
    const Rect r{-0.75, 1.25, -1.0, 0.5};
    for (const auto& v : catalog().fields2) {
        const double coarse = circulation_function(v, QuadratureSpec(8, 0.0625))(r);
        const double fine = circulation_function(v, QuadratureSpec(8, 0.03125))(r);
        const double tol = v.smoothness() == Smoothness::Smooth ? 1e-10 : 1e-2;
        INFO(v.name);
        REQUIRE(std::abs(coarse - fine) <= tol);
    }
}

TEST_CASE("evaluate_on_figure reduces deterministically across threads", "[rectfn]") {
    const DyadicGrid g(Rect{-2, 2, -2, 2}, 4);
    std::vector<Cell> cells;
    for (int j = 3; j < 13; ++j)
        for (int i = 3; i < 13; ++i) cells.push_back({i, j});
    const Figure fig = figure_from_cells(g, cells);
    const RectangleFunction F =
        circulation_function(make_weier({0.5, 3, 10}), QuadratureSpec(8, g.hx()));

    set_thread_count(1);
    const double ref = evaluate_on_figure(F, fig);
    for (int t : {2, 8}) {
        set_thread_count(t);
        CHECK(evaluate_on_figure(F, fig) == ref);
    }
    set_thread_count(1);

    CHECK(evaluate_on_figure(F, figure_from_cells(g, {})) == 0.0);
}

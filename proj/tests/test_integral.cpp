#include <catch2/catch_amalgamated.hpp>

#include <figint/integral.hpp>
#include <figint/shapes.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace figint;

TEST_CASE("jordan content of the unit square converges to 1", "[integral]") {
    const auto rep = jordan_content(make_square_curve(), 3, 8, Rect{-1, 3, -1, 3});
    REQUIRE(rep.rows.size() == 6);
    for (const auto& r : rep.rows) {
        CHECK(r.inner <= 1.0);
        CHECK(r.outer >= 1.0);
        CHECK(r.gap >= 0.0);
        CHECK(r.inner == r.inner_area);
        CHECK(r.outer == r.outer_area);
    }
    // gap strictly shrinks as the sides resolve
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        CHECK(rep.rows[i].gap < rep.rows[i - 1].gap);
    CHECK(std::abs(rep.estimate - 1.0) <= 0.01);
    CHECK(rep.converged); // no tolerance given: achieved gap is the tolerance
    CHECK(rep.tolerance == std::abs(rep.last().gap));
}

TEST_CASE("jordan content brackets pi for a polygon disk", "[integral]") {
    const auto rep = jordan_content(make_disk_curve(512), 3, 7, Rect{-2, 2, -2, 2});
    const double poly_area = 0.5 * 512 * std::sin(2.0 * std::numbers::pi / 512);
    CHECK(rep.last().inner < poly_area);
    CHECK(rep.last().outer > poly_area);
    CHECK(std::abs(rep.estimate - std::numbers::pi) <= 0.05);
    // monotone bracket, exactly
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].inner >= rep.rows[i - 1].inner);
        CHECK(rep.rows[i].outer <= rep.rows[i - 1].outer);
    }
}

TEST_CASE("level loop validates its arguments", "[integral]") {
    const Curve sq = make_square_curve();
    CHECK_THROWS_AS(jordan_content(sq, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(jordan_content(sq, 5, 4), std::invalid_argument);
    CHECK_THROWS_AS(
        figure_integral(area_function(), sq, 3, 5, 0.0, Rect{-1, 3, -1, 3}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        figure_integral(area_function(), sq, 3, 5, -1.0, Rect{-1, 3, -1, 3}),
        std::invalid_argument);
}

TEST_CASE("figure integral of area reproduces jordan content bitwise",
          "[integral]") {
    // dyadic bounds: every cell area is exact, so the compensated sum and
    // the counting path agree bit for bit
    const Curve d = make_disk_curve(64);
    const Rect box{-2, 2, -2, 2};
    const auto jc = jordan_content(d, 3, 5, box);
    const auto fi = figure_integral(area_function(), d, 3, 5, std::nullopt, box);
    REQUIRE(jc.rows.size() == fi.rows.size());
    for (std::size_t i = 0; i < jc.rows.size(); ++i) {
        CHECK(fi.rows[i].inner == jc.rows[i].inner);
        CHECK(fi.rows[i].outer == jc.rows[i].outer);
    }
    CHECK(fi.estimate == jc.estimate);
}

TEST_CASE("figure integral respects an explicit tolerance", "[integral]") {
    const Curve sq = make_square_curve();
    const auto tight =
        figure_integral(area_function(), sq, 3, 8, 1e-9, Rect{-1, 3, -1, 3});
    CHECK_FALSE(tight.converged); // a band of boundary cells always remains
    CHECK(tight.tolerance == 1e-9);

    const auto loose = figure_integral(area_function(), sq, 3, 8, 0.5, Rect{-1, 3, -1, 3});
    CHECK(loose.converged);
}

TEST_CASE("figure integral brackets obey the absolute-continuity inequality",
          "[integral][property]") {
    const ScalarField2 fx{[](double x, double) { return x + 2.0; }, "x+2",
                          Smoothness::Smooth};
    const double M = 4.0; // |x + 2| <= 4 on [-2, 2]
    const RectangleFunction F = riemann_function(fx, QuadratureSpec(8, 0.0625), M);
    const auto rep =
        figure_integral(F, make_disk_curve(128), 3, 6, std::nullopt, Rect{-2, 2, -2, 2});
    for (const auto& r : rep.rows) {
        REQUIRE(std::abs(r.outer - r.inner) <= M * (r.outer_area - r.inner_area) + 1e-10);
    }
}

TEST_CASE("line integral closed forms", "[integral]") {
    const Curve d = make_disk_curve(4096);
    const double poly_area = 0.5 * 4096 * std::sin(2.0 * std::numbers::pi / 4096);

    // midpoint rule is exact for affine fields, so the rot circulation is
    // the polygon area to rounding
    const auto r = line_integral_checked(make_rot(), d, 1e-2);
    CHECK(std::abs(r.value - poly_area) <= 1e-12);
    CHECK(r.settled);
    CHECK(std::abs(r.value - std::numbers::pi) <= 1e-5);

    // constant fields integrate to zero around any loop
    for (const Curve& c : {make_square_curve(), make_lshape_curve(), make_disk_curve(128)}) {
        CHECK(std::abs(line_integral(make_const2(3.0, -1.0), c, 1e-2)) <= 1e-12);
    }

    // conservative smooth field: vanishing loop integral
    CHECK(std::abs(line_integral(make_grad(), make_lshape_curve(), 1e-3)) <= 1e-9);
}

TEST_CASE("line integral flips sign with orientation", "[integral]") {
    const Curve d = make_disk_curve(256);
    const double fwd = line_integral(make_weier({0.5, 3, 10}), d, 1e-3);
    const double bwd = line_integral(make_weier({0.5, 3, 10}), d.reversed(), 1e-3);
    CHECK(std::abs(fwd + bwd) <= 1e-10);
}

TEST_CASE("line integral is stable under midpoint reparameterization",
          "[integral]") {
    // pre-splitting segments into exact halves must not move the result
    // beyond rounding for smooth fields
    const Curve sq = make_square_curve();
    const Curve pre = refine_curve(sq, 0.5);
    for (const auto& v : {make_rot(), make_grad()}) {
        const double a = line_integral(v, sq, 0.3);
        const double b = line_integral(v, pre, 0.3);
        CHECK(std::abs(a - b) <= 1e-10);
    }
}

TEST_CASE("rough fields report unsettled halving deltas honestly", "[integral]") {
    // the checked variant must not claim rounding-level agreement for a
    // coarse polyline on a Weierstrass field
    const auto r = line_integral_checked(make_weier(), make_disk_curve(64), 0.1);
    CHECK_FALSE(r.settled);
    CHECK(r.delta != 0.0);
    CHECK(r.segments > 64);
}

TEST_CASE("convergence CSV is stable and exact", "[integral]") {
    ConvergenceReport rep;
    LevelRow a;
    a.level = 3;
    a.h = 0.5;
    a.inner = 0.25;
    a.outer = 1.75;
    a.gap = 1.5;
    a.inner_area = 0.25;
    a.outer_area = 1.75;
    a.boundary_cells = 12;
    a.boundary_perimeter = 24.0;
    rep.rows = {a};
    const std::string got = convergence_csv(rep);
    const std::string want =
        "# schema=1\n"
        "level,h,inner,outer,gap,inner_area,outer_area,boundary_cells,boundary_perimeter\n"
        "3,0.5,0.25,1.75,1.5,0.25,1.75,12,24\n";
    CHECK(got == want);
}

TEST_CASE("csv rendering round-trips doubles at full precision", "[integral]") {
    std::string s;
    detail::csv_number(s, std::numbers::pi);
    CHECK(std::stod(s) == std::numbers::pi);
    s.clear();
    detail::csv_number(s, 0.1);
    CHECK(std::stod(s) == 0.1);
}

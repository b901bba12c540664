#include <catch2/catch_amalgamated.hpp>

#include <figint/quadrature.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace figint;

TEST_CASE("Gauss-Legendre nodes match closed forms", "[quadrature]") {
    CHECK_THROWS_AS(GaussLegendre(0), std::invalid_argument);
    CHECK_THROWS_AS(GaussLegendre(65), std::invalid_argument);

    const GaussLegendre g1(1);
    CHECK(g1.nodes()[0] == 0.0);
    CHECK(g1.weights()[0] == 2.0);

    const GaussLegendre g2(2);
    CHECK(std::abs(g2.nodes()[0] + 1.0 / std::sqrt(3.0)) <= 1e-14);
    CHECK(std::abs(g2.nodes()[1] - 1.0 / std::sqrt(3.0)) <= 1e-14);
    CHECK(std::abs(g2.weights()[0] - 1.0) <= 1e-14);

    const GaussLegendre g3(3);
    CHECK(g3.nodes()[1] == 0.0);
    CHECK(std::abs(g3.nodes()[2] - std::sqrt(0.6)) <= 1e-14);
    CHECK(std::abs(g3.weights()[1] - 8.0 / 9.0) <= 1e-14);
    CHECK(std::abs(g3.weights()[0] - 5.0 / 9.0) <= 1e-14);
}

TEST_CASE("order-n rule is exact through degree 2n-1", "[quadrature][property]") {
    std::mt19937_64 rng(55221100);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int order : {2, 4, 5, 8, 13}) {
        const GaussLegendre gl(order);
        for (int iter = 0; iter < 20; ++iter) {
            const int deg = 2 * order - 1;
            std::vector<double> cs(static_cast<std::size_t>(deg) + 1);
            for (double& c : cs) c = coeff(rng);
            auto poly = [&](double x) {
                double v = 0;
                for (std::size_t k = cs.size(); k-- > 0;) v = v * x + cs[k];
                return v;
            };
            // exact antiderivative evaluated at the endpoints
            double exact = 0;
            for (std::size_t k = 0; k < cs.size(); ++k)
                if (k % 2 == 0) exact += 2.0 * cs[k] / static_cast<double>(k + 1);
            const double got = integrate_segment(poly, -1.0, 1.0, gl, 0.0);
            REQUIRE(std::abs(got - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("integrate_segment basics", "[quadrature]") {
    const GaussLegendre gl(8);
    CHECK(integrate_segment([](double x) { return x; }, 0.5, 0.5, gl, 0.25) == 0.0);
    CHECK(std::abs(integrate_segment([](double x) { return x; }, 0.0, 1.0, gl, 0.25) - 0.5) <=
          1e-15);
    const double s =
        integrate_segment([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, gl,
                          std::numbers::pi / 8.0);
    CHECK(std::abs(s - 2.0) <= 1e-12);
}

TEST_CASE("panels come from the absolute mesh", "[quadrature]") {
    const GaussLegendre gl(4);
    const double h = 0.25;
    auto f = [](double x) { return std::exp(x) * std::cos(3.0 * x); };

    SECTION("splitting at a mesh point preserves the sum to rounding") {
        const double whole = integrate_segment(f, -0.3, 1.1, gl, h);
        const double parts =
            integrate_segment(f, -0.3, 0.5, gl, h) + integrate_segment(f, 0.5, 1.1, gl, h);
        CHECK(std::abs(whole - parts) <= 1e-14);
    }

    SECTION("identical bounds give the bitwise-identical value") {
        const double a = integrate_segment(f, 0.1234, 2.71, gl, h);
        const double b = integrate_segment(f, 0.1234, 2.71, gl, h);
        CHECK(a == b);
    }

    SECTION("panel_width <= 0 is a single panel") {
        const double one = integrate_segment(f, 0.0, 1.0, gl, 0.0);
        const double direct = integrate_segment(f, 0.0, 1.0, gl, 5.0); // mesh coarser than span
        CHECK(std::abs(one - direct) <= 1e-15);
    }
}

TEST_CASE("integrate_rect matches separable products", "[quadrature]") {
    const GaussLegendre gl(8);
    auto f = [](double x, double y) { return x * y * y; };
    // int_0^2 x dx * int_0^1 y^2 dy = 2 * 1/3
    const double got = integrate_rect(f, 0.0, 2.0, 0.0, 1.0, gl, 0.25);
    CHECK(std::abs(got - 2.0 / 3.0) <= 1e-13);
    CHECK(integrate_rect(f, 1.0, 1.0, 0.0, 1.0, gl, 0.25) == 0.0);
    CHECK(integrate_rect(f, 0.0, 1.0, 0.3, 0.3, gl, 0.25) == 0.0);
}

TEST_CASE("QuadratureSpec validates order", "[quadrature]") {
    CHECK_THROWS_AS(QuadratureSpec(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureSpec(65, 0.5), std::invalid_argument);
    const QuadratureSpec q;
    CHECK(q.order == 8);
    CHECK(q.panel_width == 0.0);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "resonance/quadrature.hpp"

using namespace resonance;
using Catch::Approx;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("reference Gauss-Legendre rule integrates polynomials exactly", "[quadrature]") {
    // An n-point rule is exact through degree 2n - 1.
    for (int order : {2, 4, 8, 10, 16}) {
        std::vector<double> x;
        std::vector<double> w;
        gauss_legendre_reference(order, x, w);
        for (int deg = 0; deg < 2 * order; ++deg) {
            double s = 0.0;
            for (int i = 0; i < order; ++i) {
                s += w[static_cast<std::size_t>(i)] *
                     std::pow(x[static_cast<std::size_t>(i)], deg);
            }
            const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
            REQUIRE(s == Approx(exact).margin(1e-13));
        }
    }
}

TEST_CASE("composite grid properties", "[quadrature]") {
    const auto g = make_composite_gauss(kPi, 10, 64);

    SECTION("weights are positive and sum to the interval length") {
        double s = 0.0;
        for (double w : g.weights) {
            REQUIRE(w > 0.0);
            s += w;
        }
        REQUIRE(s == Approx(kPi).margin(1e-12));
    }
    SECTION("nodes are interior and increasing") {
        REQUIRE(g.nodes.front() > 0.0);
        REQUIRE(g.nodes.back() < kPi);
        for (std::size_t i = 1; i < g.nodes.size(); ++i) REQUIRE(g.nodes[i] > g.nodes[i - 1]);
    }
    SECTION("int_0^pi sin^2 = pi / 2") {
        const double v = g.integrate([](double x) { return std::sin(x) * std::sin(x); });
        REQUIRE(v == Approx(kPi / 2.0).margin(1e-10));
    }
    SECTION("oscillatory integrand at the top retained frequency") {
        const double v = g.integrate([](double x) {
            const double s = std::sin(64.0 * x);
            return s * s;
        });
        REQUIRE(v == Approx(kPi / 2.0).margin(1e-10));
    }
}

TEST_CASE("grid refinement changes smooth integrals below 1e-8", "[quadrature]") {
    const auto coarse = make_composite_gauss(kPi, 10, 64);
    const auto fine = make_composite_gauss(kPi, 10, 128);
    auto f = [](double x) { return std::atan(3.0 * std::sin(2.0 * x)) * std::sin(5.0 * x); };
    REQUIRE(std::abs(coarse.integrate(f) - fine.integrate(f)) < 1e-8);
}

TEST_CASE("default grid matches its advertised resolution", "[quadrature]") {
    const auto g = default_grid(kPi);
    CHECK(g.order == 10);
    CHECK(g.panels == 64);
    CHECK(g.size() == 640);
    CHECK(g.integrate([](double x) { return std::sin(x) * std::sin(x); }) ==
          Approx(kPi / 2.0).margin(1e-12));
}

TEST_CASE("degenerate quadrature requests are rejected", "[quadrature]") {
    CHECK_THROWS_AS(make_composite_gauss(0.0, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_composite_gauss(1.0, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(make_composite_gauss(1.0, 4, 0), std::invalid_argument);
}

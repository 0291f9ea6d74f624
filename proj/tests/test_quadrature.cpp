#include "doctest.h"
#include "hyperwave/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace hyperwave;

TEST_CASE("gauss panels integrate polynomials exactly") {
    auto cubic = [](double x) { return 4.0 * x * x * x - 2.0 * x + 1.0; };
    CHECK(gauss_panels(cubic, 0.0, 2.0, 1) == doctest::Approx(16.0 - 4.0 + 2.0).epsilon(1e-14));
    CHECK(gauss_panels(cubic, 1.0, 1.0, 3) == 0.0);
}

TEST_CASE("converged integration of a smooth function") {
    auto res = integrate_converged([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(res.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.last_change <= 1e-8 * 2.0);
}

TEST_CASE("non-convergence is reported") {
    auto wild = [](double x) { return std::sin(1e6 * x) * 1e3; };
    CHECK_THROWS_AS(integrate_converged(wild, 0.0, 1.0, 1e-12, 1, 4), QuadratureError);
}

#include "doctest.h"
#include "hyperwave/geometry.hpp"
#include "hyperwave/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hyperwave;

TEST_CASE("rho is half of n minus one") {
    CHECK(rho(2) == 0.5);
    CHECK(rho(3) == 1.0);
    CHECK(rho(6) == 2.5);
    CHECK_THROWS_AS(rho(1), std::invalid_argument);
    CHECK_THROWS_AS(rho(7), std::invalid_argument);
}

TEST_CASE("grid invariants") {
    const RadialGrid grid(3, 20.0, 2000);
    CHECK(grid.spacing() == 20.0 / 1999.0);
    CHECK(grid.point(0) == 0.0);
    CHECK(grid.point(grid.size() - 1) == 20.0);
    CHECK(grid.weight(0) == 0.0);
    for (double w : grid.weights()) CHECK(w >= 0.0);
    for (int i = 1; i < grid.size(); ++i) CHECK(grid.point(i) > grid.point(i - 1));
    CHECK_THROWS(RadialGrid(3, 20.0, 15));
    CHECK_THROWS(RadialGrid(3, -1.0, 100));
    CHECK_THROWS(RadialGrid(6, 500.0, 100));
}

TEST_CASE("fields reject non-finite values") {
    auto grid = make_grid(2, 1.0, 16);
    std::vector<double> values(16, 0.0);
    values[3] = std::nan("");
    CHECK_THROWS_AS(RadialField(grid, values), std::invalid_argument);
    CHECK_THROWS_AS(RadialField(grid, std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("radial integration against closed-form antiderivatives") {
    auto g2 = make_grid(2, 1.0, 4001);
    const double exact2 = 2.0 * std::numbers::pi * (std::cosh(1.0) - 1.0);
    CHECK(exact2 == doctest::Approx(3.41228).epsilon(1e-5));
    CHECK(integrate_radial(RadialField::from_function(g2, [](double) { return 1.0; })) ==
          doctest::Approx(exact2).epsilon(1e-7));

    auto g3 = make_grid(3, 1.0, 4001);
    const double exact3 = 4.0 * std::numbers::pi * (std::sinh(1.0) * std::cosh(1.0) - 1.0) / 2.0;
    CHECK(exact3 == doctest::Approx(5.1107).epsilon(1e-4));
    CHECK(integrate_radial(RadialField::from_function(g3, [](double) { return 1.0; })) ==
          doctest::Approx(exact3).epsilon(1e-7));

    CHECK(integrate_radial(RadialField(g3)) == 0.0);
}

TEST_CASE("radial integration is linear and monotone") {
    auto grid = make_grid(4, 5.0, 300);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> f(300), g(300), sum(300);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = dist(rng);
        g[i] = f[i] + std::abs(dist(rng));
        sum[i] = 2.0 * f[i] - 3.0 * g[i];
    }
    const double If = integrate_radial(*grid, f);
    const double Ig = integrate_radial(*grid, g);
    CHECK(If <= Ig);
    CHECK(integrate_radial(*grid, sum) == doctest::Approx(2.0 * If - 3.0 * Ig).epsilon(1e-12));
}

TEST_CASE("Morawetz weight gradient values") {
    for (int n = 2; n <= 6; ++n) CHECK(morawetz_weight_grad(0.0, n) == 0.0);
    const double expected = (std::sinh(1.0) * std::cosh(1.0) - 1.0) / (2.0 * std::sinh(1.0) * std::sinh(1.0));
    CHECK(expected == doctest::Approx(0.29446).epsilon(1e-4));
    CHECK(morawetz_weight_grad(1.0, 3) == doctest::Approx(expected).epsilon(1e-14));
    const double far = morawetz_weight_grad(50.0, 3);
    CHECK(far <= 0.5);
    CHECK(std::abs(far - 0.5) < 1e-6);
    CHECK_THROWS_AS(morawetz_weight_grad(-0.1, 3), std::invalid_argument);
}

TEST_CASE("closed forms agree with direct quadrature of the defining integral") {
    for (int n = 2; n <= 6; ++n) {
        for (double r : {0.05, 0.3, 0.7, 1.3, 2.5, 7.0, 30.0, 99.0, 150.0, 400.0}) {
            const double direct =
                integrate_converged([n, r](double s) { return std::pow(std::sinh(s) / std::sinh(r), n - 1); },
                                    0.0, r, 1e-12)
                    .value;
            if (!std::isfinite(direct)) continue;
            CAPTURE(n);
            CAPTURE(r);
            CHECK(morawetz_weight_grad(r, n) == doctest::Approx(direct).epsilon(1e-10));
        }
    }
}

TEST_CASE("Morawetz weight solves its ODE and respects the gradient bound") {
    for (int n = 2; n <= 6; ++n) {
        const double bound = 1.0 / (2.0 * rho(n));
        for (double r = 0.01; r < 60.0; r *= 1.3) {
            const double eps = 1e-5 * std::max(1.0, r);
            const double derivative =
                (morawetz_weight_grad(r + eps, n) - morawetz_weight_grad(r - eps, n)) / (2.0 * eps);
            const double residual = derivative + (n - 1) / std::tanh(r) * morawetz_weight_grad(r, n) - 1.0;
            CAPTURE(n);
            CAPTURE(r);
            CHECK(std::abs(residual) < 1e-8);
            const double g = morawetz_weight_grad(r, n);
            CHECK(g > 0.0);
            CHECK(g <= bound);
            // the gap to the bound decays like 1/r and rounds away past moderate radii
            if (r < 15.0) CHECK(g < bound);
        }
    }
}

TEST_CASE("Hessian positivity check") {
    const RadialGrid grid(3, 20.0, 2000);
    const auto report = morawetz_weight_hessian_check(grid, 1e-10);
    CHECK(report.ok);
    CHECK(report.violations == 0);
    CHECK(report.checked_points == 1998);
    CHECK(report.max_ode_residual < 1e-4);

    for (int n = 2; n <= 6; ++n) {
        CHECK(morawetz_weight_second(0.0, n) == doctest::Approx(1.0 / n));
        CHECK(morawetz_weight_second(1e-4, n) == doctest::Approx(1.0 / n).epsilon(1e-6));
        CHECK(morawetz_weight_hessian_check(RadialGrid(n, 30.0, 600)).ok);
    }
    CHECK(morawetz_weight_grad(1e-3, 2) == doctest::Approx(1e-3 / 2).epsilon(1e-6));

    const std::vector<double> single{1.0};
    const auto degenerate = morawetz_weight_hessian_check(single, 3);
    CHECK_FALSE(degenerate.ok);
    CHECK(degenerate.message.find("insufficient") != std::string::npos);
}

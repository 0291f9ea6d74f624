#include "doctest.h"
#include "hyperwave/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hyperwave;

namespace {

RadialField random_smooth_field(const GridPtr& grid, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double a = dist(rng), b = dist(rng), c = 1.0 + std::abs(dist(rng));
    return RadialField::from_function(grid, [=](double r) {
        return (a + b * r) * std::exp(-r * r / (c * c)) + 0.3 * a * std::exp(-(r - 3.0) * (r - 3.0));
    });
}

StatePair random_state(const SpectralOperator& op, std::uint64_t seed) {
    // Built from coefficients so the boundary nodes are consistent with the basis.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> c(static_cast<std::size_t>(op.size())), d(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double decay = 1.0 / (1.0 + 0.05 * static_cast<double>(k));
        c[k] = dist(rng) * decay;
        d[k] = dist(rng) * decay;
    }
    return StatePair(op.synthesize(c), op.synthesize(d));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("flux-form operator is symmetric in the trapezoid inner product") {
    for (int n = 2; n <= 6; ++n) {
        auto grid = make_grid(n, 8.0, 200);
        const ShiftedLaplacian lap(grid);
        auto f = random_smooth_field(grid, 1).values();
        auto g = random_smooth_field(grid, 2).values();
        std::vector<double> ff(f.begin(), f.end()), gg(g.begin(), g.end());
        ff.back() = 0.0;
        gg.back() = 0.0;
        std::vector<double> af(ff.size()), ag(gg.size());
        lap.apply(ff, af);
        lap.apply(gg, ag);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 1; i + 1 < ff.size(); ++i) {
            lhs += grid->weight(static_cast<int>(i)) * gg[i] * af[i];
            rhs += grid->weight(static_cast<int>(i)) * ff[i] * ag[i];
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("n=3 eigenvalues follow the sinh substitution oracle") {
    const SpectralOperator op = build_spectral(make_grid(3, 20.0, 512));
    const double h = 20.0 / 511.0;
    CHECK(std::abs(op.eigenvalue(0) - 1.0) < 10.0 * h * h + (std::numbers::pi / 20.0) * (std::numbers::pi / 20.0));
    for (int k = 1; k <= 10; ++k) {
        const double exact = 1.0 + std::pow(k * std::numbers::pi / 20.0, 2);
        CHECK(op.eigenvalue(k - 1) == doctest::Approx(exact).epsilon(1e-3));
    }
    CHECK(op.clamped_count() == 0);
    CHECK_FALSE(op.low_resolution());
}

TEST_CASE("spectrum stays above rho squared in every dimension") {
    for (int n = 2; n <= 6; ++n) {
        const SpectralOperator op = build_spectral(make_grid(n, 15.0, 300));
        CHECK(op.clamped_count() == 0);
        CHECK(op.eigenvalue(0) > op.rho2());
    }
}

TEST_CASE("small grids are flagged low resolution") {
    const SpectralOperator op = build_spectral(make_grid(3, 5.0, 16));
    CHECK(op.low_resolution());
    CHECK(op.size() == 14);
}

TEST_CASE("eigenvectors are orthonormal and Parseval holds") {
    auto grid = make_grid(4, 10.0, 160);
    const SpectralOperator op = build_spectral(grid);
    double worst = 0.0;
    for (int a = 0; a < op.size(); a += 7) {
        const auto ea = op.eigenmode(a);
        const auto coeffs = op.coefficients(ea);
        for (int b = 0; b < op.size(); ++b) {
            const double target = a == b ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(coeffs[static_cast<std::size_t>(b)] - target));
        }
    }
    CHECK(worst < 1e-8);

    const auto f = random_smooth_field(grid, 5);
    const auto c = op.coefficients(f);
    double parseval = 0.0;
    for (double x : c) parseval += x * x;
    double direct = 0.0;
    for (int i = 1; i + 1 < grid->size(); ++i) direct += grid->weight(i) * f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    CHECK(parseval == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("Sobolev norms") {
    auto grid = make_grid(3, 20.0, 400);
    const SpectralOperator op = build_spectral(grid);
    const auto f = random_smooth_field(grid, 9);
    CHECK(sobolev_norm(f, {0.0, 0.0}, op) == doctest::Approx(lq_norm(f, 2.0)).epsilon(1e-12));
    CHECK(sobolev_norm(RadialField(grid), {1.0, 1.0}, op) == 0.0);

    for (int k : {0, 3, 50}) {
        const auto ek = op.eigenmode(k);
        const double mu = op.eigenvalue(k);
        for (auto idx : {SobolevIndex{0.5, 0.5}, SobolevIndex{-0.5, 1.0}, SobolevIndex{2.0, -0.5}}) {
            const double expected = std::pow(mu - op.rho2(), idx.tau / 2) * std::pow(mu + 1.0, idx.sigma / 2);
            CHECK(sobolev_norm(ek, idx, op) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
    CHECK_THROWS(SobolevIndex(0.0, 1.5));
}

TEST_CASE("Sobolev scale is monotone in sigma") {
    auto grid = make_grid(2, 12.0, 240);
    const SpectralOperator op = build_spectral(grid);
    const auto f = random_smooth_field(grid, 3);
    for (double tau : {-0.5, 0.0, 0.5}) {
        double previous = 0.0;
        for (double sigma = -1.0; sigma <= 2.0; sigma += 0.25) {
            const double value = sobolev_norm(f, {sigma, tau}, op);
            CHECK(value >= previous * (1.0 - 1e-14));
            previous = value;
        }
    }
}

TEST_CASE("linear propagator") {
    auto grid = make_grid(3, 15.0, 300);
    const SpectralOperator op = build_spectral(grid);

    const StatePair state = random_state(op, 21);
    const StatePair same = linear_propagate(state, 0.0, op);
    CHECK(max_abs_diff(same.u.values(), state.u.values()) < 1e-10);
    CHECK(max_abs_diff(same.ut.values(), state.ut.values()) < 1e-10);

    const int k = 4;
    const StatePair mode(op.eigenmode(k), RadialField(grid));
    const StatePair moved = linear_propagate(mode, 2.7, op);
    const double factor = std::cos(2.7 * op.frequency(k));
    for (std::size_t i = 0; i < moved.u.size(); ++i) {
        CHECK(moved.u[i] == doctest::Approx(factor * mode.u[i]).epsilon(1e-9).scale(1e-9));
    }

    auto linear_energy = [&](const StatePair& s) {
        return 0.5 * std::pow(sobolev_norm(s.u, {0.0, 1.0}, op), 2) + 0.5 * std::pow(sobolev_norm(s.ut, {0.0, 0.0}, op), 2);
    };
    const double e0 = linear_energy(state);
    for (double t = 0.5; t <= 10.0; t += 0.5) {
        CHECK(std::abs(linear_energy(linear_propagate(state, t, op)) - e0) <= 1e-12 * e0);
    }

    const StatePair split = linear_propagate(linear_propagate(state, 1.3, op), 2.1, op);
    const StatePair direct = linear_propagate(state, 3.4, op);
    CHECK(max_abs_diff(split.u.values(), direct.u.values()) < 1e-10);
    CHECK(max_abs_diff(split.ut.values(), direct.ut.values()) < 1e-10);
    CHECK(direct.time == doctest::Approx(3.4));
}

TEST_CASE("Lq norms") {
    auto grid = make_grid(2, 1.0, 4001);
    CHECK(lq_norm(RadialField(grid), 3.0) == 0.0);
    const auto one = RadialField::from_function(grid, [](double) { return 1.0; });
    CHECK(lq_norm(one, 1.0) == doctest::Approx(2.0 * std::numbers::pi * (std::cosh(1.0) - 1.0)).epsilon(1e-7));
    CHECK_THROWS_AS(lq_norm(one, 0.5), std::invalid_argument);
}

TEST_CASE("Harish-Chandra density") {
    for (double lambda : {0.1, 0.5, 1.0, 3.0, 17.0}) {
        CHECK(harish_chandra_density(lambda, 3) == doctest::Approx(lambda * lambda).epsilon(1e-12));
        // |Gamma(1/2 + i l)|^2 / |Gamma(i l)|^2 = l tanh(pi l)
        CHECK(harish_chandra_density(lambda, 2) ==
              doctest::Approx(lambda * std::tanh(std::numbers::pi * lambda)).epsilon(1e-12));
        // rho = 2: |Gamma(2 + i l)|^2 = (1 + l^2) |Gamma(1 + i l)|^2
        CHECK(harish_chandra_density(lambda, 5) == doctest::Approx(lambda * lambda * (1.0 + lambda * lambda)).epsilon(1e-11));
    }
    CHECK(harish_chandra_density(0.0, 4) == 0.0);
    for (double lambda = 1e-4; lambda < 1e-2; lambda *= 2.0) {
        CHECK(harish_chandra_density(lambda, 2) / (lambda * lambda) < 4.0);
    }
    for (int n = 2; n <= 6; ++n) {
        double sup = 0.0;
        double inf = 1e300;
        for (double lambda = 0.01; lambda <= 50.0; lambda += 0.01) {
            const double ratio = harish_chandra_density(lambda, n) / (lambda * lambda * std::pow(1.0 + lambda, n - 3));
            sup = std::max(sup, ratio);
            if (lambda >= 1.0) inf = std::min(inf, ratio);
        }
        CAPTURE(n);
        CHECK(std::isfinite(sup));
        CHECK(inf > 0.05);
    }
}

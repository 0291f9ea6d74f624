#include "doctest.h"
#include "hyperwave/cone_transform.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace hyperwave;

namespace {

constexpr double kT0 = -2.0;

ClosedFormSolution time_solution() {
    return {[](double, double t) { return t; }, [](double, double) { return 0.0; }, [](double, double) { return 1.0; }};
}

double transported_residual(const ClosedFormSolution& sol, int points) {
    const auto grid = make_grid(2, 1.5, points);
    const double dtau = grid->spacing();
    const double tau = -0.5;
    const auto before = pushforward(sol, kT0, tau - dtau, grid);
    const auto now = pushforward(sol, kT0, tau, grid);
    const auto after = pushforward(sol, kT0, tau + dtau, grid);
    return shifted_wave_residual(before, now, after, dtau, true).max_residual;
}

SpaceTimeField quintic_field(int points, double amplitude) {
    QuinticConfig cfg;
    cfg.r_max = 12.0;
    cfg.num_points = points;
    cfg.taper_start = 9.0;
    cfg.taper_width = 2.0;
    cfg.initial_u = QuinticProfile::gaussian(amplitude, 0.0, 1.0);
    cfg.dense_stride = 1;
    return simulate_spacetime(cfg, 2.0, 2.0);
}

double quintic_transport_residual(int euclid_points, int h2_points) {
    const SpaceTimeField field = quintic_field(euclid_points, 0.8);
    const auto grid = make_grid(2, 1.2, h2_points);
    const double dtau = grid->spacing();
    const double tau = -0.4;
    const auto before = pushforward(field, kT0, tau - dtau, grid);
    const auto now = pushforward(field, kT0, tau, grid);
    const auto after = pushforward(field, kT0, tau + dtau, grid);
    return shifted_wave_residual(before, now, after, dtau, false).max_residual;
}

SpaceTimeField decay_field(int points) {
    QuinticConfig cfg;
    cfg.r_max = 120.0;
    cfg.num_points = points;
    cfg.taper_start = 90.0;
    cfg.taper_width = 24.0;
    cfg.initial_u = QuinticProfile::decay_displacement(1.0, 0.5);
    cfg.initial_ut = QuinticProfile::decay_velocity(1.0, 0.5);
    cfg.dense_stride = 2;
    return simulate_spacetime(cfg, 2.0, 42.0);
}

double s0_for_radius(double r, double tau) { return std::asinh(r * std::exp(-tau)); }

}  // namespace

TEST_CASE("cone coordinates of the vertex axis") {
    const ConeCoords c = cone_to_hyperbolic(0.0, -1.0, -2.0);
    CHECK(c.tau == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.s == 0.0);
    CHECK_THROWS_AS(cone_to_hyperbolic(1.0, -1.0, -2.0), ConeDomainError);
    CHECK_THROWS_AS(cone_to_hyperbolic(-0.1, 0.0, -2.0), ConeDomainError);
}

TEST_CASE("cone map round trip on random points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> tau(-3.0, 2.0), s(0.0, 4.0), t0(-5.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const ConeCoords c{t0(rng), tau(rng), s(rng)};
        const ConePoint p = hyperbolic_to_cone(c);
        const ConeCoords back = cone_to_hyperbolic(p.x_abs, p.t, c.t0);
        CHECK(std::abs(back.tau - c.tau) < 1e-12);
        CHECK(std::abs(back.s - c.s) < 1e-12 * std::max(1.0, c.s));
        const ConePoint again = hyperbolic_to_cone(back);
        CHECK(std::abs(again.x_abs - p.x_abs) < 1e-12 * std::max(1.0, p.x_abs));
        CHECK(std::abs(again.t - p.t) < 1e-12 * std::max(1.0, std::abs(p.t)));
    }
}

TEST_CASE("slice boundary meets t = 0") {
    CHECK(slice_boundary(0.0, -2.0) == doctest::Approx(1.316957896924816).epsilon(1e-14));
    const double tau = -0.7;
    const ConePoint p = hyperbolic_to_cone({-2.0, tau, slice_boundary(tau, -2.0)});
    CHECK(std::abs(p.t) < 1e-14);
    CHECK_THROWS_AS(slice_boundary(0.0, -0.5), ConeDomainError);
}

TEST_CASE("pushforward of zero is zero") {
    QuinticConfig cfg;
    cfg.r_max = 10.0;
    cfg.num_points = 200;
    cfg.dense_stride = 1;
    const SpaceTimeField field = simulate_spacetime(cfg, 2.0, 2.0);
    const auto grid = make_grid(2, 1.0, 50);
    const StatePair v = pushforward(field, kT0, -0.5, grid);
    for (int i = 0; i < grid->size(); ++i) {
        CHECK(v.u[i] == 0.0);
        CHECK(v.ut[i] == 0.0);
    }
    CHECK(local_energy_J1(pushforward(field, kT0, -0.5, make_grid(2, slice_boundary(-0.5, kT0), 50)), -0.5, kT0) == 0.0);
    CHECK_THROWS_AS(pushforward(field, kT0, 1.5, make_grid(2, 3.0, 50)), ConeDomainError);
    CHECK_THROWS(pushforward(field, kT0, -0.5, make_grid(3, 1.0, 50)));
}

TEST_CASE("pushforward of u = t solves the linear shifted wave equation") {
    const auto grid = make_grid(2, 1.5, 100);
    const StatePair v = pushforward(time_solution(), kT0, -0.3, grid);
    for (int i = 0; i < grid->size(); i += 7) {
        const double s = grid->point(i);
        const double e = std::exp(-0.3);
        CHECK(v.u[i] == doctest::Approx(std::sqrt(e) * (kT0 + e * std::cosh(s))));
    }
    const double coarse = transported_residual(time_solution(), 100);
    const double fine = transported_residual(time_solution(), 200);
    CHECK(coarse < 1e-3);
    CHECK(coarse / fine > 3.5);
    CHECK(coarse / fine < 4.5);
}

TEST_CASE("conjugation identity") {
    std::vector<ConeCoords> samples;
    for (double tau : {-0.8, -0.3, 0.2}) {
        for (double s : {0.3, 0.9, 1.6}) samples.push_back({kT0, tau, s});
    }
    auto constant = [](double, double) { return 3.0; };
    auto linear_time = [](double, double t) { return t; };
    auto bump = [](double r, double t) { return std::exp(-r * r - (t + 0.5) * (t + 0.5)); };
    CHECK(conjugation_residual(constant, kT0, samples, 1e-3) < 1e-5);
    const double lt_coarse = conjugation_residual(linear_time, kT0, samples, 2e-2);
    const double lt_fine = conjugation_residual(linear_time, kT0, samples, 1e-2);
    CHECK(lt_fine < 1e-3);
    CHECK(lt_coarse / lt_fine == doctest::Approx(4.0).epsilon(0.1));
    const double g_coarse = conjugation_residual(bump, kT0, samples, 2e-2);
    const double g_fine = conjugation_residual(bump, kT0, samples, 1e-2);
    CHECK(g_coarse / g_fine == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("volume identity for the cone map") {
    for (auto [tau1, tau2, s_b] : {std::tuple{-1.0, 0.0, 1.2}, std::tuple{-0.3, 0.4, 0.5}, std::tuple{0.0, 1.0, 2.0}}) {
        const VolumeComparison v = volume_identity(kT0, tau1, tau2, s_b);
        CHECK(v.cone == doctest::Approx(v.hyperbolic).epsilon(1e-10));
    }
    CHECK_THROWS(volume_identity(kT0, 0.0, -1.0, 1.0));
}

TEST_CASE("sextic integrals agree across the change of variables") {
    auto bump = [](double r, double t) { return std::exp(-0.5 * r * r) * std::cos(t); };
    const VolumeComparison v = sextic_slab(bump, kT0, -1.0, 0.0, 1.0);
    CHECK(v.hyperbolic > 0.0);
    CHECK(v.cone == doctest::Approx(v.hyperbolic).epsilon(1e-7));
}

TEST_CASE("pushed-forward quintic solution satisfies the shifted wave equation at second order") {
    const double coarse = quintic_transport_residual(601, 61);
    const double fine = quintic_transport_residual(1201, 121);
    CHECK(coarse / fine > 3.2);
    CHECK(coarse / fine < 4.8);
}

TEST_CASE("J1 from v and from u agree and refine") {
    const double tau = -0.5;
    const double s_tau = slice_boundary(tau, kT0);
    auto j1 = [&](int points) {
        const SpaceTimeField field = quintic_field(points, 0.8);
        const StatePair v = pushforward(field, kT0, tau, make_grid(2, s_tau, points / 4));
        return std::pair{local_energy_J1(v, tau, kT0), local_energy_J1_from_field(field, tau, kT0)};
    };
    const auto [v_coarse, u_coarse] = j1(601);
    const auto [v_fine, u_fine] = j1(1201);
    CHECK(std::isfinite(v_fine));
    CHECK(v_fine > 0.0);
    CHECK(v_fine == doctest::Approx(u_fine).epsilon(1e-3));
    CHECK(v_coarse == doctest::Approx(v_fine).epsilon(1e-2));
    CHECK(u_coarse == doctest::Approx(u_fine).epsilon(1e-3));
    const SpaceTimeField field = quintic_field(601, 0.8);
    CHECK_THROWS_AS(local_energy_J1_from_field(field, 0.5, kT0), std::invalid_argument);
    CHECK_THROWS_AS(local_energy_J1_from_field(field, -0.5, -1.2), std::invalid_argument);
}

TEST_CASE("J2 of the zero solution") {
    QuinticConfig cfg;
    cfg.r_max = 40.0;
    cfg.num_points = 400;
    cfg.dense_stride = 1;
    const SpaceTimeField field = simulate_spacetime(cfg, 2.0, 12.0);
    const J2Report rep = local_energy_J2(field, -0.5, s0_for_radius(10.0, -0.5), kT0, 0.05);
    CHECK(rep.J2 == 0.0);
    CHECK(rep.g_bound == 0.0);
    for (const auto& g : rep.profile) CHECK(g.g == 0.0);
}

TEST_CASE("J2 split, tail bound and refinement") {
    const double tau = -0.5, delta = 0.09;
    const SpaceTimeField coarse = decay_field(1201);
    const SpaceTimeField fine = decay_field(2401);
    const J2Report inner = local_energy_J2(fine, tau, s0_for_radius(20.0, tau), kT0, delta);
    const J2Report outer = local_energy_J2(fine, tau, s0_for_radius(40.0, tau), kT0, delta);
    for (const auto& g : outer.profile) {
        CHECK(g.g == doctest::Approx(g.g1 + g.g2 + g.g3 + g.g4).epsilon(1e-10));
    }
    CHECK(std::abs(outer.J2 - inner.J2) <= j2_tail_bound(outer.g_bound, inner.r_upper, delta));
    const J2Report outer_coarse = local_energy_J2(coarse, tau, s0_for_radius(40.0, tau), kT0, delta);
    CHECK(outer_coarse.J2 == doctest::Approx(outer.J2).epsilon(0.05));
    CHECK(refinement_stable(outer_coarse.g_bound, outer.g_bound));
    CHECK(refinement_stable(outer_coarse.g1_bound, outer.g1_bound));
    CHECK(refinement_stable(outer_coarse.g2_bound, outer.g2_bound));
    CHECK(refinement_stable(outer_coarse.g3_bound, outer.g3_bound));
    CHECK(refinement_stable(outer_coarse.g4_bound, outer.g4_bound));
    CHECK_THROWS_AS(local_energy_J2(fine, tau, s0_for_radius(80.0, tau), kT0, delta), ConeDomainError);
}

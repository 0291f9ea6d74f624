#include "doctest.h"
#include "hyperwave/quadrature.hpp"
#include "hyperwave/quintic_solver.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hyperwave;

namespace {

EuclideanState state_from(const FlatGrid& grid, const std::function<double(double)>& u,
                          const std::function<double(double)>& ut) {
    std::vector<double> a, b;
    for (double r : grid.points()) {
        a.push_back(u(r));
        b.push_back(ut(r));
    }
    return EuclideanState(grid, a, b);
}

QuinticConfig gaussian_run(int points, double t_final, bool linear) {
    QuinticConfig cfg;
    cfg.r_max = 20.0;
    cfg.num_points = points;
    cfg.t_final = t_final;
    cfg.linear = linear;
    cfg.initial_u = QuinticProfile::gaussian(1.0, 0.0, 1.0);
    return cfg;
}

RadialData gaussian_data() {
    RadialData data;
    data.u0 = oracle::gaussian(1.0, 0.0, 1.0);
    data.u0_prime = [](double r) { return -2.0 * r * std::exp(-r * r); };
    return data;
}

double max_error_vs_kernel(const QuinticTrajectory& traj, std::span<const double> radii) {
    const EuclideanState& last = traj.snapshots.back();
    const RadialData data = gaussian_data();
    double worst = 0.0;
    for (double x : radii) {
        const double h = last.grid.spacing();
        const auto i = static_cast<std::size_t>(std::lround(x / h));
        worst = std::max(worst, std::abs(last.u[i] - linear_representation(data, last.grid.point(static_cast<int>(i)), last.time)));
    }
    return worst;
}

SpaceTimeField decay_field(int points, double r_max, double t_span) {
    QuinticConfig cfg;
    cfg.r_max = r_max;
    cfg.num_points = points;
    cfg.initial_u = QuinticProfile::decay_displacement(1.0, 0.5);
    cfg.initial_ut = QuinticProfile::decay_velocity(1.0, 0.5);
    cfg.taper_start = 0.75 * r_max;
    cfg.taper_width = 0.2 * r_max;
    cfg.dense_stride = 4;
    return simulate_spacetime(cfg, t_span, t_span);
}

}  // namespace

TEST_CASE("flat grid and state validation") {
    CHECK_THROWS(FlatGrid(0.0, 100));
    CHECK_THROWS(FlatGrid(1.0, 8));
    const FlatGrid g(10.0, 101);
    CHECK(g.spacing() == doctest::Approx(0.1));
    CHECK(g.point(100) == 10.0);
    CHECK_THROWS(EuclideanState(g, std::vector<double>(100), std::vector<double>(101)));
    std::vector<double> bad(101, 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS(EuclideanState(g, bad, std::vector<double>(101)));
}

TEST_CASE("energy of the zero state vanishes") {
    const FlatGrid g(10.0, 200);
    const EuclideanState zero(g, std::vector<double>(200), std::vector<double>(200));
    CHECK(energy_2d(zero) == 0.0);
    CHECK(discrete_energy_2d(zero) == 0.0);
}

TEST_CASE("energy matches a Cartesian quadrature") {
    const FlatGrid g(12.0, 2401);
    const auto u0 = oracle::gaussian(1.0, 0.0, 1.0);
    const EuclideanState s = state_from(g, u0, [](double) { return 0.0; });
    auto density = [&](double r) {
        const double ur = -2.0 * r * std::exp(-r * r);
        return 0.5 * ur * ur + std::pow(u0(r), 6) / 6.0;
    };
    const double reference = oracle::cartesian_disk_integral(density, 8.0, 2000);
    CHECK(std::abs(energy_2d(s) - reference) <= 1e-6 * reference);
    // Closed form: pi/2 for the gradient part, pi/36 for the sextic part.
    CHECK(reference == doctest::Approx(std::numbers::pi / 2.0 + std::numbers::pi / 36.0).epsilon(1e-9));
}

TEST_CASE("energy of a decay-class state stays within A^2 + A^6 scaling") {
    const FlatGrid g(400.0, 40001);
    for (double A : {0.25, 1.0, 2.0}) {
        const auto u0 = QuinticProfile::decay_displacement(A, 0.5);
        const auto u1 = QuinticProfile::decay_velocity(A, 0.5);
        const EuclideanState s = state_from(g, [&](double r) { return u0.value(r); }, [&](double r) { return u1.value(r); });
        const double e = energy_2d(s);
        CHECK(e > 0.0);
        CHECK(e / (A * A + std::pow(A, 6)) < 10.0);
    }
}

TEST_CASE("zero data stay zero") {
    QuinticConfig cfg;
    cfg.r_max = 10.0;
    cfg.num_points = 200;
    cfg.t_final = 2.0;
    const auto traj = simulate_quintic(cfg);
    for (const auto& s : traj.series) {
        CHECK(s.energy == 0.0);
        CHECK(s.max_abs_u == 0.0);
        CHECK(s.l6l6_acc == 0.0);
    }
}

TEST_CASE("configuration validation") {
    QuinticConfig cfg = gaussian_run(200, 1.0, false);
    cfg.dt = 0.2;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = gaussian_run(200, 1.0, false);
    cfg.taper_start = 5.0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = gaussian_run(10, 1.0, false);
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}

TEST_CASE("quintic energy drift is small and the space-time norm accumulates monotonically") {
    const auto traj = simulate_quintic(gaussian_run(4000, 10.0, false));
    CHECK_FALSE(traj.blew_up);
    CHECK(traj.relative_energy_drift() <= 1e-4);
    for (std::size_t k = 1; k < traj.series.size(); ++k) CHECK(traj.series[k].l6l6_acc >= traj.series[k - 1].l6l6_acc);
    CHECK(std::isfinite(traj.series.back().l6l6_acc));
    // The fourth-order energy agrees with the conserved discrete energy to discretization order.
    const double e0 = energy_2d(traj.snapshots.front());
    const double e1 = energy_2d(traj.snapshots.back());
    CHECK(std::abs(e1 - e0) <= 1e-3 * e0);
}

TEST_CASE("linear run converges to the representation formula at second order") {
    const std::vector<double> radii{0.5, 1.0, 2.0, 3.5};
    const double coarse = max_error_vs_kernel(simulate_quintic(gaussian_run(1000, 3.0, true)), radii);
    const double fine = max_error_vs_kernel(simulate_quintic(gaussian_run(2000, 3.0, true)), radii);
    CHECK(fine < 1e-4);
    CHECK(coarse / fine > 3.2);
    CHECK(coarse / fine < 4.8);
}

TEST_CASE("representation formula kernel normalisation") {
    RadialData none;
    CHECK(linear_representation(none, 1.0, 2.0) == 0.0);
    RadialData ones;
    ones.u0 = [](double) { return 1.0; };
    ones.u0_prime = [](double) { return 0.0; };
    CHECK(linear_representation(ones, 0.7, 1.3) == doctest::Approx(1.0).epsilon(1e-8));
    RadialData velocity;
    velocity.u1 = [](double) { return 1.0; };
    CHECK(linear_representation(velocity, 2.0, 1.7) == doctest::Approx(1.7).epsilon(1e-8));
    RadialData forced;
    forced.source = [](double, double) { return 1.0; };
    CHECK(linear_representation(forced, 0.3, 1.2) == doctest::Approx(0.72).epsilon(1e-7));
    CHECK_THROWS(linear_representation(ones, 1.0, 0.0));
}

TEST_CASE("representation formula solves the linear wave equation with a quadratic datum") {
    // u0 = r^2 evolves as r^2 + 2 t^2.
    RadialData data;
    data.u0 = [](double r) { return r * r; };
    data.u0_prime = [](double r) { return 2.0 * r; };
    for (double x : {0.0, 0.8, 2.5}) {
        CHECK(linear_representation(data, x, 1.5) == doctest::Approx(x * x + 4.5).epsilon(1e-8));
    }
}

TEST_CASE("representation formula sees only the backward light cone") {
    const double x = 1.0, t = 1.5;
    RadialData full = gaussian_data();
    RadialData cut = gaussian_data();
    const auto g = full.u0;
    const auto gp = full.u0_prime;
    // Zero the data outside the ball B(x, t) (|y| > x + t covers all of it for radial data).
    cut.u0 = [g, x, t](double r) { return r <= x + t ? g(r) : 0.0; };
    cut.u0_prime = [gp, x, t](double r) { return r <= x + t ? gp(r) : 0.0; };
    CHECK(linear_representation(full, x, t) == linear_representation(cut, x, t));
}

TEST_CASE("forced linear run agrees with the Duhamel formula") {
    auto forcing = [](double r, double s) { return std::exp(-r * r) * std::cos(s); };
    QuinticConfig cfg;
    cfg.r_max = 16.0;
    cfg.num_points = 1601;
    cfg.t_final = 2.0;
    cfg.linear = true;
    cfg.source = forcing;
    const auto traj = simulate_quintic(cfg);
    RadialData data;
    data.source = forcing;
    const EuclideanState& last = traj.snapshots.back();
    for (int i : {0, 100, 200}) {
        const double expected = linear_representation(data, last.grid.point(i), last.time, 1e-9);
        CHECK(std::abs(last.u[static_cast<std::size_t>(i)] - expected) < 1e-4);
    }
}

TEST_CASE("backward run is the time reflection of the forward run") {
    QuinticConfig cfg = gaussian_run(400, 2.0, false);
    cfg.initial_ut = QuinticProfile::gaussian(0.5, 1.0, 1.0);
    const auto forward = simulate_quintic(cfg);
    QuinticConfig reflected = cfg;
    reflected.initial_ut = QuinticProfile::gaussian(-0.5, 1.0, 1.0);
    reflected.time_direction = -1;
    const auto backward = simulate_quintic(reflected);
    CHECK(backward.snapshots.back().time == doctest::Approx(-2.0));
    for (std::size_t i = 0; i < forward.snapshots.back().u.size(); ++i) {
        CHECK(backward.snapshots.back().u[i] == doctest::Approx(forward.snapshots.back().u[i]).epsilon(1e-12));
    }
}

TEST_CASE("space-time field interpolation and domain") {
    QuinticConfig cfg = gaussian_run(801, 3.0, true);
    cfg.taper_start = 15.0;
    cfg.taper_width = 2.0;
    const SpaceTimeField field = simulate_spacetime(cfg, 3.0, 3.0);
    CHECK(field.t_begin() == doctest::Approx(-3.0));
    CHECK(field.t_end() == doctest::Approx(3.0));
    CHECK(field.valid_reach() == 15.0);
    CHECK_FALSE(field.contains(14.0, 2.0));
    CHECK_THROWS_AS(field.sample(14.0, 2.0), std::out_of_range);
    const RadialData data = gaussian_data();
    for (double r : {0.0, 0.37, 1.91}) {
        for (double t : {-1.3, 0.55, 2.2}) {
            const auto s = field.sample(r, t);
            CHECK(std::abs(s.u - linear_representation(data, r, std::abs(t))) < 2e-3);
        }
    }
    // u_r against a centered difference of the interpolant
    const double eta = 1e-4;
    const auto s = field.sample(1.3, 0.9);
    CHECK(s.u_r == doctest::Approx((field.value(1.3 + eta, 0.9) - field.value(1.3 - eta, 0.9)) / (2 * eta)).epsilon(1e-3));
}

TEST_CASE("smooth cutoff is one inside and zero outside") {
    CHECK(smooth_cutoff(1.0, 2.0, 1.0) == 1.0);
    CHECK(smooth_cutoff(3.5, 2.0, 1.0) == 0.0);
    CHECK(smooth_cutoff(2.5, 2.0, 1.0) == doctest::Approx(0.5));
    double previous = 1.0;
    for (double r = 2.0; r <= 3.0; r += 0.01) {
        const double c = smooth_cutoff(r, 2.0, 1.0);
        CHECK(c <= previous + 1e-15);
        previous = c;
    }
}

TEST_CASE("decay profiles obey their class bounds") {
    DecayProfile prof(1.0, 0.5, 1.0, 0.09);
    CHECK_THROWS(DecayProfile(1.0, 0.5, 1.0, 0.1));
    CHECK_THROWS(DecayProfile(1.0, 0.05, 1.0, 0.06));
    CHECK(DecayProfile::default_delta(0.5) == doctest::Approx(0.05));
    QuinticConfig cfg;
    cfg.r_max = 500.0;
    cfg.num_points = 5001;
    cfg.initial_u = QuinticProfile::decay_displacement(1.0, 0.5);
    cfg.initial_ut = QuinticProfile::decay_velocity(1.0, 0.5);
    CHECK_NOTHROW(validate_decay_data(cfg, prof));
    cfg.initial_u = QuinticProfile::constant(0.5);
    CHECK_THROWS_AS(validate_decay_data(cfg, prof), std::invalid_argument);
}

TEST_CASE("mollified decay data stay in the decay class") {
    const FlatGrid g(200.0, 4001);
    const auto prof = QuinticProfile::decay_displacement(1.0, 0.5);
    std::vector<double> f;
    for (double r : g.points()) f.push_back(prof.value(r));
    const auto smooth = mollify_radial(g, f, 0.5);
    for (int i = 0; i + 20 < g.size(); ++i) {
        CHECK(std::abs(smooth[static_cast<std::size_t>(i)]) <= std::pow(1.0 + g.point(i), -1.0));
    }
    // A constant is preserved.
    const std::vector<double> ones(static_cast<std::size_t>(g.size()), 1.0);
    CHECK(mollify_radial(g, ones, 0.5)[100] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("decay diagnostics on the zero solution") {
    QuinticConfig cfg;
    cfg.r_max = 20.0;
    cfg.num_points = 400;
    const SpaceTimeField field = simulate_spacetime(cfg, 2.0, 2.0);
    const DecayProfile prof;
    CHECK(decay_check(field, prof).constant == 0.0);
    const auto d = derivative_decay_check(field, prof);
    CHECK(d.good.constant == 0.0);
    CHECK(d.incoming.constant == 0.0);
    CHECK(d.outgoing.constant == 0.0);
    CHECK(reduction_residual(field, 1.0).max_residual == 0.0);
    CHECK_THROWS(decay_check(field, DecayProfile(1.0, 0.5, 50.0, 0.09)));
}

TEST_CASE("decay constant at t = 0 is bounded by the data bound") {
    const SpaceTimeField field = decay_field(1201, 120.0, 1.0);
    const DecayProfile prof(1.0, 0.5, 1.0, 0.09);
    const auto report = decay_check(field, prof);
    // On the slice t = 0 the weight is r^{1/2+delta} against A (1+r)^{-1/2-eps}.
    double bound = 0.0;
    for (double r = 1.0; r < 120.0; r += 0.01) bound = std::max(bound, std::sqrt(r) * std::pow(r, prof.delta) * std::pow(1.0 + r, -1.0));
    CHECK(report.samples > 0);
    CHECK(std::isfinite(report.constant));
    CHECK(report.constant <= 2.0 * bound);
}

TEST_CASE("decay constant does not grow with R") {
    const SpaceTimeField field = decay_field(1201, 120.0, 8.0);
    double previous = INFINITY;
    for (double R : {1.0, 2.0, 4.0, 8.0}) {
        const double b1 = decay_check(field, DecayProfile(1.0, 0.5, R, 0.09)).constant;
        CHECK(b1 <= previous);
        previous = b1;
    }
}

TEST_CASE("decay constants are refinement stable for the quintic run") {
    const DecayProfile prof(1.0, 0.5, 1.0, 0.09);
    const SpaceTimeField coarse = decay_field(1201, 120.0, 10.0);
    const SpaceTimeField fine = decay_field(2401, 120.0, 10.0);
    CHECK(refinement_stable(decay_check(coarse, prof).constant, decay_check(fine, prof).constant));
    const auto dc = derivative_decay_check(coarse, prof);
    const auto df = derivative_decay_check(fine, prof);
    CHECK(refinement_stable(dc.good.constant, df.good.constant));
    CHECK(refinement_stable(dc.incoming.constant, df.incoming.constant));
    CHECK(refinement_stable(dc.outgoing.constant, df.outgoing.constant));
    CHECK_FALSE(refinement_stable(1.0, 2.0));
}

TEST_CASE("outgoing pulse: incoming derivative decays faster") {
    QuinticConfig cfg;
    cfg.r_max = 80.0;
    cfg.num_points = 3201;
    cfg.linear = true;
    cfg.initial_u = QuinticProfile::gaussian(1.0, 0.0, 1.0);
    cfg.dense_stride = 4;
    const SpaceTimeField field = simulate_spacetime(cfg, 1.0, 30.0);
    const double h = field.grid().spacing();
    const int j = field.time_count() - 1;
    const double t = field.time(j);
    // Near the front r = t + O(1) the incoming combination is O(r^{-3/2}) and the outgoing one O(r^{-1/2}).
    double in = 0.0, out = 0.0;
    for (int i = 1; i + 1 < field.grid().size(); ++i) {
        const double r = field.grid().point(i);
        if (std::abs(r - t) > 3.0) continue;
        const auto k = static_cast<std::size_t>(i);
        const double ur = (field.u_row(j)[k + 1] - field.u_row(j)[k - 1]) / (2 * h);
        in = std::max(in, std::abs(field.ut_row(j)[k] + ur));
        out = std::max(out, std::abs(field.ut_row(j)[k] - ur));
    }
    CHECK(in < 0.1 * out);
}

TEST_CASE("reduction residual converges at second order") {
    auto residual = [](int points, bool linear) {
        QuinticConfig cfg;
        cfg.r_max = 30.0;
        cfg.num_points = points;
        cfg.linear = linear;
        cfg.initial_u = QuinticProfile::gaussian(1.0, 3.0, 1.0);
        cfg.dense_stride = 2;
        return reduction_residual(simulate_spacetime(cfg, 1.0, 4.0), 1.0, linear).max_residual;
    };
    for (bool linear : {true, false}) {
        const double coarse = residual(601, linear);
        const double fine = residual(1201, linear);
        CHECK(coarse / fine > 3.2);
        CHECK(coarse / fine < 4.8);
    }
}

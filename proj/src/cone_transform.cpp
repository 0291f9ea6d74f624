#include "hyperwave/cone_transform.hpp"

#include "hyperwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hyperwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRho = 0.5;  // rho for H^2

std::string where(double r, double t) {
    std::ostringstream out;
    out << "(r=" << r << ", t=" << t << ")";
    return out.str();
}

void require_plane_grid(const RadialGrid& grid) {
    if (grid.dimension() != 2) throw std::invalid_argument("cone transform needs a grid on H^2");
}

void require_slice(double tau, double t0, double R) {
    if (!(tau >= -1.0 && tau <= 0.0)) throw std::invalid_argument("tau must lie in [-1, 0]");
    if (!(t0 < -std::sqrt(R * R + 1.0))) throw std::invalid_argument("t0 must be below -sqrt(R^2 + 1)");
}

}  // namespace

ConeCoords cone_to_hyperbolic(double x_abs, double t, double t0) {
    const double tp = t - t0;
    if (!std::isfinite(x_abs) || !std::isfinite(tp) || x_abs < 0.0 || !(tp > x_abs)) {
        throw ConeDomainError("point " + where(x_abs, t) + " is outside the open forward cone");
    }
    return {t0, 0.5 * std::log((tp - x_abs) * (tp + x_abs)), std::atanh(x_abs / tp)};
}

ConePoint hyperbolic_to_cone(const ConeCoords& c) {
    if (c.s < 0.0) throw ConeDomainError("s must be nonnegative");
    const double scale = std::exp(c.tau);
    return {scale * std::sinh(c.s), c.t0 + scale * std::cosh(c.s)};
}

double slice_boundary(double tau, double t0) {
    const double a = -std::exp(-tau) * t0;
    if (!(a >= 1.0)) throw ConeDomainError("the slice does not reach t = 0");
    return std::acosh(a);
}

namespace {

template <class Sampler>
StatePair push(Sampler&& sample, double t0, double tau, const GridPtr& h2_grid) {
    require_plane_grid(*h2_grid);
    const double scale = std::exp(tau);
    const double weight = std::exp(kRho * tau);
    std::vector<double> v, v_tau;
    v.reserve(static_cast<std::size_t>(h2_grid->size()));
    v_tau.reserve(v.capacity());
    for (double s : h2_grid->points()) {
        const double r = scale * std::sinh(s);
        const double tp = scale * std::cosh(s);
        const SpaceTimeField::Sample u = sample(r, t0 + tp);
        v.push_back(weight * u.u);
        v_tau.push_back(weight * (kRho * u.u + u.u_r * r + u.u_t * tp));
    }
    return StatePair(RadialField(h2_grid, std::move(v)), RadialField(h2_grid, std::move(v_tau)), tau);
}

}  // namespace

StatePair pushforward(const SpaceTimeField& field, double t0, double tau, const GridPtr& h2_grid) {
    auto sample = [&](double r, double t) {
        if (!field.contains(r, t)) throw ConeDomainError("slice leaves the simulated region at " + where(r, t));
        return field.sample(r, t);
    };
    return push(sample, t0, tau, h2_grid);
}

StatePair pushforward(const ClosedFormSolution& sol, double t0, double tau, const GridPtr& h2_grid) {
    auto sample = [&](double r, double t) {
        return SpaceTimeField::Sample{sol.u(r, t), sol.u_r ? sol.u_r(r, t) : 0.0, sol.u_t ? sol.u_t(r, t) : 0.0};
    };
    return push(sample, t0, tau, h2_grid);
}

ShiftedWaveResidual shifted_wave_residual(const StatePair& before, const StatePair& now, const StatePair& after,
                                          double dtau, bool linear) {
    if (!(dtau > 0.0)) throw std::invalid_argument("dtau must be positive");
    if (!now.u.same_grid(before.u) || !now.u.same_grid(after.u)) throw std::invalid_argument("slices on different grids");
    require_plane_grid(now.grid());
    const auto& grid = now.grid();
    const double h = grid.spacing();
    ShiftedWaveResidual out;
    for (int i = 1; i + 1 < grid.size(); ++i) {
        const double s = grid.point(i);
        const double vm = now.u[i - 1], v0 = now.u[i], vp = now.u[i + 1];
        const double v_ss = (vp - 2.0 * v0 + vm) / (h * h);
        const double v_s = (vp - vm) / (2.0 * h);
        const double v_tt = (after.u[i] - 2.0 * v0 + before.u[i]) / (dtau * dtau);
        double residual = v_tt - v_ss - v_s / std::tanh(s) - kRho * kRho * v0;
        if (!linear) residual += v0 * v0 * v0 * v0 * v0;
        if (std::abs(residual) > out.max_residual) {
            out.max_residual = std::abs(residual);
            out.s_at_max = s;
        }
    }
    return out;
}

double conjugation_residual(const std::function<double(double, double)>& test_u, double t0,
                            std::span<const ConeCoords> samples, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    auto v = [&](double tau, double s) {
        const ConePoint p = hyperbolic_to_cone({t0, tau, s});
        return std::exp(kRho * tau) * test_u(p.x_abs, p.t);
    };
    double worst = 0.0;
    for (const ConeCoords& c : samples) {
        const ConePoint p = hyperbolic_to_cone({t0, c.tau, c.s});
        if (!(c.s > eta) || !(p.x_abs > eta)) throw std::invalid_argument("samples must stay away from the axis");
        const double u0 = test_u(p.x_abs, p.t);
        const double u_tt = (test_u(p.x_abs, p.t + eta) - 2.0 * u0 + test_u(p.x_abs, p.t - eta)) / (eta * eta);
        const double up = test_u(p.x_abs + eta, p.t), um = test_u(p.x_abs - eta, p.t);
        const double laplacian = (up - 2.0 * u0 + um) / (eta * eta) + (up - um) / (2.0 * eta * p.x_abs);
        const double lhs = std::exp(kRho * c.tau) * (-u_tt + laplacian);

        const double v0 = v(c.tau, c.s);
        const double v_tt = (v(c.tau + eta, c.s) - 2.0 * v0 + v(c.tau - eta, c.s)) / (eta * eta);
        const double vp = v(c.tau, c.s + eta), vm = v(c.tau, c.s - eta);
        const double laplacian_h = (vp - 2.0 * v0 + vm) / (eta * eta) + (vp - vm) / (2.0 * eta * std::tanh(c.s));
        const double rhs = std::exp(-2.0 * c.tau) * (-v_tt + laplacian_h + kRho * kRho * v0);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

namespace {

void require_slab(double tau1, double tau2, double s_b) {
    if (!(tau1 < tau2)) throw std::invalid_argument("need tau1 < tau2");
    if (!(s_b > 0.0)) throw std::invalid_argument("s_b must be positive");
}

// t_+ range of the slab preimage at radius r, empty when lower >= upper.
std::pair<double, double> slab_time_range(double r, double tau1, double tau2, double s_b) {
    const double lower = std::max(std::sqrt(r * r + std::exp(2.0 * tau1)), r / std::tanh(s_b));
    const double upper = std::sqrt(r * r + std::exp(2.0 * tau2));
    return {lower, upper};
}

template <class Radial>
double over_slab_radii(Radial&& radial, double tau1, double tau2, double s_b, double rel_tol) {
    // The lower boundary switches from the hyperboloid to the line s = s_b at the kink.
    const double kink = std::exp(tau1) * std::sinh(s_b);
    const double end = std::exp(tau2) * std::sinh(s_b);
    return integrate_converged(radial, 0.0, kink, rel_tol, 2, 1 << 14, 1e-300).value +
           integrate_converged(radial, kink, end, rel_tol, 2, 1 << 14, 1e-300).value;
}

}  // namespace

VolumeComparison volume_identity(double t0, double tau1, double tau2, double s_b) {
    require_slab(tau1, tau2, s_b);
    (void)t0;  // both sides are invariant under shifting the vertex
    VolumeComparison out;
    out.hyperbolic = 2.0 * kPi * (std::cosh(s_b) - 1.0) * (std::exp(3.0 * tau2) - std::exp(3.0 * tau1)) / 3.0;
    auto radial = [&](double r) {
        const auto [lower, upper] = slab_time_range(r, tau1, tau2, s_b);
        return upper > lower ? 2.0 * kPi * r * (upper - lower) : 0.0;
    };
    out.cone = over_slab_radii(radial, tau1, tau2, s_b, 1e-12);
    return out;
}

VolumeComparison sextic_slab(const std::function<double(double, double)>& u, double t0, double tau1, double tau2,
                             double s_b) {
    require_slab(tau1, tau2, s_b);
    auto sixth = [](double x) {
        const double x2 = x * x;
        return x2 * x2 * x2;
    };
    VolumeComparison out;
    auto slice = [&](double tau) {
        auto ring = [&](double s) {
            const ConePoint p = hyperbolic_to_cone({t0, tau, s});
            return sixth(std::exp(kRho * tau) * u(p.x_abs, p.t)) * 2.0 * kPi * std::sinh(s);
        };
        return integrate_converged(ring, 0.0, s_b, 1e-11, 2, 1 << 14, 1e-300).value;
    };
    out.hyperbolic = integrate_converged(slice, tau1, tau2, 1e-9, 2, 1 << 12, 1e-300).value;
    auto radial = [&](double r) {
        const auto [lower, upper] = slab_time_range(r, tau1, tau2, s_b);
        if (!(upper > lower)) return 0.0;
        auto column = [&](double tp) { return sixth(u(r, t0 + tp)); };
        return 2.0 * kPi * r * integrate_converged(column, lower, upper, 1e-11, 2, 1 << 14, 1e-300).value;
    };
    out.cone = over_slab_radii(radial, tau1, tau2, s_b, 1e-9);
    return out;
}

double local_energy_J1(const StatePair& v_state, double tau, double t0, double R) {
    require_slice(tau, t0, R);
    const RadialGrid& grid = v_state.grid();
    require_plane_grid(grid);
    const double s_tau = slice_boundary(tau, t0);
    if (grid.r_max() < s_tau * (1.0 - 1e-12)) throw std::invalid_argument("H^2 grid does not reach s_tau");
    const double h = grid.spacing();
    const int n = grid.size();
    std::vector<double> density(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double v_s = 0.0;
        if (i > 0 && i + 1 < n) {
            v_s = (v_state.u[i + 1] - v_state.u[i - 1]) / (2.0 * h);
        } else if (i + 1 == n) {
            v_s = (3.0 * v_state.u[i] - 4.0 * v_state.u[i - 1] + v_state.u[i - 2]) / (2.0 * h);
        }
        const double v = v_state.u[i];
        const double v2 = v * v;
        const double e = v_state.ut[i] * v_state.ut[i] + v_s * v_s - kRho * kRho * v2 + v2 * v2 * v2 / 3.0;
        density[static_cast<std::size_t>(i)] = 0.5 * e * 2.0 * kPi * std::sinh(grid.point(i));
    }
    double total = 0.0;
    int i = 0;
    for (; i + 1 < n && grid.point(i + 1) <= s_tau; ++i) {
        total += 0.5 * h * (density[static_cast<std::size_t>(i)] + density[static_cast<std::size_t>(i + 1)]);
    }
    const double rest = s_tau - grid.point(i);
    if (rest > 0.0 && i + 1 < n) {
        const double frac = rest / h;
        const double end = (1.0 - frac) * density[static_cast<std::size_t>(i)] + frac * density[static_cast<std::size_t>(i + 1)];
        total += 0.5 * rest * (density[static_cast<std::size_t>(i)] + end);
    }
    return total;
}

double local_energy_J1_from_field(const SpaceTimeField& field, double tau, double t0, double R) {
    require_slice(tau, t0, R);
    const double s_tau = slice_boundary(tau, t0);
    const double e = std::exp(tau);
    auto integrand = [&](double s) {
        const double sh = std::sinh(s), ch = std::cosh(s);
        const double r = e * sh, t = t0 + e * ch;
        if (!field.contains(r, t)) throw ConeDomainError("slice leaves the simulated region at " + where(r, t));
        const auto u = field.sample(r, t);
        const double quad = (u.u_r * u.u_r + u.u_t * u.u_t) * e * e * (ch * ch + sh * sh) + 4.0 * u.u_r * u.u_t * e * e * sh * ch;
        const double cross = 2.0 * kRho * u.u * (u.u_r * e * sh + u.u_t * e * ch);
        const double u2 = u.u * u.u;
        const double value = e * (quad + cross) + e * e * e * u2 * u2 * u2 / 3.0;
        return 0.5 * value * 2.0 * kPi * sh;
    };
    // One panel per lattice cell along the slice keeps the piecewise-cubic samples resolved.
    const double arc = e * (std::cosh(s_tau) - 1.0) + e * std::sinh(s_tau);
    const int panels = std::max(16, static_cast<int>(std::ceil(arc / std::min(field.grid().spacing(), field.t_step()))));
    return gauss_panels(integrand, 0.0, s_tau, panels);
}

namespace {

GSample g_split(double r, double tau, const SpaceTimeField::Sample& u, double t_plus) {
    const double e2 = std::exp(2.0 * tau);
    const double grad2 = u.u_r * u.u_r + u.u_t * u.u_t;
    const double u2 = u.u * u.u;
    const double u6 = u2 * u2 * u2;
    GSample out;
    out.r = r;
    out.g = r / t_plus *
            (grad2 * (t_plus * t_plus + r * r) + 4.0 * u.u_r * u.u_t * t_plus * r + 2.0 * kRho * u.u * u.u_r * r +
             2.0 * kRho * u.u * u.u_t * t_plus + e2 * u6 / 3.0);
    out.g1 = 2.0 * r * r * grad2 + 4.0 * r * r * u.u_r * u.u_t + 2.0 * kRho * u.u * u.u_r * r + 2.0 * kRho * u.u * u.u_t * r;
    out.g2 = e2 / 3.0 * r / t_plus * u6;
    // r (r^2 + t+^2) / t+ - 2 r^2 = r (t+ - r)^2 / t+, written without cancellation.
    const double gap = e2 / (t_plus + r);  // t+ - r
    out.g3 = r * gap * gap / t_plus * grad2;
    // r^2 / t+ - r = -r (t+ - r) / t+
    out.g4 = -r * gap / t_plus * 2.0 * kRho * u.u * u.u_r;
    return out;
}

}  // namespace

J2Report local_energy_J2(const SpaceTimeField& field, double tau, double s0, double t0, double delta, double R) {
    require_slice(tau, t0, R);
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    J2Report out;
    const double e = std::exp(tau);
    out.r_lower = std::sqrt(t0 * t0 - e * e);
    out.r_upper = e * std::sinh(s0);
    if (!(out.r_upper > out.r_lower)) throw std::invalid_argument("s0 must exceed s_tau");
    auto evaluate = [&](double r) {
        const double t_plus = std::sqrt(r * r + e * e);
        const double t = t0 + t_plus;
        if (!(r - t > R)) throw ConeDomainError("ring point " + where(r, t) + " is not in the exterior region");
        if (!field.contains(r, t)) throw ConeDomainError("ring leaves the simulated region at " + where(r, t));
        return g_split(r, tau, field.sample(r, t), t_plus);
    };
    const double h = field.grid().spacing();
    const int panels = std::max(16, static_cast<int>(std::ceil((out.r_upper - out.r_lower) / h)));
    const double integral = gauss_panels([&](double r) { return evaluate(r).g; }, out.r_lower, out.r_upper, panels);
    out.J2 = kPi * integral;  // (c/2) with c = 2 pi
    const int samples = std::max(2, static_cast<int>(std::ceil((out.r_upper - out.r_lower) / h)) + 1);
    out.profile.reserve(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double r = out.r_lower + (out.r_upper - out.r_lower) * k / (samples - 1);
        const GSample g = evaluate(r);
        out.profile.push_back(g);
        out.g_bound = std::max(out.g_bound, std::abs(g.g) * std::pow(r, 1.0 + delta));
        out.g1_bound = std::max(out.g1_bound, std::abs(g.g1) * std::pow(r, 1.0 + delta));
        out.g2_bound = std::max(out.g2_bound, std::abs(g.g2) * r * r * r);
        out.g3_bound = std::max(out.g3_bound, std::abs(g.g3) * r * r * r);
        out.g4_bound = std::max(out.g4_bound, std::abs(g.g4) * r * r);
    }
    return out;
}

double j2_tail_bound(double g_bound, double r, double delta) {
    if (!(r > 0.0) || !(delta > 0.0)) throw std::invalid_argument("tail bound needs r > 0 and delta > 0");
    return kPi * g_bound * std::pow(r, -delta) / delta;
}

}  // namespace hyperwave

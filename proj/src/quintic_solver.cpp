#include "hyperwave/quintic_solver.hpp"

#include "hyperwave/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hyperwave {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FlatGrid::FlatGrid(double r_max, int num_points) : r_max_(r_max) {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("FlatGrid: r_max must be positive");
    if (num_points < 16) throw std::invalid_argument("FlatGrid: num_points must be at least 16");
    h_ = r_max / (num_points - 1);
    points_.resize(static_cast<std::size_t>(num_points));
    for (int i = 0; i < num_points; ++i) points_[static_cast<std::size_t>(i)] = (i + 1 == num_points) ? r_max : i * h_;
}

EuclideanState::EuclideanState(FlatGrid grid_in, std::vector<double> u_in, std::vector<double> ut_in, double t)
    : grid(std::move(grid_in)), u(std::move(u_in)), ut(std::move(ut_in)), time(t) {
    const auto n = static_cast<std::size_t>(grid.size());
    if (u.size() != n || ut.size() != n) throw std::invalid_argument("EuclideanState: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(u[i]) || !std::isfinite(ut[i])) throw std::invalid_argument("EuclideanState: non-finite value");
    }
}

namespace {

// Fourth-order radial derivative with even reflection through r = 0.
std::vector<double> radial_derivative(const FlatGrid& grid, std::span<const double> u) {
    const int n = grid.size();
    const double h = grid.spacing();
    auto at = [&](int i) { return u[static_cast<std::size_t>(std::abs(i))]; };
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        if (i + 2 <= n - 1) {
            d[static_cast<std::size_t>(i)] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
        } else if (i + 1 <= n - 1) {
            d[static_cast<std::size_t>(i)] = (at(i + 1) - at(i - 1)) / (2.0 * h);
        } else {
            d[static_cast<std::size_t>(i)] = (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h);
        }
    }
    return d;
}

}  // namespace

double energy_2d(const EuclideanState& state) {
    const FlatGrid& grid = state.grid;
    const int n = grid.size();
    const double h = grid.spacing();
    const auto ur = radial_derivative(grid, state.u);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double u2 = state.u[k] * state.u[k];
        const double density = 0.5 * state.ut[k] * state.ut[k] + 0.5 * ur[k] * ur[k] + u2 * u2 * u2 / 6.0;
        g[k] = grid.point(i) * density;
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += g[static_cast<std::size_t>(i)];
    sum -= 0.5 * (g.front() + g.back());
    const double density0 = g.size() > 1 ? (0.5 * state.ut[0] * state.ut[0] + std::pow(state.u[0], 6) / 6.0) : 0.0;
    const auto last = g.size() - 1;
    const double slope_end = (3.0 * g[last] - 4.0 * g[last - 1] + g[last - 2]) / (2.0 * h);
    const double corrected = h * sum - h * h / 12.0 * (slope_end - density0);
    return kTwoPi * corrected;
}

namespace {

double cell_mass(const FlatGrid& grid, int i) { return i == 0 ? grid.spacing() / 8.0 : grid.point(i); }

}  // namespace

double discrete_energy_2d(const EuclideanState& state, bool linear) {
    const FlatGrid& grid = state.grid;
    const int n = grid.size();
    const double h = grid.spacing();
    double total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double u2 = state.u[k] * state.u[k];
        const double potential = linear ? 0.0 : u2 * u2 * u2 / 6.0;
        total += h * cell_mass(grid, i) * (0.5 * state.ut[k] * state.ut[k] + potential);
        const double face = (i + 0.5) * h;
        const double jump = state.u[k + 1] - state.u[k];
        total += face * jump * jump / (2.0 * h);
    }
    return kTwoPi * total;
}

DecayProfile::DecayProfile(double A_in, double eps_in, double R_in, double delta_in)
    : A(A_in), eps(eps_in), R(R_in), delta(delta_in) {
    if (!(A > 0.0)) throw std::invalid_argument("DecayProfile: A must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("DecayProfile: eps must be positive");
    if (!(R >= 0.0)) throw std::invalid_argument("DecayProfile: R must be nonnegative");
    if (!(delta > 0.0 && delta < std::min(eps, 0.1))) {
        throw std::invalid_argument("DecayProfile: delta must lie in (0, min{eps, 1/10})");
    }
}

double DecayProfile::default_delta(double eps) { return 0.5 * std::min(eps, 0.1); }

QuinticProfile QuinticProfile::gaussian(double amplitude, double center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be positive");
    QuinticProfile p;
    p.kind = Kind::gaussian;
    p.amplitude = amplitude;
    p.center = center;
    p.width = width;
    return p;
}

QuinticProfile QuinticProfile::constant(double value) {
    QuinticProfile p;
    p.kind = Kind::constant;
    p.amplitude = value;
    return p;
}

QuinticProfile QuinticProfile::decay_displacement(double A, double eps) {
    if (!(A > 0.0) || !(eps > 0.0)) throw std::invalid_argument("decay profile needs A, eps > 0");
    QuinticProfile p;
    p.kind = Kind::decay_displacement;
    p.amplitude = A;
    p.eps = eps;
    return p;
}

QuinticProfile QuinticProfile::decay_velocity(double A, double eps) {
    QuinticProfile p = decay_displacement(A, eps);
    p.kind = Kind::decay_velocity;
    return p;
}

namespace {

// c A (1 + r^2)^{-a/2} with c small enough that the class bounds hold with
// 10% room: (1+r)^2 <= 2(1+r^2) gives the value bound, and
// r (1+r^2)^{-a/2-1} <= 2^{(a+1)/2} (1+r)^{-a-1} gives the derivative bound.
double decay_scale(double a, bool needs_derivative_bound) {
    double c = std::pow(2.0, -a / 2.0);
    if (needs_derivative_bound) c = std::min(c, 1.0 / (a * std::pow(2.0, (a + 1.0) / 2.0)));
    return 0.9 * c;
}

}  // namespace

double QuinticProfile::value(double r) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::constant:
            return amplitude;
        case Kind::gaussian: {
            const double z = (r - center) / width;
            return amplitude * std::exp(-z * z);
        }
        case Kind::decay_displacement: {
            const double a = 0.5 + eps;
            return decay_scale(a, true) * amplitude * std::pow(1.0 + r * r, -a / 2.0);
        }
        case Kind::decay_velocity: {
            const double b = 1.5 + eps;
            return decay_scale(b, false) * amplitude * std::pow(1.0 + r * r, -b / 2.0);
        }
    }
    return 0.0;
}

double QuinticProfile::derivative(double r) const {
    switch (kind) {
        case Kind::zero:
        case Kind::constant:
            return 0.0;
        case Kind::gaussian: {
            const double z = (r - center) / width;
            return -2.0 * z / width * amplitude * std::exp(-z * z);
        }
        case Kind::decay_displacement: {
            const double a = 0.5 + eps;
            return -decay_scale(a, true) * amplitude * a * r * std::pow(1.0 + r * r, -a / 2.0 - 1.0);
        }
        case Kind::decay_velocity: {
            const double b = 1.5 + eps;
            return -decay_scale(b, false) * amplitude * b * r * std::pow(1.0 + r * r, -b / 2.0 - 1.0);
        }
    }
    return 0.0;
}

std::string QuinticProfile::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind) {
        case Kind::zero:
            out << "zero";
            break;
        case Kind::constant:
            out << "constant(" << amplitude << ")";
            break;
        case Kind::gaussian:
            out << "gaussian(" << amplitude << ", " << center << ", " << width << ")";
            break;
        case Kind::decay_displacement:
            out << "decay_displacement(" << amplitude << ", " << eps << ")";
            break;
        case Kind::decay_velocity:
            out << "decay_velocity(" << amplitude << ", " << eps << ")";
            break;
    }
    return out.str();
}

double smooth_cutoff(double r, double start, double width) {
    if (r <= start) return 1.0;
    if (!(width > 0.0)) return 0.0;
    const double x = (r - start) / width;
    if (x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - x));
    const double b = std::exp(-1.0 / x);
    return a / (a + b);
}

double QuinticTrajectory::relative_energy_drift() const {
    const double e0 = series.front().energy;
    double worst = 0.0;
    for (const auto& s : series) worst = std::max(worst, std::abs(s.energy - e0));
    return e0 != 0.0 ? worst / std::abs(e0) : worst;
}

QuinticConfig validate(QuinticConfig cfg) {
    if (!(cfg.r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
    if (cfg.num_points < 16) throw std::invalid_argument("num_points must be at least 16");
    if (!(cfg.t_final > 0.0)) throw std::invalid_argument("t_final must be positive");
    if (cfg.time_direction != 1 && cfg.time_direction != -1) throw std::invalid_argument("time_direction must be +1 or -1");
    if (cfg.snapshot_count < 2) throw std::invalid_argument("snapshot_count must be at least 2");
    if (cfg.dense_stride < 0) throw std::invalid_argument("dense_stride must be nonnegative");
    if (std::isfinite(cfg.taper_start) && !(cfg.taper_width > 0.0)) {
        throw std::invalid_argument("a finite taper_start needs a positive taper_width");
    }
    const double h = cfg.r_max / (cfg.num_points - 1);
    if (cfg.dt <= 0.0) cfg.dt = cfg.t_final / std::ceil(cfg.t_final / (0.5 * h));
    if (cfg.dt / h > 0.9) throw std::invalid_argument("CFL violation: dt/h must not exceed 0.9");
    // Gershgorin bound 8/h^2 comes from the center row.
    if (cfg.dt * std::sqrt(8.0) / h >= 2.0) throw std::invalid_argument("time step exceeds the stability limit");
    return cfg;
}

namespace {

class QuinticStepper {
public:
    QuinticStepper(const QuinticConfig& cfg, const FlatGrid& grid) : cfg_(cfg), grid_(grid) {
        const int n = grid.size();
        const double h = grid.spacing();
        up_.assign(static_cast<std::size_t>(n), 0.0);
        down_.assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i + 1 < n; ++i) {
            const double scale = 1.0 / (h * h * cell_mass(grid, i));
            up_[static_cast<std::size_t>(i)] = (i + 0.5) * h * scale;
            down_[static_cast<std::size_t>(i)] = i > 0 ? (i - 0.5) * h * scale : 0.0;
        }
        acc_.assign(static_cast<std::size_t>(n), 0.0);
    }

    void acceleration(std::span<const double> u, double t, std::span<double> out) const {
        const std::size_t n = u.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double left = i > 0 ? u[i - 1] : 0.0;
            double a = up_[i] * (u[i + 1] - u[i]) - down_[i] * (u[i] - left);
            if (!cfg_.linear) {
                const double u2 = u[i] * u[i];
                a -= u2 * u2 * u[i];
            }
            if (cfg_.source) a += cfg_.source(grid_.point(static_cast<int>(i)), t);
            out[i] = a;
        }
        out[n - 1] = 0.0;
    }

    void step(std::vector<double>& u, std::vector<double>& v, double t, double dt) {
        acceleration(u, t, acc_);
        for (std::size_t i = 0; i < u.size(); ++i) v[i] += 0.5 * dt * acc_[i];
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * v[i];
        u.back() = 0.0;
        acceleration(u, t + dt, acc_);
        for (std::size_t i = 0; i < u.size(); ++i) v[i] += 0.5 * dt * acc_[i];
        v.back() = 0.0;
    }

private:
    QuinticConfig cfg_;
    FlatGrid grid_;
    std::vector<double> up_;
    std::vector<double> down_;
    std::vector<double> acc_;
};

double l6_integral(const FlatGrid& grid, std::span<const double> u) {
    const double h = grid.spacing();
    double total = 0.0;
    for (int i = 0; i + 1 < grid.size(); ++i) {
        const double u2 = u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
        total += h * cell_mass(grid, i) * u2 * u2 * u2;
    }
    return kTwoPi * total;
}

}  // namespace

QuinticTrajectory simulate_quintic(const QuinticConfig& raw) {
    const QuinticConfig cfg = validate(raw);
    const FlatGrid grid(cfg.r_max, cfg.num_points);
    QuinticTrajectory traj{cfg, grid, cfg.dt, {}, {}, std::nullopt, false, 0.0};
    const int dir = cfg.time_direction;
    const auto n = static_cast<std::size_t>(grid.size());

    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = grid.point(static_cast<int>(i));
        const double taper = smooth_cutoff(r, cfg.taper_start, cfg.taper_width);
        u[i] = taper * cfg.initial_u.value(r);
        v[i] = dir * taper * cfg.initial_ut.value(r);
    }
    u.back() = 0.0;
    v.back() = 0.0;

    // A backward run is a forward run of the reflected problem; the source is reflected too.
    QuinticConfig internal = cfg;
    if (dir == -1 && cfg.source) {
        internal.source = [src = cfg.source](double r, double t) { return src(r, -t); };
    }
    QuinticStepper stepper(internal, grid);
    const long total_steps = std::lround(cfg.t_final / cfg.dt);
    auto actual_state = [&](double t_internal) {
        std::vector<double> ut(v);
        for (double& x : ut) x *= dir;
        return EuclideanState(grid, u, std::move(ut), dir * t_internal);
    };
    auto energy_now = [&] { return discrete_energy_2d(EuclideanState(grid, u, v), cfg.linear); };
    auto max_abs = [&] {
        double m = 0.0;
        for (double x : u) m = std::max(m, std::abs(x));
        return m;
    };

    std::vector<std::vector<double>> dense_u, dense_ut;
    auto store_dense = [&] {
        dense_u.push_back(u);
        std::vector<double> ut(v);
        for (double& x : ut) x *= dir;
        dense_ut.push_back(std::move(ut));
    };

    traj.series.push_back({0.0, energy_now(), 0.0, max_abs()});
    traj.snapshots.push_back(actual_state(0.0));
    if (cfg.dense_stride > 0) store_dense();
    const long stride = std::max<long>(1, total_steps / (cfg.snapshot_count - 1));
    double l6_previous = l6_integral(grid, u);
    double l6_acc = 0.0;

    for (long step = 1; step <= total_steps; ++step) {
        const double t_prev = (step - 1) * cfg.dt;
        stepper.step(u, v, t_prev, cfg.dt);
        const double t_now = step * cfg.dt;
        const double peak = max_abs();
        if (!std::isfinite(peak) || peak > cfg.blowup_threshold) {
            traj.blew_up = true;
            traj.status_time = dir * t_prev;
            return traj;
        }
        const double l6_now = l6_integral(grid, u);
        l6_acc += 0.5 * cfg.dt * (l6_previous + l6_now);
        l6_previous = l6_now;
        traj.series.push_back({dir * t_now, energy_now(), l6_acc, peak});
        if (step % stride == 0 || step == total_steps) traj.snapshots.push_back(actual_state(t_now));
        if (cfg.dense_stride > 0 && step % cfg.dense_stride == 0) store_dense();
    }
    traj.status_time = dir * total_steps * cfg.dt;
    if (cfg.dense_stride > 0) {
        const double reach = std::min(cfg.taper_start, cfg.r_max);
        const double step_t = dir * cfg.dense_stride * cfg.dt;
        if (dir == 1) {
            traj.dense.emplace(grid, 0.0, step_t, std::move(dense_u), std::move(dense_ut), reach);
        } else {
            std::reverse(dense_u.begin(), dense_u.end());
            std::reverse(dense_ut.begin(), dense_ut.end());
            const double begin = -static_cast<double>(dense_u.size() - 1) * cfg.dense_stride * cfg.dt;
            traj.dense.emplace(grid, begin, -step_t, std::move(dense_u), std::move(dense_ut), reach);
        }
    }
    return traj;
}

SpaceTimeField::SpaceTimeField(FlatGrid grid, double t_begin, double t_step, std::vector<std::vector<double>> u,
                               std::vector<std::vector<double>> ut, double valid_reach)
    : grid_(std::move(grid)), t_begin_(t_begin), t_step_(t_step), u_(std::move(u)), ut_(std::move(ut)),
      valid_reach_(valid_reach) {
    if (!(t_step_ > 0.0)) throw std::invalid_argument("SpaceTimeField: time step must be positive");
    if (u_.size() != ut_.size() || u_.size() < 4) throw std::invalid_argument("SpaceTimeField: need at least 4 time rows");
    for (std::size_t j = 0; j < u_.size(); ++j) {
        if (u_[j].size() != static_cast<std::size_t>(grid_.size()) || ut_[j].size() != u_[j].size()) {
            throw std::invalid_argument("SpaceTimeField: row size mismatch");
        }
    }
}

SpaceTimeField SpaceTimeField::join(const SpaceTimeField& backward, const SpaceTimeField& forward) {
    if (backward.grid_.size() != forward.grid_.size() || backward.grid_.r_max() != forward.grid_.r_max()) {
        throw std::invalid_argument("join: grids differ");
    }
    if (std::abs(backward.t_step_ - forward.t_step_) > 1e-12 * forward.t_step_) {
        throw std::invalid_argument("join: time steps differ");
    }
    if (std::abs(backward.t_end()) > 1e-9 || std::abs(forward.t_begin_) > 1e-12) {
        throw std::invalid_argument("join: fields must meet at t = 0");
    }
    auto u = backward.u_;
    auto ut = backward.ut_;
    u.insert(u.end(), forward.u_.begin() + 1, forward.u_.end());
    ut.insert(ut.end(), forward.ut_.begin() + 1, forward.ut_.end());
    return SpaceTimeField(forward.grid_, backward.t_begin_, forward.t_step_, std::move(u), std::move(ut),
                          std::min(backward.valid_reach_, forward.valid_reach_));
}

namespace {

// Cubic Lagrange weights and derivative weights on nodes -1, 0, 1, 2 at x in [0, 1).
struct Cubic {
    std::array<double, 4> w;
    std::array<double, 4> dw;
};

Cubic cubic_weights(double x) {
    Cubic c;
    c.w = {-x * (x - 1.0) * (x - 2.0) / 6.0, (x + 1.0) * (x - 1.0) * (x - 2.0) / 2.0,
           -(x + 1.0) * x * (x - 2.0) / 2.0, (x + 1.0) * x * (x - 1.0) / 6.0};
    c.dw = {-(3.0 * x * x - 6.0 * x + 2.0) / 6.0, (3.0 * x * x - 4.0 * x - 1.0) / 2.0,
            -(3.0 * x * x - 2.0 * x - 2.0) / 2.0, (3.0 * x * x - 1.0) / 6.0};
    return c;
}

}  // namespace

bool SpaceTimeField::contains(double r, double t) const {
    if (!(r >= 0.0) || !std::isfinite(t)) return false;
    if (r + std::abs(t) > valid_reach_) return false;
    const double h = grid_.spacing();
    const auto i0 = static_cast<long>(std::floor(r / h));
    if (i0 + 2 > grid_.size() - 1) return false;
    const double s = (t - t_begin_) / t_step_;
    const auto j0 = static_cast<long>(std::floor(s));
    return j0 - 1 >= 0 && j0 + 2 <= static_cast<long>(u_.size()) - 1;
}

SpaceTimeField::Sample SpaceTimeField::sample(double r, double t) const {
    if (!contains(r, t)) {
        std::ostringstream msg;
        msg << "point (r=" << r << ", t=" << t << ") lies outside the simulated region";
        throw std::out_of_range(msg.str());
    }
    const double h = grid_.spacing();
    const auto i0 = static_cast<long>(std::floor(r / h));
    const double s = (t - t_begin_) / t_step_;
    const auto j0 = static_cast<long>(std::floor(s));
    const Cubic cr = cubic_weights(r / h - static_cast<double>(i0));
    const Cubic ct = cubic_weights(s - static_cast<double>(j0));
    Sample out;
    for (int b = 0; b < 4; ++b) {
        const auto& row = u_[static_cast<std::size_t>(j0 - 1 + b)];
        const auto& row_t = ut_[static_cast<std::size_t>(j0 - 1 + b)];
        double value = 0.0, deriv = 0.0, vel = 0.0;
        for (int a = 0; a < 4; ++a) {
            const auto idx = static_cast<std::size_t>(std::labs(i0 - 1 + a));
            value += cr.w[static_cast<std::size_t>(a)] * row[idx];
            deriv += cr.dw[static_cast<std::size_t>(a)] * row[idx];
            vel += cr.w[static_cast<std::size_t>(a)] * row_t[idx];
        }
        out.u += ct.w[static_cast<std::size_t>(b)] * value;
        out.u_r += ct.w[static_cast<std::size_t>(b)] * deriv;
        out.u_t += ct.w[static_cast<std::size_t>(b)] * vel;
    }
    out.u_r /= h;
    return out;
}

SpaceTimeField simulate_spacetime(QuinticConfig cfg, double t_backward, double t_forward) {
    if (!(t_backward > 0.0) || !(t_forward > 0.0)) throw std::invalid_argument("simulate_spacetime: times must be positive");
    if (cfg.dense_stride <= 0) cfg.dense_stride = 1;
    const double h = cfg.r_max / (cfg.num_points - 1);
    if (cfg.dt <= 0.0) cfg.dt = 0.5 * h;
    const double row_step = cfg.dense_stride * cfg.dt;
    QuinticConfig back = cfg;
    back.time_direction = -1;
    back.t_final = std::ceil(t_backward / row_step - 1e-9) * row_step;
    QuinticConfig fwd = cfg;
    fwd.time_direction = 1;
    fwd.t_final = std::ceil(t_forward / row_step - 1e-9) * row_step;
    const auto b = simulate_quintic(back);
    const auto f = simulate_quintic(fwd);
    if (b.blew_up || f.blew_up) throw std::runtime_error("quintic run exceeded the blow-up threshold");
    return SpaceTimeField::join(*b.dense, *f.dense);
}

namespace {

// Integral over the disk B(x, radius) of g(y) / sqrt(radius^2 - |y - x|^2) after
// |y - x| = radius sin(phi); x = (x_abs, 0). g takes |y| and y . e_theta.
double disk_kernel(const std::function<double(double, double, double)>& g, double x_abs, double radius, int level) {
    const int phi_panels = 1 << level;
    const int theta_points = 8 << level;
    const double dtheta = std::numbers::pi / theta_points;
    double total = 0.0;
    for (int k = 0; k <= theta_points; ++k) {
        const double theta = k * dtheta;
        const double c = std::cos(theta);
        const double weight = (k == 0 || k == theta_points) ? 0.5 : 1.0;
        auto along = [&](double phi) {
            const double rho = radius * std::sin(phi);
            const double y1 = x_abs + rho * c;
            const double y2 = rho * std::sin(theta);
            const double y_abs = std::hypot(y1, y2);
            return g(y_abs, y1 * c + y2 * std::sin(theta), rho) * radius * std::sin(phi);
        };
        total += weight * gauss_panels(along, 0.0, 0.5 * std::numbers::pi, phi_panels);
    }
    return 2.0 * dtheta * total;  // theta in [0, pi] doubled by symmetry
}

template <class F>
double settle(F&& at_level, double rel_tol, const char* what) {
    double previous = at_level(1);
    for (int level = 2; level <= 9; ++level) {
        const double current = at_level(level);
        if (std::abs(current - previous) <= rel_tol * std::abs(current) + 1e-14) return current;
        previous = current;
    }
    throw QuadratureError(std::string("representation formula quadrature did not settle: ") + what);
}

}  // namespace

double linear_representation(const RadialData& data, double x_abs, double t, double rel_tol) {
    if (!(t > 0.0)) throw std::invalid_argument("linear_representation: t must be positive");
    if (x_abs < 0.0) throw std::invalid_argument("linear_representation: |x| must be nonnegative");
    auto data_part = [&](int level) {
        auto integrand = [&](double y_abs, double y_dot_e, double rho) {
            double value = 0.0;
            if (data.u0) value += t * data.u0(y_abs);
            if (data.u1) value += t * t * data.u1(y_abs);
            if (data.u0_prime && y_abs > 0.0) value += t * data.u0_prime(y_abs) * y_dot_e * rho / y_abs;
            return value;
        };
        return disk_kernel(integrand, x_abs, t, level) / (kTwoPi * t * t);
    };
    double value = settle(data_part, rel_tol, "data term");
    if (data.source) {
        auto duhamel = [&](double s) {
            auto slice = [&](int level) {
                auto integrand = [&](double y_abs, double, double) { return data.source(y_abs, s); };
                return disk_kernel(integrand, x_abs, t - s, level);
            };
            return settle(slice, rel_tol, "source slice") / kTwoPi;
        };
        value += integrate_converged(duhamel, 0.0, t, rel_tol, 1, 1 << 8, 1e-14).value;
    }
    return value;
}

void validate_decay_data(const QuinticConfig& cfg, const DecayProfile& prof) {
    const FlatGrid grid(cfg.r_max, cfg.num_points);
    for (double r : grid.points()) {
        const double value_bound = prof.A * std::pow(1.0 + r, -0.5 - prof.eps) * (1.0 + 1e-12);
        const double slope_bound = prof.A * std::pow(1.0 + r, -1.5 - prof.eps) * (1.0 + 1e-12);
        std::ostringstream msg;
        msg << "data leave the decay class at r=" << r;
        if (std::abs(cfg.initial_u.value(r)) > value_bound) throw std::invalid_argument(msg.str() + " (|u0|)");
        if (std::abs(cfg.initial_u.derivative(r)) > slope_bound) throw std::invalid_argument(msg.str() + " (|u0'|)");
        if (std::abs(cfg.initial_ut.value(r)) > slope_bound) throw std::invalid_argument(msg.str() + " (|u1|)");
    }
}

std::vector<double> mollify_radial(const FlatGrid& grid, std::span<const double> f, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("mollify_radial: lambda must be positive");
    if (f.size() != static_cast<std::size_t>(grid.size())) throw std::invalid_argument("mollify_radial: size mismatch");
    auto bump = [lambda](double rho) {
        const double z = rho / lambda;
        return z < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
    };
    const double norm = kTwoPi * gauss_panels([&](double rho) { return bump(rho) * rho; }, 0.0, lambda, 8);
    const double h = grid.spacing();
    auto lookup = [&](double r) {
        const double s = r / h;
        const auto i = static_cast<std::size_t>(std::floor(s));
        if (i + 1 >= f.size()) return i < f.size() ? f[i] : 0.0;
        const double frac = s - static_cast<double>(i);
        return (1.0 - frac) * f[i] + frac * f[i + 1];
    };
    const int theta_points = 64;
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double x = grid.point(static_cast<int>(i));
        auto ring = [&](double rho) {
            double total = 0.0;
            for (int k = 0; k < theta_points; ++k) {
                const double theta = kTwoPi * (k + 0.5) / theta_points;
                total += lookup(std::hypot(x - rho * std::cos(theta), rho * std::sin(theta)));
            }
            return bump(rho) * rho * total * kTwoPi / theta_points;
        };
        out[i] = gauss_panels(ring, 0.0, lambda, 4) / norm;
    }
    return out;
}

namespace {

template <class Visit>
void for_exterior_lattice(const SpaceTimeField& field, double R, int margin, Visit&& visit) {
    const FlatGrid& grid = field.grid();
    const double h = grid.spacing();
    for (int j = margin; j + margin < field.time_count(); ++j) {
        const double t = field.time(j);
        if (t < -1e-12) continue;
        for (int i = std::max(1, margin); i + 1 + margin < grid.size(); ++i) {
            const double r = grid.point(i);
            if (!(r > t + R)) continue;
            if (r + (margin + 2) * h + std::abs(t) + margin * field.t_step() > field.valid_reach()) break;
            visit(i, j, r, t);
        }
    }
}

void keep_max(DecayReport& report, double value, double r, double t) {
    ++report.samples;
    if (value > report.constant) {
        report.constant = value;
        report.r_at_sup = r;
        report.t_at_sup = t;
    }
}

}  // namespace

DecayReport decay_check(const SpaceTimeField& field, const DecayProfile& prof) {
    DecayReport report;
    for_exterior_lattice(field, prof.R, 0, [&](int i, int j, double r, double t) {
        const double u = field.u_row(j)[static_cast<std::size_t>(i)];
        keep_max(report, std::abs(u) * std::sqrt(r) * std::pow(r - t, prof.delta), r, t);
    });
    if (report.samples == 0) throw std::invalid_argument("decay_check: no samples in the exterior region");
    return report;
}

DerivativeDecayReport derivative_decay_check(const SpaceTimeField& field, const DecayProfile& prof) {
    DerivativeDecayReport report;
    const double h = field.grid().spacing();
    for_exterior_lattice(field, prof.R, 0, [&](int i, int j, double r, double t) {
        const auto row = field.u_row(j);
        const auto k = static_cast<std::size_t>(i);
        const double u = row[k];
        const double u_r = (row[k + 1] - row[k - 1]) / (2.0 * h);
        const double u_t = field.ut_row(j)[k];
        const double sr = std::sqrt(r);
        const double good = sr * (u_t + u_r) + 0.5 * u / sr;
        keep_max(report.good, std::abs(good) * std::pow(r, 1.0 + prof.delta), r, t);
        keep_max(report.incoming, std::abs(u_t + u_r) * std::pow(r, 1.5), r, t);
        keep_max(report.outgoing, std::abs(u_t - u_r) * sr, r, t);
    });
    if (report.good.samples == 0) throw std::invalid_argument("derivative_decay_check: no samples in the exterior region");
    return report;
}

bool refinement_stable(double coarse, double fine, double rel_tol) {
    if (!std::isfinite(coarse) || !std::isfinite(fine)) return false;
    const double scale = std::max(std::abs(coarse), std::abs(fine));
    if (scale == 0.0) return true;
    return std::abs(coarse - fine) <= rel_tol * scale;
}

ResidualReport reduction_residual(const SpaceTimeField& field, double R, bool linear) {
    if (field.time_count() < 3) throw std::invalid_argument("reduction_residual: need at least 3 time rows");
    ResidualReport report;
    const double h = field.grid().spacing();
    const double k = field.t_step();
    for_exterior_lattice(field, R, 1, [&](int i, int j, double r, double t) {
        const auto idx = static_cast<std::size_t>(i);
        auto w = [&](int jj, std::size_t ii) {
            return std::sqrt(field.grid().point(static_cast<int>(ii))) * field.u_row(jj)[ii];
        };
        const double w_tt = (w(j + 1, idx) - 2.0 * w(j, idx) + w(j - 1, idx)) / (k * k);
        const double w_rr = (w(j, idx + 1) - 2.0 * w(j, idx) + w(j, idx - 1)) / (h * h);
        const double u = field.u_row(j)[idx];
        double g = 0.25 * std::pow(r, -1.5) * u;
        if (!linear) g -= std::sqrt(r) * u * u * u * u * u;
        const double residual = std::abs(w_tt - w_rr - g);
        ++report.samples;
        if (residual > report.max_residual) {
            report.max_residual = residual;
            report.r_at_max = r;
            report.t_at_max = t;
        }
    });
    if (report.samples == 0) throw std::invalid_argument("reduction_residual: no interior exterior-region samples");
    return report;
}

}  // namespace hyperwave

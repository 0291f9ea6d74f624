#include "hyperwave/hyperbolic_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hyperwave {

ProfileSpec ProfileSpec::gaussian(double amplitude, double center, double width) {
    if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
    if (center < 0.0) throw ConfigError("gaussian center must be nonnegative");
    ProfileSpec spec;
    spec.kind = Kind::gaussian;
    spec.amplitude = amplitude;
    spec.center = center;
    spec.width = width;
    return spec;
}

ProfileSpec ProfileSpec::eigenmode(int k, double amplitude) {
    if (k < 0) throw ConfigError("eigenmode index must be nonnegative");
    ProfileSpec spec;
    spec.kind = Kind::eigenmode;
    spec.mode = k;
    spec.amplitude = amplitude;
    return spec;
}

ProfileSpec ProfileSpec::file(std::string path) {
    ProfileSpec spec;
    spec.kind = Kind::file;
    spec.path = std::move(path);
    return spec;
}

namespace {

std::vector<std::array<double, 2>> read_profile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile file " + path);
    std::vector<std::array<double, 2>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double r = 0.0;
        double value = 0.0;
        if (fields >> r >> value) rows.push_back({r, value});
    }
    if (rows.size() < 2) throw ConfigError("profile file " + path + " needs at least two (r, value) rows");
    std::sort(rows.begin(), rows.end());
    return rows;
}

double interpolate_table(const std::vector<std::array<double, 2>>& rows, double r) {
    if (r < rows.front()[0] || r > rows.back()[0]) return 0.0;
    auto upper = std::lower_bound(rows.begin(), rows.end(), r,
                                  [](const std::array<double, 2>& row, double x) { return row[0] < x; });
    if (upper == rows.begin()) return upper->at(1);
    auto lower = upper - 1;
    const double span = (*upper)[0] - (*lower)[0];
    const double frac = span > 0.0 ? (r - (*lower)[0]) / span : 0.0;
    return (*lower)[1] + frac * ((*upper)[1] - (*lower)[1]);
}

}  // namespace

RadialField ProfileSpec::realize(const GridPtr& grid) const {
    switch (kind) {
        case Kind::zero:
            return RadialField(grid);
        case Kind::gaussian: {
            const double a = amplitude, c = center, w = width;
            auto field = RadialField::from_function(grid, [=](double r) {
                const double z = (r - c) / w;
                return a * std::exp(-z * z);
            });
            field[field.size() - 1] = 0.0;
            return field;
        }
        case Kind::eigenmode: {
            const SpectralOperator op(grid);
            if (mode >= op.size()) throw ConfigError("eigenmode index exceeds the grid's mode count");
            auto field = op.eigenmode(mode);
            for (double& v : field.values()) v *= amplitude;
            return field;
        }
        case Kind::file: {
            const auto rows = read_profile_table(path);
            auto field = RadialField::from_function(grid, [&rows](double r) { return interpolate_table(rows, r); });
            field[field.size() - 1] = 0.0;
            return field;
        }
    }
    throw ConfigError("unknown profile kind");
}

double ProfileSpec::support_radius(double threshold) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::gaussian: {
            const double ratio = std::abs(amplitude) / threshold;
            return center + (ratio > 1.0 ? width * std::sqrt(std::log(ratio)) : 0.0);
        }
        case Kind::file: {
            const auto rows = read_profile_table(path);
            double radius = 0.0;
            for (const auto& row : rows) {
                if (std::abs(row[1]) >= threshold) radius = row[0];
            }
            return radius;
        }
        case Kind::eigenmode:
            break;
    }
    return std::numeric_limits<double>::infinity();
}

std::string ProfileSpec::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind) {
        case Kind::zero:
            out << "zero";
            break;
        case Kind::gaussian:
            out << "gaussian(" << amplitude << ", " << center << ", " << width << ")";
            break;
        case Kind::eigenmode:
            out << "eigenmode(" << mode << ", " << amplitude << ")";
            break;
        case Kind::file:
            out << "file(" << path << ")";
            break;
    }
    return out.str();
}

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::completed:
            return "completed";
        case RunStatus::blowup_detected:
            return "blowup_detected";
        case RunStatus::boundary_contamination:
            return "boundary_contamination";
    }
    return "unknown";
}

double Trajectory::relative_energy_drift() const {
    const double e0 = initial_energy();
    double worst = 0.0;
    for (const auto& s : series) worst = std::max(worst, std::abs(s.energy - e0));
    return e0 != 0.0 ? worst / std::abs(e0) : worst;
}

double critical_exponent_energy(int n) {
    require_dimension(n);
    if (n == 2) return std::numeric_limits<double>::infinity();
    return 1.0 + 4.0 / (n - 2);
}

SimConfig validate(SimConfig cfg) {
    try {
        require_dimension(cfg.n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.p > 1.0)) throw ConfigError("exponent p must exceed 1");
    if (cfg.zeta != 1 && cfg.zeta != -1) throw ConfigError("zeta must be +1 (focusing) or -1 (defocusing)");
    if (!cfg.allow_supercritical && !(cfg.p < critical_exponent_energy(cfg.n))) {
        throw ConfigError("p must be below the energy-critical exponent (set allow_supercritical to override)");
    }
    if (!(cfg.t_final > 0.0)) throw ConfigError("t_final must be positive");
    if (cfg.num_points < 16) throw ConfigError("num_points must be at least 16");
    if (!(cfg.r_max > 0.0)) throw ConfigError("r_max must be positive");
    if (cfg.time_direction != 1 && cfg.time_direction != -1) throw ConfigError("time_direction must be +1 or -1");
    if (cfg.snapshot_count < 2) throw ConfigError("snapshot_count must be at least 2");
    const double h = cfg.r_max / (cfg.num_points - 1);
    if (cfg.dt <= 0.0) cfg.dt = cfg.t_final / std::ceil(cfg.t_final / (0.5 * h));
    if (cfg.dt / h > 0.9) throw ConfigError("CFL violation: dt/h must not exceed 0.9");

    GridPtr grid;
    try {
        grid = make_grid(cfg.n, cfg.r_max, cfg.num_points);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const double top = ShiftedLaplacian(grid).gershgorin_bound();
    const double stability = cfg.integrator == Integrator::verlet ? 2.0 : 2.78;
    if (cfg.dt * std::sqrt(std::max(top, 0.0)) >= stability) {
        throw ConfigError("time step exceeds the stability limit of the integrator");
    }
    if (cfg.check_support) {
        const double reach = std::max(cfg.initial_u.support_radius(), cfg.initial_ut.support_radius());
        if (std::isfinite(reach) && reach + cfg.t_final > cfg.r_max) {
            throw ConfigError("r_max too small: the light cone of the data reaches the outer boundary");
        }
    }
    return cfg;
}

double power_nonlinearity(double u, double p) {
    if (u == 0.0) return 0.0;
    const double magnitude = p == 3.0 ? u * u * std::abs(u) : std::exp(p * std::log(std::abs(u)));
    return u > 0.0 ? magnitude : -magnitude;
}

namespace {

double power_integral(const RadialGrid& grid, std::span<const double> u, double exponent) {
    const auto w = grid.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] != 0.0) total += w[i] * std::exp(exponent * std::log(std::abs(u[i])));
    }
    return total;
}

double weighted_dot(const RadialGrid& grid, std::span<const double> a, std::span<const double> b) {
    const auto w = grid.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += w[i] * a[i] * b[i];
    return total;
}

}  // namespace

double linear_energy(const StatePair& state, const SpectralOperator& op) {
    const auto c = op.coefficients(state.u);
    double quadratic = 0.0;
    for (int k = 0; k < op.size(); ++k) quadratic += std::max(op.gap(k), 0.0) * c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)];
    const auto d = op.coefficients(state.ut);
    double kinetic = 0.0;
    for (double x : d) kinetic += x * x;
    return 0.5 * quadratic + 0.5 * kinetic;
}

double energy(const StatePair& state, double p, int zeta, const SpectralOperator& op) {
    return linear_energy(state, op) - zeta / (p + 1.0) * power_integral(state.grid(), state.u.values(), p + 1.0);
}

double discrete_energy(const StatePair& state, double p, int zeta, bool linear, const ShiftedLaplacian& lap) {
    const RadialGrid& grid = state.grid();
    const double quadratic = lap.quadratic_form(state.u.values());
    const double kinetic = weighted_dot(grid, state.ut.values(), state.ut.values());
    const double potential = linear ? 0.0 : power_integral(grid, state.u.values(), p + 1.0);
    return 0.5 * quadratic + 0.5 * kinetic - zeta / (p + 1.0) * potential;
}

namespace {

class Stepper {
public:
    Stepper(const SimConfig& cfg, GridPtr grid) : cfg_(cfg), grid_(std::move(grid)), lap_(grid_) {
        const std::size_t n_points = static_cast<std::size_t>(grid_->size());
        acc_.assign(n_points, 0.0);
        for (auto& buffer : stage_) buffer.assign(n_points, 0.0);
    }

    const ShiftedLaplacian& laplacian() const { return lap_; }

    void acceleration(std::span<const double> u, std::span<double> out) const {
        lap_.apply(u, out);
        for (std::size_t i = 1; i + 1 < u.size(); ++i) {
            out[i] = -out[i];
            if (!cfg_.linear) out[i] += cfg_.zeta * power_nonlinearity(u[i], cfg_.p);
        }
    }

    void step(std::vector<double>& u, std::vector<double>& v, double dt) {
        if (cfg_.integrator == Integrator::verlet) {
            verlet(u, v, dt);
        } else {
            rk4(u, v, dt);
        }
        apply_boundary_nodes(u);
        apply_boundary_nodes(v);
    }

private:
    void verlet(std::vector<double>& u, std::vector<double>& v, double dt) {
        acceleration(u, acc_);
        for (std::size_t i = 0; i < u.size(); ++i) v[i] += 0.5 * dt * acc_[i];
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * v[i];
        apply_boundary_nodes(u);
        acceleration(u, acc_);
        for (std::size_t i = 0; i < u.size(); ++i) v[i] += 0.5 * dt * acc_[i];
    }

    void rk4(std::vector<double>& u, std::vector<double>& v, double dt) {
        const std::size_t m = u.size();
        auto& k1 = stage_[0];
        auto& k2 = stage_[1];
        auto& k3 = stage_[2];
        auto& k4 = stage_[3];
        auto& tmp = stage_[4];
        // k*u stages equal the velocity at the stage; only accelerations are stored.
        acceleration(u, k1);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + 0.5 * dt * v[i];
        acceleration(tmp, k2);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + 0.5 * dt * (v[i] + 0.5 * dt * k1[i]);
        acceleration(tmp, k3);
        for (std::size_t i = 0; i < m; ++i) tmp[i] = u[i] + dt * (v[i] + 0.5 * dt * k2[i]);
        acceleration(tmp, k4);
        for (std::size_t i = 0; i < m; ++i) {
            const double v2 = v[i] + 0.5 * dt * k1[i];
            const double v3 = v[i] + 0.5 * dt * k2[i];
            const double v4 = v[i] + dt * k3[i];
            u[i] += dt / 6.0 * (v[i] + 2.0 * v2 + 2.0 * v3 + v4);
            v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    SimConfig cfg_;
    GridPtr grid_;
    ShiftedLaplacian lap_;
    std::vector<double> acc_;
    std::array<std::vector<double>, 5> stage_;
};

bool all_finite(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
}

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double x : values) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Trajectory simulate(const SimConfig& raw) {
    const SimConfig cfg = validate(raw);
    Trajectory traj;
    traj.config = cfg;
    traj.grid = make_grid(cfg.n, cfg.r_max, cfg.num_points);
    traj.dt = cfg.dt;
    const GridPtr& grid = traj.grid;
    const RadialGrid& g = *grid;
    const int dir = cfg.time_direction;

    const RadialField u0 = cfg.initial_u.realize(grid);
    std::vector<double> u(u0.values().begin(), u0.values().end());
    const RadialField ut0 = cfg.initial_ut.realize(grid);
    std::vector<double> v(ut0.values().begin(), ut0.values().end());
    for (double& x : v) x *= dir;
    apply_boundary_nodes(u);
    apply_boundary_nodes(v);

    Stepper stepper(cfg, grid);
    const double exponent = cfg.p + 1.0;
    const long total_steps = std::lround(cfg.t_final / cfg.dt);

    auto make_state = [&](double t_internal) {
        std::vector<double> ut_actual(v);
        for (double& x : ut_actual) x *= dir;
        return StatePair(RadialField(grid, u), RadialField(grid, std::move(ut_actual)), dir * t_internal);
    };
    auto sample = [&](double t_internal, double morawetz) {
        DiagnosticSample s;
        s.t = dir * t_internal;
        s.kinetic = weighted_dot(g, v, v);
        s.potential = power_integral(g, u, exponent);
        const double quadratic = stepper.laplacian().quadratic_form(u);
        s.energy = 0.5 * quadratic + 0.5 * s.kinetic - (cfg.linear ? 0.0 : cfg.zeta / exponent * s.potential);
        s.mass = weighted_dot(g, u, u);
        s.mass_rate = dir * 2.0 * weighted_dot(g, u, v);
        s.max_abs_u = max_abs(u);
        s.morawetz_acc = morawetz;
        return s;
    };

    traj.series.push_back(sample(0.0, 0.0));
    traj.snapshots.push_back(make_state(0.0));
    const long stride = std::max<long>(1, total_steps / (cfg.snapshot_count - 1));
    long next_dyadic = 1;
    double morawetz = 0.0;
    const std::size_t outer_layer = std::max<std::size_t>(4, static_cast<std::size_t>(g.size()) / 50);
    const std::size_t probe_begin = static_cast<std::size_t>(g.size()) - 1 - outer_layer;
    auto boundary_amplitude = [&] {
        double m = 0.0;
        for (std::size_t i = probe_begin; i + 1 < u.size(); ++i) m = std::max(m, std::abs(u[i]));
        return m;
    };

    for (long step = 1; step <= total_steps; ++step) {
        const std::vector<double> u_prev = u;
        const std::vector<double> v_prev = v;
        stepper.step(u, v, cfg.dt);
        const double t_internal = step * cfg.dt;
        if (!all_finite(u) || !all_finite(v) || max_abs(u) > cfg.blowup_threshold) {
            u = u_prev;
            v = v_prev;
            traj.status = RunStatus::blowup_detected;
            traj.status_time = dir * (step - 1) * cfg.dt;
            traj.snapshots.push_back(make_state((step - 1) * cfg.dt));
            traj.steps_taken = step - 1;
            return traj;
        }
        DiagnosticSample s = sample(t_internal, morawetz);
        morawetz += 0.5 * cfg.dt * (traj.series.back().potential + s.potential);
        s.morawetz_acc = morawetz;
        traj.series.push_back(s);
        traj.steps_taken = step;
        if (step == next_dyadic) {
            traj.dyadic.push_back(make_state(t_internal));
            traj.dyadic_steps.push_back(step);
            next_dyadic *= 2;
        }
        if (step % stride == 0 || step == total_steps) {
            if (traj.snapshots.back().time != dir * t_internal) traj.snapshots.push_back(make_state(t_internal));
        }
        if (boundary_amplitude() > cfg.boundary_threshold) {
            traj.status = RunStatus::boundary_contamination;
            traj.status_time = dir * t_internal;
            if (traj.snapshots.back().time != dir * t_internal) traj.snapshots.push_back(make_state(t_internal));
            return traj;
        }
    }
    traj.status = RunStatus::completed;
    traj.status_time = dir * total_steps * cfg.dt;
    return traj;
}

MorawetzReport morawetz_report(const Trajectory& traj, double E, double p) {
    if (traj.config.zeta != -1) throw std::invalid_argument("Morawetz bound is claimed only for defocusing runs");
    if (!(p > 1.0)) throw std::invalid_argument("Morawetz bound needs p > 1");
    MorawetzReport report;
    report.accumulator = traj.series.empty() ? 0.0 : traj.series.back().morawetz_acc;
    report.bound = 4.0 * (p + 1.0) / (p - 1.0) * E;
    report.margin = report.bound - report.accumulator;
    report.violated = report.accumulator > report.bound || (report.accumulator > 0.0 && report.margin <= 0.0);
    report.contaminated = traj.status == RunStatus::boundary_contamination;
    return report;
}

VirialReport virial_monitor(const Trajectory& traj, double E, double p, double relative_tolerance,
                            double amplitude_cap) {
    VirialReport report;
    const int dir = traj.config.time_direction;
    report.slope_bound = (1.0 - p) / 4.0;
    if (traj.config.zeta != 1) report.warnings.push_back("virial blow-up criterion applies to focusing runs");
    if (E > 0.0) report.warnings.push_back("energy is positive; the blow-up criterion needs E <= 0");

    const double cap = amplitude_cap * std::max(traj.series.front().max_abs_u, 1e-300);
    double min_accel = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.series) {
        VirialSample v;
        v.t = dir * s.t;
        v.mass = s.mass;
        v.mass_rate = dir * s.mass_rate;
        v.mass_accel = -4.0 * E + 4.0 * s.kinetic + 2.0 * (p - 1.0) / (p + 1.0) * s.potential;
        min_accel = std::min(min_accel, v.mass_accel);
        report.samples.push_back(v);
    }
    report.min_accel = min_accel;
    const bool nonzero = traj.series.front().mass > 0.0;
    report.claim_made = nonzero && E <= 0.0 && traj.config.zeta == 1;
    if (traj.status == RunStatus::blowup_detected) report.detected_blowup = dir * traj.status_time;

    // Trusted window: M, M' > 0 and the solution still moderate.
    std::vector<std::size_t> window;
    for (std::size_t i = 0; i < report.samples.size(); ++i) {
        const auto& v = report.samples[i];
        if (v.mass > 0.0 && v.mass_rate > 0.0 && traj.series[i].max_abs_u <= cap) window.push_back(i);
    }
    double max_slope = -std::numeric_limits<double>::infinity();
    double max_identity = -std::numeric_limits<double>::infinity();
    int counted = 0;
    for (std::size_t j = 1; j + 1 < window.size(); ++j) {
        const std::size_t i = window[j];
        if (window[j - 1] + 1 != i || window[j + 1] != i + 1) continue;
        const auto& a = report.samples[i - 1];
        const auto& b = report.samples[i];
        const auto& c = report.samples[i + 1];
        const double slope = (c.mass / c.mass_rate - a.mass / a.mass_rate) / (c.t - a.t);
        max_slope = std::max(max_slope, slope);
        max_identity = std::max(max_identity, 1.0 - b.mass * b.mass_accel / (b.mass_rate * b.mass_rate));
        ++counted;
    }
    report.window_samples = counted;
    if (counted > 0) {
        report.window_start = report.samples[window.front()].t;
        report.window_end = report.samples[window.back()].t;
        report.max_ratio_slope = max_slope;
        report.max_ratio_slope_identity = max_identity;
        report.slope_ok = max_slope <= report.slope_bound * (1.0 - relative_tolerance);
        const auto& first = report.samples[window.front()];
        report.blowup_upper_estimate = first.t + first.mass / first.mass_rate / (-report.slope_bound);
    } else if (report.claim_made) {
        report.warnings.push_back("no samples with M, M' > 0 inside the trusted window");
    }
    return report;
}

namespace {

using Mat2 = std::array<double, 4>;  // row-major

Mat2 multiply(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 power(Mat2 base, long exponent) {
    Mat2 result{1.0, 0.0, 0.0, 1.0};
    while (exponent > 0) {
        if (exponent & 1L) result = multiply(result, base);
        base = multiply(base, base);
        exponent >>= 1;
    }
    return result;
}

Mat2 inverse(const Mat2& m) {
    const double det = m[0] * m[3] - m[1] * m[2];
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

// One step of the integrator on u'' = -omega^2 u, acting on (u, u').
Mat2 step_matrix(Integrator integrator, double omega2, double dt) {
    if (integrator == Integrator::verlet) {
        const double a = 0.5 * dt * dt * omega2;
        return {1.0 - a, dt, -dt * omega2 * (1.0 - 0.25 * dt * dt * omega2), 1.0 - a};
    }
    // Fourth-order Taylor polynomial of exp(dt X) with X = [[0, 1], [-omega^2, 0]].
    const double z = dt * dt * omega2;
    const double even = 1.0 - z / 2.0 + z * z / 24.0;
    const double odd = dt * (1.0 - z / 6.0);
    return {even, odd, -omega2 * odd, even};
}

}  // namespace

ScatteringReport scattering_diagnostic(const Trajectory& traj, const SpectralOperator& op, double sigma,
                                       int late_pairs) {
    if (late_pairs < 2) throw std::invalid_argument("late_pairs must be at least 2");
    if (traj.status == RunStatus::blowup_detected) {
        throw std::invalid_argument("scattering diagnostic is not applicable to a blown-up run");
    }
    if (traj.dyadic.size() < 4) throw std::invalid_argument("trajectory too short: fewer than 4 dyadic samples");
    if (op.grid().size() != traj.grid->size() || op.grid().dimension() != traj.grid->dimension()) {
        throw std::invalid_argument("spectral operator grid does not match the trajectory");
    }
    const int dir = traj.config.time_direction;
    const std::size_t modes = static_cast<std::size_t>(op.size());
    std::vector<Mat2> single(modes);
    std::vector<double> weight_u(modes), weight_v(modes);
    for (std::size_t k = 0; k < modes; ++k) {
        const double gap = std::max(op.gap(static_cast<int>(k)), 0.0);
        single[k] = inverse(step_matrix(traj.config.integrator, gap, traj.dt));
        const double scale = std::pow(op.eigenvalue(static_cast<int>(k)) + 1.0, sigma - 0.5);
        weight_u[k] = std::sqrt(gap) * scale;
        if (gap == 0.0) throw SpectralError("norm undefined at discrete spectral bottom");
        weight_v[k] = scale / std::sqrt(gap);
    }

    std::vector<std::vector<double>> pulled;
    ScatteringReport report;
    double largest = 0.0;
    for (std::size_t j = 0; j < traj.dyadic.size(); ++j) {
        const StatePair& s = traj.dyadic[j];
        const auto c = op.coefficients(s.u);
        auto d = op.coefficients(s.ut);
        for (double& x : d) x *= dir;
        std::vector<double> w(2 * modes);
        double norm2 = 0.0;
        for (std::size_t k = 0; k < modes; ++k) {
            const Mat2 back = power(single[k], traj.dyadic_steps[j]);
            const double wu = back[0] * c[k] + back[1] * d[k];
            const double wv = back[2] * c[k] + back[3] * d[k];
            w[k] = wu;
            w[modes + k] = dir * wv;
            norm2 += weight_u[k] * wu * wu + weight_v[k] * wv * wv;
        }
        largest = std::max(largest, std::sqrt(norm2));
        report.times.push_back(s.time);
        pulled.push_back(std::move(w));
    }
    for (std::size_t j = 0; j + 1 < pulled.size(); ++j) {
        double norm2 = 0.0;
        for (std::size_t k = 0; k < modes; ++k) {
            const double du = pulled[j + 1][k] - pulled[j][k];
            const double dv = pulled[j + 1][modes + k] - pulled[j][modes + k];
            norm2 += weight_u[k] * du * du + weight_v[k] * dv * dv;
        }
        report.increments.push_back(std::sqrt(norm2));
    }
    report.floor = 1e-12 * std::max(largest, 1e-300);

    const auto peak = std::max_element(report.increments.begin(), report.increments.end());
    if (*peak <= report.floor) {
        report.scattering_consistent = true;
        report.reason = "all increments below the round-off floor";
        return report;
    }
    const std::size_t count = report.increments.size();
    if (count < static_cast<std::size_t>(late_pairs)) {
        report.reason = "not enough dyadic increments for the late-time test";
        return report;
    }
    for (std::size_t j = count - static_cast<std::size_t>(late_pairs) + 1; j < count; ++j) {
        const double current = report.increments[j];
        if (current <= report.floor) continue;
        if (current > 0.5 * report.increments[j - 1]) {
            std::ostringstream msg;
            msg << "increment ending at t=" << report.times[j + 1] << " decays by less than a factor 2";
            report.reason = msg.str();
            return report;
        }
    }
    report.scattering_consistent = true;
    report.reason = "late increments halve across dyadic times";
    return report;
}

}  // namespace hyperwave

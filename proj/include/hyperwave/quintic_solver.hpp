#pragma once

// Radial solver for the defocusing quintic wave equation on R^2,
//   u_tt - Delta u = -|u|^4 u,
// with the linear representation formula and the exterior decay diagnostics.

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperwave {

// Uniform radial grid on [0, r_max] for the flat measure 2 pi r dr.
class FlatGrid {
public:
    FlatGrid(double r_max, int num_points);
    int size() const { return static_cast<int>(points_.size()); }
    double r_max() const { return r_max_; }
    double spacing() const { return h_; }
    double point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    std::span<const double> points() const { return points_; }

private:
    double r_max_;
    double h_;
    std::vector<double> points_;
};

struct EuclideanState {
    FlatGrid grid;
    std::vector<double> u;
    std::vector<double> ut;
    double time = 0.0;

    EuclideanState(FlatGrid grid_in, std::vector<double> u_in, std::vector<double> ut_in, double t = 0.0);
};

// Energy integral of (u_t^2/2 + |grad u|^2/2 + u^6/6) over the disk, fourth
// order in h (fourth-order differences and end-corrected trapezoid).
double energy_2d(const EuclideanState& state);

// Energy of the finite-volume semi-discretization; conserved by the time
// stepper up to the integrator's O(dt^2) oscillation.
double discrete_energy_2d(const EuclideanState& state, bool linear = false);

// Data bound class |u0| <= A (1+r)^{-1/2-eps}, |u0'|, |u1| <= A (1+r)^{-3/2-eps}.
struct DecayProfile {
    double A = 1.0;
    double eps = 0.5;
    double R = 1.0;
    double delta = 0.09;
    DecayProfile() = default;
    DecayProfile(double A_in, double eps_in, double R_in, double delta_in);
    static double default_delta(double eps);  // min{eps, 1/10} / 2
};

struct QuinticProfile {
    enum class Kind { zero, gaussian, decay_displacement, decay_velocity, constant };
    Kind kind = Kind::zero;
    double amplitude = 0.0;  // gaussian amplitude, constant value, or A of the decay class
    double center = 0.0;
    double width = 1.0;
    double eps = 0.5;

    static QuinticProfile zero_profile() { return {}; }
    static QuinticProfile gaussian(double amplitude, double center, double width);
    static QuinticProfile constant(double value);
    // Smooth members of the decay class with the given A and eps.
    static QuinticProfile decay_displacement(double A, double eps);
    static QuinticProfile decay_velocity(double A, double eps);

    double value(double r) const;
    double derivative(double r) const;
    std::string describe() const;
};

// Smooth cutoff equal to 1 on [0, start] and 0 beyond start + width.
double smooth_cutoff(double r, double start, double width);

struct QuinticConfig {
    double r_max = 20.0;
    int num_points = 2000;
    double t_final = 10.0;
    double dt = 0.0;  // 0 selects t_final / ceil(t_final / (h/2))
    QuinticProfile initial_u;
    QuinticProfile initial_ut;
    double taper_start = std::numeric_limits<double>::infinity();
    double taper_width = 0.0;
    bool linear = false;
    std::function<double(double, double)> source;  // extra forcing F(r, t)
    int time_direction = 1;
    int snapshot_count = 64;
    int dense_stride = 0;  // store every k-th step in a space-time field when k > 0
    double blowup_threshold = 1e8;
};

// Samples of u and u_t on a uniform (r, t) lattice with bicubic interpolation.
class SpaceTimeField {
public:
    SpaceTimeField(FlatGrid grid, double t_begin, double t_step, std::vector<std::vector<double>> u,
                   std::vector<std::vector<double>> ut, double valid_reach);

    // Joins a backward run (times 0 down to -T) with a forward run (0 to T).
    static SpaceTimeField join(const SpaceTimeField& backward, const SpaceTimeField& forward);

    const FlatGrid& grid() const { return grid_; }
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_begin_ + t_step_ * static_cast<double>(u_.size() - 1); }
    double t_step() const { return t_step_; }
    int time_count() const { return static_cast<int>(u_.size()); }
    double time(int j) const { return t_begin_ + t_step_ * j; }
    std::span<const double> u_row(int j) const { return u_[static_cast<std::size_t>(j)]; }
    std::span<const double> ut_row(int j) const { return ut_[static_cast<std::size_t>(j)]; }

    // Inside the stored lattice with a full interpolation stencil, and inside
    // the domain of dependence of the untapered data (r + |t| <= reach).
    bool contains(double r, double t) const;
    double valid_reach() const { return valid_reach_; }

    struct Sample {
        double u = 0.0;
        double u_r = 0.0;
        double u_t = 0.0;
    };
    // Throws std::out_of_range outside contains().
    Sample sample(double r, double t) const;
    double value(double r, double t) const { return sample(r, t).u; }

private:
    FlatGrid grid_;
    double t_begin_;
    double t_step_;
    std::vector<std::vector<double>> u_;
    std::vector<std::vector<double>> ut_;
    double valid_reach_;
};

struct QuinticSample {
    double t = 0.0;
    double energy = 0.0;
    double l6l6_acc = 0.0;  // running integral of u^6 over space-time
    double max_abs_u = 0.0;
};

struct QuinticTrajectory {
    QuinticConfig config;
    FlatGrid grid;
    double dt = 0.0;
    std::vector<QuinticSample> series;
    std::vector<EuclideanState> snapshots;
    std::optional<SpaceTimeField> dense;
    bool blew_up = false;
    double status_time = 0.0;

    double relative_energy_drift() const;
};

QuinticConfig validate(QuinticConfig cfg);
QuinticTrajectory simulate_quintic(const QuinticConfig& cfg);

// Runs the configuration forward and backward in time and joins the dense
// fields into one covering [-t_backward, t_forward].
SpaceTimeField simulate_spacetime(QuinticConfig cfg, double t_backward, double t_forward);

// Linear solution at (|x|, t) from the representation formula with radial
// data and radial source; throws QuadratureError when the nested quadrature
// does not settle to rel_tol.
struct RadialData {
    std::function<double(double)> u0;
    std::function<double(double)> u0_prime;
    std::function<double(double)> u1;
    std::function<double(double, double)> source;  // F(r, s); may be empty
};
double linear_representation(const RadialData& data, double x_abs, double t, double rel_tol = 1e-8);

// Checks the data of a configuration against a decay profile on the grid;
// throws std::invalid_argument with the first violation.
void validate_decay_data(const QuinticConfig& cfg, const DecayProfile& prof);

// Radial mollification phi_lambda * f in R^2 with a smooth compactly
// supported bump of radius lambda.
std::vector<double> mollify_radial(const FlatGrid& grid, std::span<const double> f, double lambda);

struct DecayReport {
    double constant = 0.0;  // fitted sup
    double r_at_sup = 0.0;
    double t_at_sup = 0.0;
    long samples = 0;
};

// sup of |u| r^{1/2} (r - t)^delta over stored t >= 0, r > t + R.
DecayReport decay_check(const SpaceTimeField& field, const DecayProfile& prof);

struct DerivativeDecayReport {
    DecayReport good;      // |(sqrt(r) u)_t + (sqrt(r) u)_r| r^{1+delta}
    DecayReport incoming;  // |u_t + u_r| r^{3/2}
    DecayReport outgoing;  // |u_t - u_r| r^{1/2}
};
DerivativeDecayReport derivative_decay_check(const SpaceTimeField& field, const DecayProfile& prof);

// True when the two fitted constants agree within the relative tolerance.
bool refinement_stable(double coarse, double fine, double rel_tol = 0.2);

struct ResidualReport {
    double max_residual = 0.0;
    double r_at_max = 0.0;
    double t_at_max = 0.0;
    long samples = 0;
};
// max |(d_t^2 - d_r^2)(sqrt(r) u) - G| with G = -sqrt(r)|u|^4 u + r^{-3/2} u / 4
// over interior exterior-region lattice points, by centered differences.
ResidualReport reduction_residual(const SpaceTimeField& field, double R, bool linear = false);

}  // namespace hyperwave

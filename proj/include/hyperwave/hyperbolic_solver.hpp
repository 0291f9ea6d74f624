#pragma once

// Time-domain solver for the shifted semilinear wave equation
//   u_tt - (Delta + rho^2) u = zeta |u|^{p-1} u
// on radial functions over H^n, with energy, Morawetz, virial and
// scattering diagnostics.

#include "hyperwave/geometry.hpp"
#include "hyperwave/operators.hpp"
#include "hyperwave/state.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperwave {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Integrator { verlet, rk4 };

// Named initial-data profiles.
struct ProfileSpec {
    enum class Kind { zero, gaussian, eigenmode, file };
    Kind kind = Kind::zero;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
    int mode = 0;
    std::string path;

    static ProfileSpec zero_profile() { return {}; }
    static ProfileSpec gaussian(double amplitude, double center, double width);
    static ProfileSpec eigenmode(int k, double amplitude = 1.0);
    static ProfileSpec file(std::string path);

    RadialField realize(const GridPtr& grid) const;
    // Radius beyond which |profile| < threshold; +inf when unknown.
    double support_radius(double threshold = 1e-10) const;
    std::string describe() const;
};

struct SimConfig {
    int n = 3;
    double p = 3.0;
    int zeta = -1;  // -1 defocusing, +1 focusing
    bool linear = false;
    double r_max = 20.0;
    int num_points = 2000;
    double t_final = 10.0;
    double dt = 0.0;  // 0 selects t_final / ceil(t_final / (h/2))
    Integrator integrator = Integrator::verlet;
    ProfileSpec initial_u;
    ProfileSpec initial_ut;
    int snapshot_count = 64;
    int time_direction = 1;  // -1 runs backward in time
    bool allow_supercritical = false;
    bool check_support = true;
    double blowup_threshold = 1e8;
    double boundary_threshold = 1e-6;  // on max |u| over the outer 2% of the radial domain
};

enum class RunStatus { completed, blowup_detected, boundary_contamination };
std::string to_string(RunStatus status);

// Per-step diagnostics. Times and M' refer to physical time, so backward runs
// carry negative times.
struct DiagnosticSample {
    double t = 0.0;
    double energy = 0.0;
    double morawetz_acc = 0.0;  // running integral of |u|^{p+1} over space-time
    double mass = 0.0;          // M = integral u^2
    double mass_rate = 0.0;     // M' = 2 integral u u_t
    double max_abs_u = 0.0;
    double kinetic = 0.0;       // integral u_t^2
    double potential = 0.0;     // integral |u|^{p+1}
};

struct Trajectory {
    SimConfig config;
    GridPtr grid;
    double dt = 0.0;
    long steps_taken = 0;
    std::vector<StatePair> snapshots;
    std::vector<StatePair> dyadic;  // states after 1, 2, 4, 8, ... steps
    std::vector<long> dyadic_steps;
    std::vector<DiagnosticSample> series;
    RunStatus status = RunStatus::completed;
    double status_time = 0.0;

    double initial_energy() const { return series.front().energy; }
    double relative_energy_drift() const;
};

double critical_exponent_energy(int n);  // 1 + 4/(n-2), infinite for n = 2

// Resolves dt and validates the configuration; throws ConfigError.
SimConfig validate(SimConfig cfg);

// sign(u) |u|^p, exact zero at u = 0.
double power_nonlinearity(double u, double p);

// Energy with the linear part taken in spectral form.
double energy(const StatePair& state, double p, int zeta, const SpectralOperator& op);
double linear_energy(const StatePair& state, const SpectralOperator& op);

// Energy with the linear part taken as the discrete quadratic form; this is
// what the time stepper conserves and never needs an eigendecomposition.
double discrete_energy(const StatePair& state, double p, int zeta, bool linear, const ShiftedLaplacian& lap);

Trajectory simulate(const SimConfig& cfg);

struct MorawetzReport {
    double accumulator = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    bool violated = false;
    bool contaminated = false;
};
// Throws std::invalid_argument for focusing trajectories.
MorawetzReport morawetz_report(const Trajectory& traj, double E, double p);

struct VirialSample {
    double t = 0.0;  // time measured along the direction of the run
    double mass = 0.0;
    double mass_rate = 0.0;
    double mass_accel = 0.0;  // from the second-derivative identity
};

struct VirialReport {
    std::vector<VirialSample> samples;
    bool claim_made = false;
    std::vector<std::string> warnings;
    double min_accel = 0.0;
    double slope_bound = 0.0;           // (1 - p)/4
    double max_ratio_slope = 0.0;       // largest measured d/dt (M/M') inside the window
    double max_ratio_slope_identity = 0.0;  // same from 1 - M M''/M'^2
    double window_start = 0.0;
    double window_end = 0.0;
    int window_samples = 0;
    bool slope_ok = false;
    double blowup_upper_estimate = std::numeric_limits<double>::infinity();
    std::optional<double> detected_blowup;
};

VirialReport virial_monitor(const Trajectory& traj, double E, double p, double relative_tolerance = 0.1,
                            double amplitude_cap = 1e3);

struct ScatteringReport {
    std::vector<double> times;
    std::vector<double> increments;  // norm of w(t_{j+1}) - w(t_j)
    double floor = 0.0;
    bool scattering_consistent = false;
    std::string reason;
};

// Pulls the dyadic snapshots back through the integrator's own linear
// propagator, w(t) = S(-t)(u(t), u_t(t)), and measures the increments of w in
// H^{sigma-1/2,1/2} x H^{sigma-1/2,-1/2}. The run is declared consistent with
// scattering when the last `late_pairs` increments each drop by a factor of at
// least 2 (increments below the round-off floor count as converged).
ScatteringReport scattering_diagnostic(const Trajectory& traj, const SpectralOperator& op, double sigma = 0.5,
                                       int late_pairs = 3);

}  // namespace hyperwave

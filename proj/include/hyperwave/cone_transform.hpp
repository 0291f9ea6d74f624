#pragma once

// Change of variables between the forward light cone {t - t0 > |x|} of R^2 x R
// and H^2 x R:  x = e^tau sinh(s) Theta,  t = t0 + e^tau cosh(s),
// with v = e^{tau/2} u solving the shifted wave equation
//   v_tautau - Delta_H v - v/4 + |v|^4 v = 0.

#include "hyperwave/geometry.hpp"
#include "hyperwave/quintic_solver.hpp"
#include "hyperwave/state.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hyperwave {

class ConeDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ConeCoords {
    double t0 = 0.0;
    double tau = 0.0;
    double s = 0.0;
};

struct ConePoint {
    double x_abs = 0.0;
    double t = 0.0;
};

// Throws ConeDomainError unless t - t0 > x_abs >= 0.
ConeCoords cone_to_hyperbolic(double x_abs, double t, double t0);
ConePoint hyperbolic_to_cone(const ConeCoords& c);

// s_tau = arccosh(-e^{-tau} t0): the slice tau meets t = 0 at s = s_tau.
double slice_boundary(double tau, double t0);

// (v, v_tau) on the H^2 grid at slice tau, from the Euclidean space-time
// field. Throws ConeDomainError when the slice leaves the simulated region.
StatePair pushforward(const SpaceTimeField& field, double t0, double tau, const GridPtr& h2_grid);

// Same map applied to a closed-form solution u(|x|, t) with derivatives.
struct ClosedFormSolution {
    std::function<double(double, double)> u;
    std::function<double(double, double)> u_r;
    std::function<double(double, double)> u_t;
};
StatePair pushforward(const ClosedFormSolution& sol, double t0, double tau, const GridPtr& h2_grid);

// max over interior nodes of |v_tautau - v_ss - coth(s) v_s - v/4 + |v|^4 v|
// using pushed-forward slices at tau - dtau, tau, tau + dtau and centered
// differences on the H^2 grid.
struct ShiftedWaveResidual {
    double max_residual = 0.0;
    double s_at_max = 0.0;
};
ShiftedWaveResidual shifted_wave_residual(const StatePair& before, const StatePair& now, const StatePair& after,
                                          double dtau, bool linear = false);

// max over samples of |e^{tau/2}(-u_tt + Delta u) - e^{-2tau}(-v_tautau + Delta_H v + v/4)|
// for v = e^{tau/2} u, both sides by centered differences with step eta.
double conjugation_residual(const std::function<double(double, double)>& test_u, double t0,
                            std::span<const ConeCoords> samples, double eta);

// Volume of {tau1 <= tau <= tau2, s <= s_b} computed on both sides.
struct VolumeComparison {
    double cone = 0.0;        // integral of dx dt over the preimage
    double hyperbolic = 0.0;  // integral of e^{3 tau} dmu dtau
};
VolumeComparison volume_identity(double t0, double tau1, double tau2, double s_b);

// Integral of |u|^6 over the same slab on both sides, for u given in (|x|, t).
VolumeComparison sextic_slab(const std::function<double(double, double)>& u, double t0, double tau1, double tau2,
                             double s_b);

// Local energy of v on the disk s < s_tau:
//   (1/2) int (v_tau^2 + v_s^2 - v^2/4 + v^6/3) dmu.
// Needs tau in [-1, 0], t0 < -sqrt(R^2 + 1) and a grid reaching s_tau.
double local_energy_J1(const StatePair& v_state, double tau, double t0, double R = 1.0);

// The same quantity written in u, u_r, u_t and integrated with samples from
// the space-time field.
double local_energy_J1_from_field(const SpaceTimeField& field, double tau, double t0, double R = 1.0);

struct GSample {
    double r = 0.0;
    double g = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g4 = 0.0;
};

struct J2Report {
    double J2 = 0.0;
    double r_lower = 0.0;
    double r_upper = 0.0;
    double g_bound = 0.0;   // sup |g| r^{1+delta}
    double g1_bound = 0.0;  // sup |g1| r^{1+delta}
    double g2_bound = 0.0;  // sup |g2| r^3
    double g3_bound = 0.0;  // sup |g3| r^3
    double g4_bound = 0.0;  // sup |g4| r^2
    std::vector<GSample> profile;
};

// Ring energy J2(tau, s0) = (c/2) int g(tau, r) dr with c = 2 pi, over
// r in [sqrt(t0^2 - e^{2tau}), e^tau sinh(s0)], and the fitted bounds of
// g and of its four-term split.
J2Report local_energy_J2(const SpaceTimeField& field, double tau, double s0, double t0, double delta, double R = 1.0);

// Bound on the ring energy beyond r when |g| <= C r^{-1-delta}:
// (c/2) int_r^inf C r'^{-1-delta} dr' = pi C r^{-delta} / delta.
double j2_tail_bound(double g_bound, double r, double delta);

}  // namespace hyperwave

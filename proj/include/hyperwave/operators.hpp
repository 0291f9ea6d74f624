#pragma once

// Discrete spectral calculus for the radial Laplace-Beltrami operator on H^n.
//
// Interior nodes 1..N-2 carry the unknowns. The outer node is a homogeneous
// Dirichlet node; the center decouples because its face weight vanishes and
// is filled by even extrapolation. The operator is written in flux form with
// face weights sqrt(m_i m_{i+1}), m_i = sinh^{n-1}(r_i), which makes it
// self-adjoint for the grid's trapezoid inner product.

#include "hyperwave/geometry.hpp"
#include "hyperwave/state.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace hyperwave {

class SpectralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Second-order flux-form discretization of -Delta - rho^2 acting on radial
// fields. Cheap to build; used by the time-domain solvers.
class ShiftedLaplacian {
public:
    explicit ShiftedLaplacian(GridPtr grid);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    // out = (-Delta - rho^2) u on interior nodes; out is zero on node 0 and N-1.
    void apply(std::span<const double> u, std::span<double> out) const;

    // <u, (-Delta - rho^2) u> in the trapezoid inner product.
    double quadratic_form(std::span<const double> u) const;

    // Diagonal and off-diagonal of the symmetric interior matrix for -Delta
    // (without the rho^2 shift), in the variables sqrt(W_i) u_i.
    std::vector<double> symmetric_diagonal() const;
    double symmetric_offdiagonal() const;

    // Upper bound on the spectrum of -Delta - rho^2 by Gershgorin discs.
    double gershgorin_bound() const;

private:
    GridPtr grid_;
    double inv_h2_;
    double rho2_;
    std::vector<double> up_;    // q_{i+1}/q_i with q = sinh^rho
    std::vector<double> down_;  // q_{i-1}/q_i
};

// Fills node 0 by even extrapolation (4 u_1 - u_2)/3 and zeroes the outer node.
void apply_boundary_nodes(std::span<double> u);

struct SobolevIndex {
    double sigma = 0.0;
    double tau = 0.0;
    SobolevIndex() = default;
    SobolevIndex(double sigma_in, double tau_in);
};

class SpectralOperator {
public:
    explicit SpectralOperator(GridPtr grid);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int size() const { return static_cast<int>(eigenvalues_.size()); }
    double rho2() const { return rho2_; }
    bool low_resolution() const { return low_resolution_; }
    int clamped_count() const { return clamped_count_; }

    // Eigenvalue mu_k of the discrete -Delta, ascending, k = 0..size()-1.
    double eigenvalue(int k) const { return eigenvalues_[static_cast<std::size_t>(k)]; }
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    bool clamped(int k) const { return clamped_[static_cast<std::size_t>(k)]; }
    // mu_k - rho^2 (nonnegative after clamping) and its square root.
    double gap(int k) const { return eigenvalue(k) - rho2_; }
    double frequency(int k) const;

    // <f, e_k> for all k, with e_k orthonormal in the trapezoid inner product.
    std::vector<double> coefficients(std::span<const double> f) const;
    std::vector<double> coefficients(const RadialField& f) const { return coefficients(f.values()); }
    // sum_k c_k e_k as a full grid field (boundary nodes filled).
    RadialField synthesize(std::span<const double> coeffs) const;
    RadialField eigenmode(int k) const;

private:
    GridPtr grid_;
    double rho2_;
    bool low_resolution_;
    int clamped_count_ = 0;
    std::vector<double> eigenvalues_;
    std::vector<char> clamped_;
    std::vector<double> modes_;         // column-major, column k = eigenvector k in sqrt(W) variables
    std::vector<double> sqrt_weights_;  // interior nodes only
};

SpectralOperator build_spectral(GridPtr grid);

// sqrt(sum_k (mu_k - rho^2)^tau (mu_k + 1)^sigma <f, e_k>^2).
double sobolev_norm(const RadialField& f, SobolevIndex idx, const SpectralOperator& op);

// Same norm evaluated from precomputed coefficients.
double sobolev_norm_from_coefficients(std::span<const double> coeffs, SobolevIndex idx,
                                      const SpectralOperator& op);

// Exact linear shifted-wave propagator S(t) applied mode by mode.
StatePair linear_propagate(const StatePair& state, double t, const SpectralOperator& op);

// (integral |f|^q dmu)^{1/q}.
double lq_norm(const RadialField& f, double q);

// |Gamma(rho + i lambda)|^2 / |Gamma(i lambda)|^2, the Plancherel density up to
// a dimensional constant.
double harish_chandra_density(double lambda, int n);

}  // namespace hyperwave

#include "hyperwave/operators.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_gamma.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace hyperwave {

ShiftedLaplacian::ShiftedLaplacian(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("ShiftedLaplacian: null grid");
    const int n_points = grid_->size();
    const double h = grid_->spacing();
    const double rho_value = grid_->rho();
    inv_h2_ = 1.0 / (h * h);
    rho2_ = rho_value * rho_value;
    up_.assign(static_cast<std::size_t>(n_points), 0.0);
    down_.assign(static_cast<std::size_t>(n_points), 0.0);
    for (int i = 1; i + 1 < n_points; ++i) {
        const double here = log_sinh(grid_->point(i));
        up_[static_cast<std::size_t>(i)] = std::exp(rho_value * (log_sinh(grid_->point(i + 1)) - here));
        if (i > 1) {
            down_[static_cast<std::size_t>(i)] = std::exp(rho_value * (log_sinh(grid_->point(i - 1)) - here));
        }
    }
}

void ShiftedLaplacian::apply(std::span<const double> u, std::span<double> out) const {
    const std::size_t n_points = up_.size();
    if (u.size() != n_points || out.size() != n_points) {
        throw std::invalid_argument("ShiftedLaplacian::apply: size mismatch");
    }
    out[0] = 0.0;
    out[n_points - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < n_points; ++i) {
        const double flux = up_[i] * (u[i + 1] - u[i]) - down_[i] * (u[i] - u[i - 1]);
        out[i] = -inv_h2_ * flux - rho2_ * u[i];
    }
}

double ShiftedLaplacian::quadratic_form(std::span<const double> u) const {
    std::vector<double> au(u.size());
    apply(u, au);
    const auto w = grid_->weights();
    double total = 0.0;
    for (std::size_t i = 1; i + 1 < u.size(); ++i) total += w[i] * u[i] * au[i];
    return total;
}

std::vector<double> ShiftedLaplacian::symmetric_diagonal() const {
    std::vector<double> diag;
    diag.reserve(up_.size() - 2);
    for (std::size_t i = 1; i + 1 < up_.size(); ++i) diag.push_back(inv_h2_ * (up_[i] + down_[i]));
    return diag;
}

double ShiftedLaplacian::symmetric_offdiagonal() const { return -inv_h2_; }

double ShiftedLaplacian::gershgorin_bound() const {
    double bound = 0.0;
    for (double d : symmetric_diagonal()) bound = std::max(bound, d + 2.0 * inv_h2_);
    return bound - rho2_;
}

void apply_boundary_nodes(std::span<double> u) {
    if (u.size() < 3) return;
    u[0] = (4.0 * u[1] - u[2]) / 3.0;
    u[u.size() - 1] = 0.0;
}

SobolevIndex::SobolevIndex(double sigma_in, double tau_in) : sigma(sigma_in), tau(tau_in) {
    if (!(tau < 1.5)) throw std::invalid_argument("SobolevIndex: tau must be below 3/2");
    if (!std::isfinite(sigma)) throw std::invalid_argument("SobolevIndex: sigma must be finite");
}

SpectralOperator::SpectralOperator(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("SpectralOperator: null grid");
    const ShiftedLaplacian laplacian(grid_);
    const double rho_value = grid_->rho();
    rho2_ = rho_value * rho_value;
    low_resolution_ = grid_->size() < 64;
    if (low_resolution_) {
        std::clog << "warning: spectral operator built on " << grid_->size()
                  << " points is low resolution\n";
    }

    std::vector<double> diag = laplacian.symmetric_diagonal();
    const auto m = static_cast<lapack_int>(diag.size());
    std::vector<double> off(diag.size(), laplacian.symmetric_offdiagonal());
    eigenvalues_.assign(diag.size(), 0.0);
    modes_.assign(diag.size() * diag.size(), 0.0);
    std::vector<lapack_int> support(2 * diag.size());
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', m, diag.data(), off.data(), 0.0, 0.0,
                                           0, 0, 0.0, &found, eigenvalues_.data(), modes_.data(), m,
                                           support.data());
    if (info != 0 || found != m) {
        throw SpectralError("tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");
    }

    const auto mm = static_cast<std::size_t>(m);
    for (std::size_t k = 0; k < mm; ++k) {
        double* column = modes_.data() + k * mm;
        std::size_t pivot = 0;
        while (pivot < mm && std::abs(column[pivot]) < 1e-300) ++pivot;
        if (pivot < mm && column[pivot] < 0.0) {
            for (std::size_t i = 0; i < mm; ++i) column[i] = -column[i];
        }
    }

    clamped_.assign(mm, 0);
    for (std::size_t k = 0; k < mm; ++k) {
        if (eigenvalues_[k] < rho2_) {
            eigenvalues_[k] = rho2_;
            clamped_[k] = 1;
            ++clamped_count_;
        }
    }
    if (clamped_count_ > 0) {
        std::clog << "warning: " << clamped_count_ << " discrete eigenvalues below rho^2 clamped\n";
    }

    sqrt_weights_.resize(mm);
    for (std::size_t i = 0; i < mm; ++i) sqrt_weights_[i] = std::sqrt(grid_->weight(static_cast<int>(i + 1)));
}

double SpectralOperator::frequency(int k) const { return std::sqrt(std::max(gap(k), 0.0)); }

std::vector<double> SpectralOperator::coefficients(std::span<const double> f) const {
    const std::size_t mm = eigenvalues_.size();
    if (f.size() != mm + 2) throw std::invalid_argument("coefficients: field size mismatch");
    std::vector<double> scaled(mm);
    for (std::size_t i = 0; i < mm; ++i) scaled[i] = sqrt_weights_[i] * f[i + 1];
    std::vector<double> coeffs(mm, 0.0);
    for (std::size_t k = 0; k < mm; ++k) {
        const double* column = modes_.data() + k * mm;
        double acc = 0.0;
        for (std::size_t i = 0; i < mm; ++i) acc += column[i] * scaled[i];
        coeffs[k] = acc;
    }
    return coeffs;
}

RadialField SpectralOperator::synthesize(std::span<const double> coeffs) const {
    const std::size_t mm = eigenvalues_.size();
    if (coeffs.size() != mm) throw std::invalid_argument("synthesize: coefficient count mismatch");
    std::vector<double> values(mm + 2, 0.0);
    for (std::size_t k = 0; k < mm; ++k) {
        const double c = coeffs[k];
        if (c == 0.0) continue;
        const double* column = modes_.data() + k * mm;
        for (std::size_t i = 0; i < mm; ++i) values[i + 1] += c * column[i];
    }
    for (std::size_t i = 0; i < mm; ++i) values[i + 1] /= sqrt_weights_[i];
    apply_boundary_nodes(values);
    return RadialField(grid_, std::move(values));
}

RadialField SpectralOperator::eigenmode(int k) const {
    if (k < 0 || k >= size()) throw std::out_of_range("eigenmode: index out of range");
    std::vector<double> unit(eigenvalues_.size(), 0.0);
    unit[static_cast<std::size_t>(k)] = 1.0;
    return synthesize(unit);
}

SpectralOperator build_spectral(GridPtr grid) { return SpectralOperator(std::move(grid)); }

double sobolev_norm_from_coefficients(std::span<const double> coeffs, SobolevIndex idx,
                                      const SpectralOperator& op) {
    if (coeffs.size() != static_cast<std::size_t>(op.size())) {
        throw std::invalid_argument("sobolev_norm: coefficient count mismatch");
    }
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::abs(c));
    double total = 0.0;
    for (int k = 0; k < op.size(); ++k) {
        const double c = coeffs[static_cast<std::size_t>(k)];
        const double gap = std::max(op.gap(k), 0.0);
        if (idx.tau < 0.0 && gap == 0.0) {
            if (std::abs(c) > 1e-12 * scale) {
                throw SpectralError("norm undefined at discrete spectral bottom");
            }
            continue;
        }
        const double multiplier = std::pow(gap, idx.tau) * std::pow(op.eigenvalue(k) + 1.0, idx.sigma);
        total += multiplier * c * c;
    }
    return std::sqrt(total);
}

double sobolev_norm(const RadialField& f, SobolevIndex idx, const SpectralOperator& op) {
    if (f.size() != static_cast<std::size_t>(op.grid().size())) {
        throw std::invalid_argument("sobolev_norm: grid mismatch");
    }
    return sobolev_norm_from_coefficients(op.coefficients(f), idx, op);
}

StatePair linear_propagate(const StatePair& state, double t, const SpectralOperator& op) {
    const auto c = op.coefficients(state.u);
    const auto d = op.coefficients(state.ut);
    std::vector<double> cu(c.size());
    std::vector<double> cv(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double lambda = op.frequency(static_cast<int>(k));
        const double cs = std::cos(lambda * t);
        const double sn = std::sin(lambda * t);
        const double sinc = lambda > 0.0 ? sn / lambda : t;
        cu[k] = cs * c[k] + sinc * d[k];
        cv[k] = -lambda * sn * c[k] + cs * d[k];
    }
    return StatePair(op.synthesize(cu), op.synthesize(cv), state.time + t);
}

double lq_norm(const RadialField& f, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
    const auto w = f.grid().weights();
    const auto v = f.values();
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) total += w[i] * std::pow(std::abs(v[i]), q);
    return std::pow(total, 1.0 / q);
}

namespace {
double log_abs_gamma(double re, double im) {
    gsl_sf_result log_modulus;
    gsl_sf_result phase;
    const int status = gsl_sf_lngamma_complex_e(re, im, &log_modulus, &phase);
    if (status != GSL_SUCCESS) throw SpectralError("complex log-gamma evaluation failed");
    return log_modulus.val;
}
}  // namespace

double harish_chandra_density(double lambda, int n) {
    const double rho_value = rho(n);
    if (!std::isfinite(lambda)) throw std::invalid_argument("harish_chandra_density: lambda must be finite");
    const double a = std::abs(lambda);
    if (a == 0.0) return 0.0;
    static const bool handler_off = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)handler_off;
    return std::exp(2.0 * (log_abs_gamma(rho_value, a) - log_abs_gamma(0.0, a)));
}

}  // namespace hyperwave

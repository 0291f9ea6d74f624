#include "hyperwave/geometry.hpp"

#include "hyperwave/quadrature.hpp"
#include "hyperwave/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hyperwave {

void require_dimension(int n) {
    if (n < kMinDimension || n > kMaxDimension) {
        throw std::invalid_argument("dimension must lie in 2..6, got " + std::to_string(n));
    }
}

double rho(int n) {
    require_dimension(n);
    return 0.5 * (n - 1);
}

double sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("sphere_area: n must be positive");
    const double half = 0.5 * n;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double log_sinh(double r) {
    if (r <= 0.0) throw std::invalid_argument("log_sinh: r must be positive");
    if (r < 20.0) return std::log(std::sinh(r));
    return r - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * r));
}

RadialGrid::RadialGrid(int n, double r_max, int num_points) : n_(n), r_max_(r_max) {
    require_dimension(n);
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("r_max must be positive");
    if (num_points < 16) throw std::invalid_argument("num_points must be at least 16");
    h_ = r_max / (num_points - 1);
    const double area = sphere_area(n);
    points_.resize(static_cast<std::size_t>(num_points));
    weights_.resize(static_cast<std::size_t>(num_points));
    for (int i = 0; i < num_points; ++i) {
        const double r = (i + 1 == num_points) ? r_max : i * h_;
        points_[static_cast<std::size_t>(i)] = r;
        double w = 0.0;
        if (i > 0) w = area * h_ * std::exp((n - 1) * log_sinh(r));
        if (i + 1 == num_points) w *= 0.5;
        if (!std::isfinite(w)) throw std::invalid_argument("r_max too large: radial weights overflow");
        weights_[static_cast<std::size_t>(i)] = w;
    }
}

double RadialGrid::rho() const { return hyperwave::rho(n_); }

GridPtr make_grid(int n, double r_max, int num_points) {
    return std::make_shared<const RadialGrid>(n, r_max, num_points);
}

RadialField::RadialField(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("RadialField: null grid");
    values_.assign(static_cast<std::size_t>(grid_->size()), 0.0);
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("RadialField: null grid");
    if (values_.size() != static_cast<std::size_t>(grid_->size())) {
        throw std::invalid_argument("RadialField: value count does not match grid");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("RadialField: non-finite value");
    }
}

RadialField RadialField::from_function(GridPtr grid, const std::function<double(double)>& f) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(grid->size()));
    for (double r : grid->points()) values.push_back(f(r));
    return RadialField(std::move(grid), std::move(values));
}

bool RadialField::same_grid(const RadialField& other) const {
    if (grid_ == other.grid_) return true;
    return grid_->dimension() == other.grid_->dimension() && grid_->size() == other.grid_->size() &&
           grid_->r_max() == other.grid_->r_max();
}

StatePair::StatePair(RadialField u_in, RadialField ut_in, double t)
    : u(std::move(u_in)), ut(std::move(ut_in)), time(t) {
    if (!u.same_grid(ut)) throw std::invalid_argument("StatePair: fields live on different grids");
    if (!std::isfinite(time)) throw std::invalid_argument("StatePair: non-finite time");
}

StatePair StatePair::zero(const GridPtr& grid, double t) {
    return StatePair(RadialField(grid), RadialField(grid), t);
}

double integrate_radial(const RadialGrid& grid, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(grid.size())) {
        throw std::invalid_argument("integrate_radial: size mismatch");
    }
    const auto w = grid.weights();
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) total += w[i] * values[i];
    return total;
}

double integrate_radial(const RadialField& f) { return integrate_radial(f.grid(), f.values()); }

namespace {

// a'(r) from the ratio form (sinh s / sinh r)^{n-1}, which never overflows.
double grad_by_quadrature(double r, int n) {
    const double lo = std::max(0.0, r - 60.0);
    const double denom = -std::expm1(-2.0 * r);
    auto ratio_power = [r, n, denom](double s) {
        const double ratio = std::exp(s - r) * (-std::expm1(-2.0 * s)) / denom;
        return std::pow(ratio, n - 1);
    };
    return integrate_converged(ratio_power, lo, r, 1e-13, 2, 1 << 14, 1e-300).value;
}

}  // namespace

namespace {
double closed_form_grad(double r, int n);
}

double morawetz_weight_grad(double r, int n) {
    require_dimension(n);
    if (r < 0.0 || !std::isfinite(r)) throw std::invalid_argument("morawetz_weight_grad: r must be >= 0");
    // The exact value stays below 1/(n-1); rounding in the closed forms can touch it.
    return std::min(closed_form_grad(r, n), 1.0 / (n - 1));
}

namespace {
double closed_form_grad(double r, int n) {
    if (r == 0.0) return 0.0;
    if (r > 100.0) return grad_by_quadrature(r, n);
    switch (n) {
        case 2:
            return std::tanh(0.5 * r);
        case 3: {
            if (r < 0.5) return grad_by_quadrature(r, n);
            const double sh = std::sinh(r);
            return 0.5 * (std::cosh(r) / sh - r / (sh * sh));
        }
        case 4: {
            const double half = std::sinh(0.5 * r);
            const double c_minus_1 = 2.0 * half * half;
            const double sh = std::sinh(r);
            return c_minus_1 * c_minus_1 * (std::cosh(r) + 2.0) / (3.0 * sh * sh * sh);
        }
        case 5: {
            if (r < 1.0) return grad_by_quadrature(r, n);
            const double sh = std::sinh(r);
            const double integral = std::sinh(4.0 * r) / 32.0 - std::sinh(2.0 * r) / 4.0 + 3.0 * r / 8.0;
            return integral / std::pow(sh, 4);
        }
        default: {
            const double half = std::sinh(0.5 * r);
            const double c_minus_1 = 2.0 * half * half;
            const double c = std::cosh(r);
            const double integral = c_minus_1 * c_minus_1 * c_minus_1 * (3.0 * c * c + 9.0 * c + 8.0) / 15.0;
            return integral / std::pow(std::sinh(r), 5);
        }
    }
}
}  // namespace

double morawetz_weight_second(double r, int n) {
    require_dimension(n);
    if (r < 0.0) throw std::invalid_argument("morawetz_weight_second: r must be >= 0");
    if (r == 0.0) return 1.0 / n;
    return 1.0 - (n - 1) * morawetz_weight_grad(r, n) / std::tanh(r);
}

HessianReport morawetz_weight_hessian_check(std::span<const double> radii, int n, double tol) {
    require_dimension(n);
    HessianReport report;
    if (radii.size() < 3) {
        report.message = "insufficient stencil: at least three radii are required";
        return report;
    }
    report.min_radial = std::numeric_limits<double>::infinity();
    report.min_angular = std::numeric_limits<double>::infinity();
    std::vector<double> grad(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) grad[i] = morawetz_weight_grad(radii[i], n);
    for (std::size_t i = 1; i + 1 < radii.size(); ++i) {
        const double r = radii[i];
        const double radial = morawetz_weight_second(r, n);
        const double angular = grad[i] / std::tanh(r);
        report.min_radial = std::min(report.min_radial, radial);
        report.min_angular = std::min(report.min_angular, angular);
        const double dip = std::max(-tol - radial, -tol - angular);
        if (dip > 0.0) {
            ++report.violations;
            report.max_violation = std::max(report.max_violation, dip);
        }
        const double hl = r - radii[i - 1];
        const double hr = radii[i + 1] - r;
        const double centered = (grad[i + 1] - grad[i - 1]) / (hl + hr);
        const double residual = std::abs(centered + (n - 1) * grad[i] / std::tanh(r) - 1.0);
        report.max_ode_residual = std::max(report.max_ode_residual, residual);
        ++report.checked_points;
    }
    report.ok = report.violations == 0;
    std::ostringstream msg;
    msg << report.checked_points << " interior radii checked, " << report.violations << " violations";
    report.message = msg.str();
    return report;
}

HessianReport morawetz_weight_hessian_check(const RadialGrid& grid, double tol) {
    return morawetz_weight_hessian_check(grid.points(), grid.dimension(), tol);
}

}  // namespace hyperwave

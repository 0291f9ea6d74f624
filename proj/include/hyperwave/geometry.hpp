#pragma once

// Radial geometry of hyperbolic space H^n: measure weights on a uniform
// radial grid, radial integration, and the Morawetz weight derivatives.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperwave {

inline constexpr int kMinDimension = 2;
inline constexpr int kMaxDimension = 6;

// Throws std::invalid_argument unless 2 <= n <= 6.
void require_dimension(int n);

// Half-dimension constant (n - 1) / 2, the square root of the spectral bottom.
double rho(int n);

// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

// log(sinh r) for r > 0 without overflow for large r.
double log_sinh(double r);

class RadialGrid {
public:
    RadialGrid(int n, double r_max, int num_points);

    int dimension() const { return n_; }
    double r_max() const { return r_max_; }
    int size() const { return static_cast<int>(points_.size()); }
    double spacing() const { return h_; }
    double rho() const;
    std::span<const double> points() const { return points_; }
    std::span<const double> weights() const { return weights_; }
    double point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }

private:
    int n_;
    double r_max_;
    double h_;
    std::vector<double> points_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int n, double r_max, int num_points);

// A real function sampled on a radial grid. Values must be finite.
class RadialField {
public:
    explicit RadialField(GridPtr grid);
    RadialField(GridPtr grid, std::vector<double> values);
    static RadialField from_function(GridPtr grid, const std::function<double(double)>& f);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    bool same_grid(const RadialField& other) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

// Quadrature of |S^{n-1}| * integral of f(r) sinh^{n-1}(r) dr with the grid's
// trapezoid weights.
double integrate_radial(const RadialField& f);
double integrate_radial(const RadialGrid& grid, std::span<const double> values);

// Radial derivative a'(r) of the Morawetz weight solving Delta a = 1:
// a'(r) = sinh(r)^{1-n} * integral_0^r sinh(s)^{n-1} ds.
double morawetz_weight_grad(double r, int n);

// Second radial derivative a''(r) = 1 - (n-1) coth(r) a'(r).
double morawetz_weight_second(double r, int n);

struct HessianReport {
    bool ok = false;
    int checked_points = 0;
    int violations = 0;
    double max_violation = 0.0;       // largest amount by which a component dips below -tol
    double min_radial = 0.0;          // smallest a'' seen
    double min_angular = 0.0;         // smallest a' coth(r) seen
    double max_ode_residual = 0.0;    // |a'' + (n-1) coth a' - 1| with a'' by centered differences
    std::string message;
};

// Checks positivity of the Hessian of a at every interior radius.
HessianReport morawetz_weight_hessian_check(const RadialGrid& grid, double tol = 1e-10);
HessianReport morawetz_weight_hessian_check(std::span<const double> radii, int n, double tol = 1e-10);

}  // namespace hyperwave

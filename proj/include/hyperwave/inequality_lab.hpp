#pragma once

// Quadrature checks of the integral inequalities used in the exterior decay
// estimates: a circle average of |y|^{-kappa} and two weighted 1D integrals
// with explicit constants.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperwave {

enum class LemmaId { sphere, two_factor, three_factor };

std::string to_string(LemmaId id);
// Accepts "sphere", "two_factor", "three_factor"; throws std::invalid_argument.
LemmaId parse_lemma_id(std::string_view name);

// Integral of |y|^{-kappa} over the circle |y - x| = r in R^2 (arc length).
// Needs x_abs > r > 0, kappa > 0, kappa != 1.
double sphere_integral(double x_abs, double r, double kappa);

// min of the two branch expressions without the constant.
double sphere_bound_shape(double x_abs, double r, double kappa);

// Constant read off the proof of the circle estimate:
// kappa > 1: max{2 pi, pi int_0^inf (1+s^2)^{-kappa/2} ds};
// kappa < 1: max{2 pi, 2^{1-kappa} pi / (1 - kappa)}.
double sphere_constant(double kappa);

// Smallest constant that works on a (|x|, r) sweep for fixed kappa.
double fit_sphere_constant(double kappa, int radial_samples = 40);

struct BoundCheck {
    double integral = 0.0;
    double bound = 0.0;
    double ratio() const { return integral / bound; }
};

// int_0^{r1} (r1-r)^{-k1} (r2-r)^{-k2} dr against C (r2-r1)^{1-k1-k2},
// C = 1/(1-k1) + 1/(k1+k2-1).
double two_factor_constant(double k1, double k2);
BoundCheck two_factor_bound_check(double r1, double r2, double k1, double k2);

// int_0^{r1} (r1-r)^{-k1} (r2-r)^{-k2} (r3-r)^{-k3} dr against
// C (r3-r1)^{1-k1-k2-k3}, C = 1/(1-k1-k2) + 1/(k1+k2+k3-1).
double three_factor_constant(double k1, double k2, double k3);
BoundCheck three_factor_bound_check(double r1, double r2, double r3, double k1, double k2, double k3);

// Circle integral against sphere_constant(kappa) * sphere_bound_shape.
BoundCheck sphere_bound_check(double x_abs, double r, double kappa);

struct LemmaSample {
    std::vector<double> parameters;  // lemma arguments in call order
    double integral = 0.0;
    double bound = 0.0;
};

struct LemmaCheckReport {
    LemmaId lemma = LemmaId::sphere;
    int samples = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;
    int violations = 0;
    LemmaSample worst;
};

// Relative slack allowed for quadrature error when counting violations.
inline constexpr double kLemmaSlack = 1e-8;

// Deterministic draws inside the lemma's parameter range; throws for samples < 1.
LemmaCheckReport randomized_check(LemmaId lemma, int samples, std::uint64_t seed);

}  // namespace hyperwave

#include "hyperwave/inequality_lab.hpp"

#include "hyperwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hyperwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelTol = 1e-10;

// Integral over [a, b] split at geometrically graded breakpoints
// a + scale * 2^k so that a peak of width `scale` at a is resolved.
double graded_integral(const std::function<double(double)>& f, double a, double b, double scale) {
    std::vector<double> cuts{a};
    double step = std::max(scale, 1e-300) / 4.0;
    while (a + step < b) {
        cuts.push_back(a + step);
        step *= 2.0;
    }
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        total += integrate_converged(f, cuts[k], cuts[k + 1], kRelTol, 2, 1 << 12, 1e-300).value;
    }
    return total;
}

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

std::string to_string(LemmaId id) {
    switch (id) {
        case LemmaId::sphere:
            return "sphere";
        case LemmaId::two_factor:
            return "two_factor";
        case LemmaId::three_factor:
            return "three_factor";
    }
    return "unknown";
}

LemmaId parse_lemma_id(std::string_view name) {
    if (name == "sphere") return LemmaId::sphere;
    if (name == "two_factor") return LemmaId::two_factor;
    if (name == "three_factor") return LemmaId::three_factor;
    throw std::invalid_argument("unknown lemma '" + std::string(name) + "'");
}

double sphere_integral(double x_abs, double r, double kappa) {
    require_positive(r, "r");
    require_positive(kappa, "kappa");
    if (!(x_abs > r)) throw std::invalid_argument("sphere integral needs |x| > r");
    if (kappa == 1.0) throw std::invalid_argument("kappa = 1 is not covered");
    // y = x + r(cos t, sin t); with phi = pi - t, |y|^2 = (|x|-r)^2 + 2|x|r(1 - cos phi).
    const double gap = x_abs - r;
    auto integrand = [&](double phi) {
        const double half = std::sin(0.5 * phi);
        return std::pow(gap * gap + 4.0 * x_abs * r * half * half, -0.5 * kappa);
    };
    const double width = gap / std::sqrt(x_abs * r);
    return 2.0 * r * graded_integral(integrand, 0.0, kPi, width);
}

double sphere_bound_shape(double x_abs, double r, double kappa) {
    const double gap = x_abs - r;
    const double near = r * std::pow(gap, -kappa);
    const double far = kappa > 1.0 ? std::pow(gap, 1.0 - kappa) : std::pow(x_abs, 1.0 - kappa);
    return std::min(near, far);
}

double sphere_constant(double kappa) {
    require_positive(kappa, "kappa");
    if (kappa == 1.0) throw std::invalid_argument("kappa = 1 is not covered");
    if (kappa > 1.0) {
        const double tail = std::sqrt(kPi) * std::tgamma(0.5 * (kappa - 1.0)) / (2.0 * std::tgamma(0.5 * kappa));
        return std::max(2.0 * kPi, kPi * tail);
    }
    return std::max(2.0 * kPi, std::pow(2.0, 1.0 - kappa) * kPi / (1.0 - kappa));
}

BoundCheck sphere_bound_check(double x_abs, double r, double kappa) {
    return {sphere_integral(x_abs, r, kappa), sphere_constant(kappa) * sphere_bound_shape(x_abs, r, kappa)};
}

double fit_sphere_constant(double kappa, int radial_samples) {
    if (radial_samples < 2) throw std::invalid_argument("need at least 2 radial samples");
    double fitted = 0.0;
    for (int i = 0; i < radial_samples; ++i) {
        const double x_abs = std::pow(10.0, -1.0 + 3.0 * i / (radial_samples - 1));
        for (int j = 1; j < radial_samples; ++j) {
            // r / |x| from 1e-3 up to 1 - 1e-4, graded toward 1
            const double frac = 1.0 - std::pow(10.0, -4.0 + 4.0 * (radial_samples - 1 - j) / (radial_samples - 1)) + 1e-4;
            const double r = x_abs * std::clamp(frac, 1e-3, 1.0 - 1e-4);
            fitted = std::max(fitted, sphere_integral(x_abs, r, kappa) / sphere_bound_shape(x_abs, r, kappa));
        }
    }
    return fitted;
}

double two_factor_constant(double k1, double k2) { return 1.0 / (1.0 - k1) + 1.0 / (k1 + k2 - 1.0); }

double three_factor_constant(double k1, double k2, double k3) {
    return 1.0 / (1.0 - k1 - k2) + 1.0 / (k1 + k2 + k3 - 1.0);
}

namespace {

// int_0^{r1} (r1-r)^{-k1} g(r1 - r) dr after u = (r1 - r)^{1-k1}:
//   (1/(1-k1)) int_0^{r1^{1-k1}} g(u^{1/(1-k1)}) du,
// with g peaked at 0 on the scale `gap`.
double singular_endpoint_integral(double r1, double k1, double gap, const std::function<double(double)>& g) {
    const double e = 1.0 - k1;
    auto integrand = [&](double u) { return g(std::pow(u, 1.0 / e)); };
    const double upper = std::pow(r1, e);
    return graded_integral(integrand, 0.0, upper, std::min(upper, std::pow(gap, e))) / e;
}

}  // namespace

BoundCheck two_factor_bound_check(double r1, double r2, double k1, double k2) {
    require_positive(r1, "r1");
    require_positive(k1, "kappa1");
    require_positive(k2, "kappa2");
    if (!(r1 < r2)) throw std::invalid_argument("need r1 < r2");
    if (!(k1 < 1.0)) throw std::invalid_argument("need kappa1 < 1");
    if (!(k1 + k2 > 1.0)) throw std::invalid_argument("need kappa1 + kappa2 > 1");
    const double gap = r2 - r1;
    const double integral = singular_endpoint_integral(r1, k1, gap, [&](double s) { return std::pow(gap + s, -k2); });
    return {integral, two_factor_constant(k1, k2) * std::pow(gap, 1.0 - k1 - k2)};
}

BoundCheck three_factor_bound_check(double r1, double r2, double r3, double k1, double k2, double k3) {
    require_positive(r1, "r1");
    require_positive(k1, "kappa1");
    require_positive(k2, "kappa2");
    require_positive(k3, "kappa3");
    if (!(r1 < r2 && r2 <= r3)) throw std::invalid_argument("need r1 < r2 <= r3");
    if (!(k1 + k2 < 1.0)) throw std::invalid_argument("need kappa1 + kappa2 < 1");
    if (!(k1 + k2 + k3 > 1.0)) throw std::invalid_argument("need kappa1 + kappa2 + kappa3 > 1");
    const double gap2 = r2 - r1, gap3 = r3 - r1;
    const double integral = singular_endpoint_integral(
        r1, k1, gap2, [&](double s) { return std::pow(gap2 + s, -k2) * std::pow(gap3 + s, -k3); });
    return {integral, three_factor_constant(k1, k2, k3) * std::pow(gap3, 1.0 - k1 - k2 - k3)};
}

LemmaCheckReport randomized_check(LemmaId lemma, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto between = [&](double a, double b) { return a + (b - a) * unit(rng); };
    auto log_between = [&](double a, double b) { return std::exp(between(std::log(a), std::log(b))); };

    LemmaCheckReport report;
    report.lemma = lemma;
    report.samples = samples;
    report.seed = seed;
    report.max_ratio = -1.0;
    for (int k = 0; k < samples; ++k) {
        LemmaSample s;
        BoundCheck c;
        switch (lemma) {
            case LemmaId::sphere: {
                double kappa = between(0.1, 3.5);
                while (std::abs(kappa - 1.0) < 0.02) kappa = between(0.1, 3.5);
                const double x_abs = log_between(0.05, 100.0);
                const double r = x_abs * (1.0 - log_between(1e-4, 0.999));
                c = sphere_bound_check(x_abs, r, kappa);
                s.parameters = {x_abs, r, kappa};
                break;
            }
            case LemmaId::two_factor: {
                const double k1 = between(0.02, 0.98);
                const double k2 = between(1.0 - k1 + 0.02, 3.0);
                const double r1 = log_between(0.01, 100.0);
                const double r2 = r1 * (1.0 + log_between(1e-3, 100.0));
                c = two_factor_bound_check(r1, r2, k1, k2);
                s.parameters = {r1, r2, k1, k2};
                break;
            }
            case LemmaId::three_factor: {
                const double k12 = between(0.02, 0.98);
                const double k1 = k12 * between(0.05, 0.95);
                const double k2 = k12 - k1;
                const double k3 = between(1.0 - k12 + 0.02, 3.0);
                const double r1 = log_between(0.01, 100.0);
                const double r2 = r1 * (1.0 + log_between(1e-3, 100.0));
                const double r3 = unit(rng) < 0.1 ? r2 : r2 * (1.0 + log_between(1e-3, 100.0));
                c = three_factor_bound_check(r1, r2, r3, k1, k2, k3);
                s.parameters = {r1, r2, r3, k1, k2, k3};
                break;
            }
        }
        s.integral = c.integral;
        s.bound = c.bound;
        const double ratio = c.ratio();
        if (!(ratio <= 1.0 + kLemmaSlack)) ++report.violations;
        if (ratio > report.max_ratio || std::isnan(ratio)) {
            report.max_ratio = ratio;
            report.worst = s;
        }
    }
    return report;
}

}  // namespace hyperwave

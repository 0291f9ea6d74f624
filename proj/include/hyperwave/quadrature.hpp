#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace hyperwave {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Composite 20-point Gauss-Legendre rule on `panels` equal panels of [a, b].
double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels);

struct QuadratureResult {
    double value = 0.0;
    int panels = 0;
    double last_change = 0.0;
};

// Doubles the panel count until two successive composite values agree to
// rel_tol (relative, with abs_floor as an absolute guard for values near 0).
// Throws QuadratureError when max_panels is reached first.
QuadratureResult integrate_converged(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol = 1e-8, int start_panels = 2,
                                     int max_panels = 1 << 14, double abs_floor = 1e-300);

}  // namespace hyperwave

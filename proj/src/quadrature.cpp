#include "hyperwave/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

namespace hyperwave {

namespace {
using Rule = boost::math::quadrature::gauss<double, 20>;
}

double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("gauss_panels: panels must be positive");
    if (a == b) return 0.0;
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + k * width;
        const double hi = (k + 1 == panels) ? b : lo + width;
        total += Rule::integrate(f, lo, hi);
    }
    return total;
}

QuadratureResult integrate_converged(const std::function<double(double)>& f, double a, double b,
                                     double rel_tol, int start_panels, int max_panels,
                                     double abs_floor) {
    int panels = std::max(1, start_panels);
    double previous = gauss_panels(f, a, b, panels);
    while (panels < max_panels) {
        panels *= 2;
        const double current = gauss_panels(f, a, b, panels);
        const double change = std::abs(current - previous);
        if (!std::isfinite(current)) break;
        if (change <= rel_tol * std::abs(current) || change <= abs_floor) {
            return {current, panels, change};
        }
        previous = current;
    }
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b << "] with " << panels << " panels";
    throw QuadratureError(msg.str());
}

}  // namespace hyperwave

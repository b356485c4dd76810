#include "dcopt/counterexample.hpp"

#include <cmath>
#include <stdexcept>

namespace dcopt {

double counterexample_phi(const Vec& x) {
    if (x.size() != 2)
        throw std::invalid_argument("counterexample_phi: expects a 2-vector");
    const double a = x[0], b = x[1];
    const double g = -2.5 * a + a * a + b * b + std::fabs(a) + std::fabs(b);
    const double h = 0.5 * (a * a + b * b);
    return g - h;
}

double counterexample_profile(double t) {
    const Vec base{1.0, 0.0};
    const Vec moved{1.0 + 0.5 * t, -t};
    return counterexample_phi(moved) - counterexample_phi(base);
}

} // namespace dcopt

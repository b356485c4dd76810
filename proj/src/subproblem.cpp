#include "dcopt/subproblem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dcopt/errors.hpp"

namespace dcopt {

Vec solve_subproblem_generic(const std::function<Vec(const Vec&)>& grad_g,
                             const Vec& u, double rho, const Vec& x_init,
                             double tol, int max_iter) {
    if (!(rho > 0.0))
        throw std::invalid_argument("solve_subproblem_generic: rho must be > 0");

    auto residual_at = [&](const Vec& x) {
        Vec r = grad_g(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= u[i];
        return r;
    };

    Vec x = x_init;
    Vec r = residual_at(x);
    double rn = norm(r);
    // 1/rho is exact for the plain rho-quadratic; the safeguard halves it
    // down to ~1/L otherwise
    double step = 1.0 / rho;

    for (int it = 0; it < max_iter; ++it) {
        if (rn <= tol) return x;

        Vec x_trial(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) x_trial[i] = x[i] - step * r[i];
        Vec r_trial = residual_at(x_trial);
        const double rn_trial = norm(r_trial);

        if (rn_trial < rn && std::isfinite(rn_trial)) {
            // secant curvature estimate along the step just taken
            double sv = 0.0, vv = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double v = r_trial[i] - r[i];
                sv += (x_trial[i] - x[i]) * v;
                vv += v * v;
            }
            x = std::move(x_trial);
            r = std::move(r_trial);
            rn = rn_trial;
            if (vv > 0.0 && sv > 0.0) step = sv / vv;
        } else {
            step *= 0.5;
            if (step < 1e-300)
                throw SubproblemFailure(
                    "solve_subproblem_generic: stalled at residual " +
                    std::to_string(rn) + " (tol " + std::to_string(tol) + ")");
        }
    }
    throw SubproblemFailure("solve_subproblem_generic: residual " +
                            std::to_string(rn) + " after " +
                            std::to_string(max_iter) + " iterations (tol " +
                            std::to_string(tol) + ")");
}

} // namespace dcopt

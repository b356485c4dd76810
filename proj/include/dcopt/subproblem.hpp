#pragma once

#include <functional>

#include "dcopt/matrix.hpp"

namespace dcopt {

// First-order solver for min_x g(x) - <u, x> when grad_g is rho-strongly
// monotone. Fallback for problems without a closed-form subproblem solution.
//
// Secant-scaled gradient iteration with a halving safeguard: each trial
// costs one oracle call and is accepted only when it shrinks the residual
// ||grad_g(x) - u||. Terminates when the residual is <= tol; throws
// SubproblemFailure after max_iter oracle calls.
Vec solve_subproblem_generic(const std::function<Vec(const Vec&)>& grad_g,
                             const Vec& u, double rho, const Vec& x_init,
                             double tol = 1e-10, int max_iter = 100000);

} // namespace dcopt

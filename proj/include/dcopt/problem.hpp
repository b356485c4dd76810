#pragma once

#include <cstddef>

#include "dcopt/matrix.hpp"

namespace dcopt {

// Oracle bundle for one DC instance phi = g - h, where g and h are strongly
// convex with a shared modulus rho > 0 and g is continuously differentiable.
//
// subgrad_h must return one deterministic element of the subdifferential of
// h, so that runs are reproducible; each implementation documents its
// selection rule. Instances are immutable after construction and safe for
// concurrent read-only evaluation.
class DcProblem {
public:
    virtual ~DcProblem() = default;

    // flattened variable size
    virtual std::size_t dimension() const = 0;

    virtual double eval_g(const Vec& x) const = 0;
    virtual double eval_h(const Vec& x) const = 0;

    // always the difference of the two parts, never stored separately
    double eval_phi(const Vec& x) const { return eval_g(x) - eval_h(x); }

    virtual Vec grad_g(const Vec& x) const = 0;
    virtual Vec subgrad_h(const Vec& x) const = 0;

    // argmin_x g(x) - <u, x>; unique by strong convexity of g
    virtual Vec solve_subproblem(const Vec& u) const = 0;

    // the shared certified modulus rho
    virtual double strong_convexity_modulus() const = 0;

    // bound for ||grad_g(y) - u|| accepted from solve_subproblem, scaled by
    // 1 + ||u|| at the point of use
    virtual double subproblem_tolerance() const { return 1e-8; }
};

} // namespace dcopt

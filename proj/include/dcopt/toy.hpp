#pragma once

#include "dcopt/problem.hpp"

namespace dcopt {

// Separable test function
//   phi(x) = ||x||^2 + sum_i x_i - sum_i |x_i|
// with the strongly convex split
//   g(x) = (3/2)||x||^2 + <e, x>,   h(x) = ||x||_1 + (1/2)||x||^2.
// Every point of {-1,0}^m is critical and (-1,...,-1) is the unique global
// minimizer. The subgradient selection uses sign(0) := 0.
class ToyProblem : public DcProblem {
public:
    explicit ToyProblem(std::size_t m);

    std::size_t dimension() const override { return m_; }
    double eval_g(const Vec& x) const override;
    double eval_h(const Vec& x) const override;
    Vec grad_g(const Vec& x) const override;    // 3x + e
    Vec subgrad_h(const Vec& x) const override; // sign(x) + x
    Vec solve_subproblem(const Vec& u) const override; // (u - e)/3
    double strong_convexity_modulus() const override { return 1.0; }

private:
    std::size_t m_;
};

} // namespace dcopt

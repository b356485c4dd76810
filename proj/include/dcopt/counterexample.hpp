#pragma once

#include "dcopt/matrix.hpp"

namespace dcopt {

// Evaluation-only fixture with a nonsmooth first part:
//   g(x,y) = -(5/2)x + x^2 + y^2 + |x| + |y|,   h(x,y) = (x^2 + y^2)/2.
// The DCA direction d0 = (1/2,-1) at (1,0) is an ascent direction for
// phi = g - h, so the boosting line search can never succeed here. The
// fixture documents that failure mode; it is deliberately not a DcProblem.

double counterexample_phi(const Vec& x); // x.size() == 2

// phi((1,0) + t*(1/2,-1)) - phi(1,0); equals 5t^2/8 + 3t/4 for t >= 0
double counterexample_profile(double t);

} // namespace dcopt

#include "dcopt/toy.hpp"

#include <cmath>
#include <stdexcept>

namespace dcopt {

ToyProblem::ToyProblem(std::size_t m) : m_(m) {
    if (m == 0) throw std::invalid_argument("ToyProblem: m must be >= 1");
}

double ToyProblem::eval_g(const Vec& x) const {
    double sq = 0.0, lin = 0.0;
    for (double v : x) {
        sq += v * v;
        lin += v;
    }
    return 1.5 * sq + lin;
}

double ToyProblem::eval_h(const Vec& x) const {
    double sq = 0.0, l1 = 0.0;
    for (double v : x) {
        sq += v * v;
        l1 += std::fabs(v);
    }
    return l1 + 0.5 * sq;
}

Vec ToyProblem::grad_g(const Vec& x) const {
    Vec g(m_);
    for (std::size_t i = 0; i < m_; ++i) g[i] = 3.0 * x[i] + 1.0;
    return g;
}

Vec ToyProblem::subgrad_h(const Vec& x) const {
    Vec u(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        const double s = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
        u[i] = s + x[i];
    }
    return u;
}

Vec ToyProblem::solve_subproblem(const Vec& u) const {
    Vec y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = (u[i] - 1.0) / 3.0;
    return y;
}

} // namespace dcopt

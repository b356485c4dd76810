#pragma once

#include "dcopt/matrix.hpp"
#include "dcopt/problem.hpp"

namespace dcopt {

// Minimum sum-of-squares clustering of n data points a^1..a^n in R^m into
// k centers x^1..x^k,
//   phi(X) = (1/n) sum_i min_j ||x^j - a^i||^2,
// through the split
//   g(X) = (1/n) sum_i sum_j ||x^j - a^i||^2 + (rho/2)||X||^2
//   h(X) = (1/n) sum_i max_j sum_{t != j} ||x^t - a^i||^2 + (rho/2)||X||^2.
// The variable is the k x m center matrix flattened row-major. h is
// evaluated through the identity
//   max_j sum_{t != j} ||x^t - a^i||^2
//     = sum_t ||x^t - a^i||^2 - min_j ||x^j - a^i||^2.
// Argmin ties pick the smallest center index, so the subgradient selection
// is deterministic.
class ClusteringProblem : public DcProblem {
public:
    ClusteringProblem(Matrix data, std::size_t k, double rho = 0.1);

    std::size_t dimension() const override { return k_ * data_.cols(); }
    double eval_g(const Vec& x) const override;
    double eval_h(const Vec& x) const override;
    Vec grad_g(const Vec& x) const override;    // row j: (2+rho) x^j - 2 abar
    Vec subgrad_h(const Vec& x) const override;
    Vec solve_subproblem(const Vec& u) const override; // row j: (u_j + 2 abar)/(2+rho)
    double strong_convexity_modulus() const override { return rho_; }

    std::size_t num_clusters() const { return k_; }
    std::size_t point_dim() const { return data_.cols(); }
    const Matrix& data() const { return data_; }
    const Vec& data_mean() const { return mean_; }

    // smallest index attaining min_j ||x^j - a^i||^2 for data point i
    std::size_t nearest_center(const Vec& x, std::size_t i) const;

private:
    Matrix data_; // n x m
    std::size_t k_;
    double rho_;
    Vec total_sum_;  // columnwise sum of the data
    Vec mean_;       // abar, column mean of the data
    double mean_sq_; // (1/n) sum_i ||a^i||^2
};

} // namespace dcopt

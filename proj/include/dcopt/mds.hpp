#pragma once

#include "dcopt/matrix.hpp"
#include "dcopt/problem.hpp"

namespace dcopt {

// Metric multidimensional scaling: embed n objects with target pairwise
// dissimilarities delta into R^p by minimizing
//   Stress(X) = sum_{i<j} w_ij (d_ij(X) - delta_ij)^2
// through the split
//   g(X) = (1/2) sum_{i<j} w_ij d_ij^2(X) + (rho/2)||X||^2
//   h(X) = sum_{i<j} w_ij delta_ij d_ij(X) + (rho/2)||X||^2,
// so that Stress(X) = 2 phi(X) + sum_{i<j} w_ij delta_ij^2.
//
// grad_g(X) = (V + rho I) X with V the weighted Laplacian; V + rho I is
// factored once at construction and reused by every subproblem solve.
// Pairs with d_ij(X) = 0 contribute the zero vector to subgrad_h (a valid
// subgradient element of the norm at 0).
class MdsProblem : public DcProblem {
public:
    // unit weights off the diagonal
    MdsProblem(Matrix delta, std::size_t p, double rho);
    MdsProblem(Matrix delta, Matrix weights, std::size_t p, double rho);

    static double default_rho(std::size_t n, std::size_t p) {
        return 1.0 / (static_cast<double>(n) * static_cast<double>(p));
    }

    std::size_t dimension() const override { return delta_.rows() * p_; }
    double eval_g(const Vec& x) const override;
    double eval_h(const Vec& x) const override;
    Vec grad_g(const Vec& x) const override;
    Vec subgrad_h(const Vec& x) const override;
    Vec solve_subproblem(const Vec& u) const override;
    double strong_convexity_modulus() const override { return rho_; }

    std::size_t num_points() const { return delta_.rows(); }
    std::size_t embed_dim() const { return p_; }
    double rho() const { return rho_; }
    const Matrix& dissimilarities() const { return delta_; }
    const Matrix& weights() const { return w_; }
    const Matrix& laplacian() const { return laplacian_; }

    double stress(const Vec& x) const;
    double stress(const Matrix& X) const;
    // sum_{i<j} w_ij delta_ij^2, the constant in Stress = 2 phi + offset
    double stress_offset() const { return stress_offset_; }

    // Sherman-Morrison closed form of the subproblem for unit weights:
    //   Y = (U + e (e^T U)/rho) / (n + rho)
    static Matrix unit_weight_subproblem(const Matrix& u, double rho);

private:
    Matrix delta_; // n x n, symmetric, nonnegative, zero diagonal
    Matrix w_;     // n x n, symmetric
    std::size_t p_;
    double rho_;
    Matrix laplacian_;         // V
    std::vector<double> chol_; // lower Cholesky factor of V + rho I
    double stress_offset_ = 0.0;

    void factorize();
    void solve_inplace(Vec& rhs_col) const; // one column through L L^T
};

} // namespace dcopt

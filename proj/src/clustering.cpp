#include "dcopt/clustering.hpp"

#include <limits>
#include <stdexcept>

namespace dcopt {

ClusteringProblem::ClusteringProblem(Matrix data, std::size_t k, double rho)
    : data_(std::move(data)), k_(k), rho_(rho) {
    if (data_.rows() == 0 || data_.cols() == 0)
        throw std::invalid_argument("ClusteringProblem: data must be nonempty");
    if (k_ == 0) throw std::invalid_argument("ClusteringProblem: k must be >= 1");
    if (!(rho_ > 0.0))
        throw std::invalid_argument("ClusteringProblem: rho must be > 0");
    if (!all_finite(data_.flat()))
        throw std::invalid_argument("ClusteringProblem: data has non-finite entries");

    const std::size_t n = data_.rows(), m = data_.cols();
    total_sum_.assign(m, 0.0);
    mean_sq_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* a = data_.row(i);
        for (std::size_t t = 0; t < m; ++t) {
            total_sum_[t] += a[t];
            mean_sq_ += a[t] * a[t];
        }
    }
    mean_ = total_sum_;
    for (double& v : mean_) v /= static_cast<double>(n);
    mean_sq_ /= static_cast<double>(n);
}

std::size_t ClusteringProblem::nearest_center(const Vec& x, std::size_t i) const {
    const std::size_t m = data_.cols();
    const double* a = data_.row(i);
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k_; ++j) {
        const double* c = x.data() + j * m;
        double d = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            const double diff = c[t] - a[t];
            d += diff * diff;
        }
        if (d < best_d) { // ties keep the smallest index
            best_d = d;
            best = j;
        }
    }
    return best;
}

double ClusteringProblem::eval_g(const Vec& x) const {
    const std::size_t m = data_.cols();
    double total = 0.0, frob = 0.0;
    for (std::size_t j = 0; j < k_; ++j) {
        const double* c = x.data() + j * m;
        double sq = 0.0, proj = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            sq += c[t] * c[t];
            proj += c[t] * mean_[t];
        }
        // (1/n) sum_i ||x^j - a^i||^2 = ||x^j||^2 - 2<x^j, abar> + mean_sq
        total += sq - 2.0 * proj + mean_sq_;
        frob += sq;
    }
    return total + 0.5 * rho_ * frob;
}

double ClusteringProblem::eval_h(const Vec& x) const {
    const std::size_t n = data_.rows(), m = data_.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* a = data_.row(i);
        double sum = 0.0;
        double min_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k_; ++j) {
            const double* c = x.data() + j * m;
            double d = 0.0;
            for (std::size_t t = 0; t < m; ++t) {
                const double diff = c[t] - a[t];
                d += diff * diff;
            }
            sum += d;
            if (d < min_d) min_d = d;
        }
        total += sum - min_d;
    }
    return total / static_cast<double>(n) + 0.5 * rho_ * norm_sq(x);
}

Vec ClusteringProblem::grad_g(const Vec& x) const {
    const std::size_t m = data_.cols();
    Vec g(k_ * m);
    for (std::size_t j = 0; j < k_; ++j)
        for (std::size_t t = 0; t < m; ++t)
            g[j * m + t] = (2.0 + rho_) * x[j * m + t] - 2.0 * mean_[t];
    return g;
}

Vec ClusteringProblem::subgrad_h(const Vec& x) const {
    const std::size_t n = data_.rows(), m = data_.cols();
    // row j of the active selection's gradient:
    //   (2/n) sum_{i : nearest != j} (x^j - a^i) + rho x^j
    std::vector<std::size_t> assigned(k_, 0);
    Vec assigned_sum(k_ * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ji = nearest_center(x, i);
        assigned[ji] += 1;
        const double* a = data_.row(i);
        for (std::size_t t = 0; t < m; ++t) assigned_sum[ji * m + t] += a[t];
    }
    Vec u(k_ * m);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < k_; ++j) {
        const double away = static_cast<double>(n - assigned[j]);
        for (std::size_t t = 0; t < m; ++t) {
            const double away_sum = total_sum_[t] - assigned_sum[j * m + t];
            u[j * m + t] =
                2.0 * inv_n * (away * x[j * m + t] - away_sum) + rho_ * x[j * m + t];
        }
    }
    return u;
}

Vec ClusteringProblem::solve_subproblem(const Vec& u) const {
    const std::size_t m = data_.cols();
    Vec y(k_ * m);
    for (std::size_t j = 0; j < k_; ++j)
        for (std::size_t t = 0; t < m; ++t)
            y[j * m + t] = (u[j * m + t] + 2.0 * mean_[t]) / (2.0 + rho_);
    return y;
}

} // namespace dcopt

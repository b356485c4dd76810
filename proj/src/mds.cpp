#include "dcopt/mds.hpp"

#include <cmath>
#include <stdexcept>

#include "dcopt/errors.hpp"

namespace dcopt {

namespace {

Matrix unit_weights(std::size_t n) {
    Matrix w(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) w(i, i) = 0.0;
    return w;
}

void check_square_symmetric(const Matrix& m, const char* name) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string("MdsProblem: ") + name +
                                    " must be square");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i))
                throw std::invalid_argument(std::string("MdsProblem: ") + name +
                                            " must be symmetric");
}

} // namespace

MdsProblem::MdsProblem(Matrix delta, std::size_t p, double rho)
    : MdsProblem(std::move(delta), Matrix(), p, rho) {}

MdsProblem::MdsProblem(Matrix delta, Matrix weights, std::size_t p, double rho)
    : delta_(std::move(delta)), w_(std::move(weights)), p_(p), rho_(rho) {
    const std::size_t n = delta_.rows();
    if (n < 2) throw std::invalid_argument("MdsProblem: need at least 2 objects");
    if (p_ == 0) throw std::invalid_argument("MdsProblem: p must be >= 1");
    if (!(rho_ > 0.0)) throw std::invalid_argument("MdsProblem: rho must be > 0");
    check_square_symmetric(delta_, "delta");
    for (std::size_t i = 0; i < n; ++i) {
        if (delta_(i, i) != 0.0)
            throw std::invalid_argument("MdsProblem: delta diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j)
            if (!(delta_(i, j) >= 0.0))
                throw std::invalid_argument("MdsProblem: delta must be nonnegative");
    }
    if (w_.size() == 0) w_ = unit_weights(n);
    if (w_.rows() != n)
        throw std::invalid_argument("MdsProblem: weights shape mismatch");
    check_square_symmetric(w_, "weights");

    laplacian_ = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            laplacian_(i, j) = -w_(i, j);
            degree += w_(i, j);
            stress_offset_ += (j > i) ? w_(i, j) * delta_(i, j) * delta_(i, j) : 0.0;
        }
        laplacian_(i, i) = degree;
    }
    factorize();
}

void MdsProblem::factorize() {
    const std::size_t n = delta_.rows();
    chol_.assign(n * n, 0.0);
    // lower Cholesky of V + rho I; fails only on corrupt (negative) weights
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = laplacian_(i, j) + (i == j ? rho_ : 0.0);
            for (std::size_t t = 0; t < j; ++t) s -= chol_[i * n + t] * chol_[j * n + t];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s))
                    throw FactorizationFailure(
                        "MdsProblem: V + rho I is not numerically SPD (pivot " +
                        std::to_string(s) + " at " + std::to_string(i) + ")");
                chol_[i * n + i] = std::sqrt(s);
            } else {
                chol_[i * n + j] = s / chol_[j * n + j];
            }
        }
    }
}

void MdsProblem::solve_inplace(Vec& col) const {
    const std::size_t n = delta_.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double s = col[i];
        for (std::size_t t = 0; t < i; ++t) s -= chol_[i * n + t] * col[t];
        col[i] = s / chol_[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = col[i];
        for (std::size_t t = i + 1; t < n; ++t) s -= chol_[t * n + i] * col[t];
        col[i] = s / chol_[i * n + i];
    }
}

double MdsProblem::eval_g(const Vec& x) const {
    const std::size_t n = delta_.rows();
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * p_;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = x.data() + j * p_;
            double d = 0.0;
            for (std::size_t t = 0; t < p_; ++t) {
                const double diff = xi[t] - xj[t];
                d += diff * diff;
            }
            quad += w_(i, j) * d;
        }
    }
    return 0.5 * quad + 0.5 * rho_ * norm_sq(x);
}

double MdsProblem::eval_h(const Vec& x) const {
    const std::size_t n = delta_.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * p_;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = x.data() + j * p_;
            double d = 0.0;
            for (std::size_t t = 0; t < p_; ++t) {
                const double diff = xi[t] - xj[t];
                d += diff * diff;
            }
            total += w_(i, j) * delta_(i, j) * std::sqrt(d);
        }
    }
    return total + 0.5 * rho_ * norm_sq(x);
}

Vec MdsProblem::grad_g(const Vec& x) const {
    const std::size_t n = delta_.rows();
    Vec g(n * p_, 0.0);
    // (V + rho I) X
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = laplacian_(i, j) + (i == j ? rho_ : 0.0);
            if (v == 0.0) continue;
            for (std::size_t t = 0; t < p_; ++t) g[i * p_ + t] += v * x[j * p_ + t];
        }
    return g;
}

Vec MdsProblem::subgrad_h(const Vec& x) const {
    const std::size_t n = delta_.rows();
    Vec u(n * p_);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < p_; ++t) u[i * p_ + t] = rho_ * x[i * p_ + t];
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * p_;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = x.data() + j * p_;
            double d = 0.0;
            for (std::size_t t = 0; t < p_; ++t) {
                const double diff = xi[t] - xj[t];
                d += diff * diff;
            }
            d = std::sqrt(d);
            if (d == 0.0) continue; // zero vector is a valid subgradient term
            const double scale = w_(i, j) * delta_(i, j) / d;
            for (std::size_t t = 0; t < p_; ++t) {
                const double diff = xi[t] - xj[t];
                u[i * p_ + t] += scale * diff;
                u[j * p_ + t] -= scale * diff;
            }
        }
    }
    return u;
}

Vec MdsProblem::solve_subproblem(const Vec& u) const {
    const std::size_t n = delta_.rows();
    Vec y(n * p_);
    Vec col(n);
    for (std::size_t t = 0; t < p_; ++t) {
        for (std::size_t i = 0; i < n; ++i) col[i] = u[i * p_ + t];
        solve_inplace(col);
        for (std::size_t i = 0; i < n; ++i) y[i * p_ + t] = col[i];
    }
    return y;
}

double MdsProblem::stress(const Matrix& X) const {
    return stress(X.flat());
}

double MdsProblem::stress(const Vec& x) const {
    const std::size_t n = delta_.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * p_;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = x.data() + j * p_;
            double d = 0.0;
            for (std::size_t t = 0; t < p_; ++t) {
                const double diff = xi[t] - xj[t];
                d += diff * diff;
            }
            const double gap = std::sqrt(d) - delta_(i, j);
            s += w_(i, j) * gap * gap;
        }
    }
    return s;
}

Matrix MdsProblem::unit_weight_subproblem(const Matrix& u, double rho) {
    const std::size_t n = u.rows(), p = u.cols();
    Matrix y(n, p);
    const double denom = static_cast<double>(n) + rho;
    for (std::size_t t = 0; t < p; ++t) {
        double col_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) col_sum += u(i, t);
        for (std::size_t i = 0; i < n; ++i)
            y(i, t) = (u(i, t) + col_sum / rho) / denom;
    }
    return y;
}

} // namespace dcopt

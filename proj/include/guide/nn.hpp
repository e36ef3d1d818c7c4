#pragma once

// Numerical kernel for the dual autoencoder: dense/sparse products, the
// activation and loss rules with their backward passes, Glorot init and Adam.
// Everything is double precision and single-threaded, so results are
// bit-reproducible for a given binary.

#include <guide/error.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace guide {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;
using Rng = std::mt19937_64;

namespace detail {

inline std::string shape_str(Eigen::Index r, Eigen::Index c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

template <typename A, typename B>
void check_inner(const A& a, const B& b, const char* op) {
    if (a.cols() != b.rows()) {
        throw ShapeError(std::string(op) + ": inner dimensions disagree (" +
                         shape_str(a.rows(), a.cols()) + " * " + shape_str(b.rows(), b.cols()) + ")");
    }
}

}  // namespace detail

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    detail::check_inner(a, b, "matmul");
    Matrix out(a.rows(), b.cols());
    out.noalias() = a * b;
    return out;
}

/// aᵀ·b without materializing the transpose.
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: row counts disagree (" + detail::shape_str(a.rows(), a.cols()) +
                         ", " + detail::shape_str(b.rows(), b.cols()) + ")");
    }
    Matrix out(a.cols(), b.cols());
    out.noalias() = a.transpose() * b;
    return out;
}

/// a·bᵀ without materializing the transpose.
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: column counts disagree (" + detail::shape_str(a.rows(), a.cols()) +
                         ", " + detail::shape_str(b.rows(), b.cols()) + ")");
    }
    Matrix out(a.rows(), b.rows());
    out.noalias() = a * b.transpose();
    return out;
}

/// Sparse-times-dense product; only stored entries of `s` are visited.
inline Matrix spmm(const SparseMatrix& s, const Matrix& b) {
    detail::check_inner(s, b, "spmm");
    Matrix out(s.rows(), b.cols());
    out.noalias() = s * b;
    return out;
}

/// sᵀ·b for a sparse `s`.
inline Matrix spmm_tn(const SparseMatrix& s, const Matrix& b) {
    if (s.rows() != b.rows()) {
        throw ShapeError("spmm_tn: row counts disagree (" + detail::shape_str(s.rows(), s.cols()) + ", " +
                         detail::shape_str(b.rows(), b.cols()) + ")");
    }
    Matrix out(s.cols(), b.cols());
    out.noalias() = s.transpose() * b;
    return out;
}

inline Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

/// Passes `upstream` where x > 0. The subgradient at x == 0 is 0.
inline Matrix relu_backward(const Matrix& x, const Matrix& upstream) {
    if (x.rows() != upstream.rows() || x.cols() != upstream.cols()) {
        throw ShapeError("relu_backward: shape mismatch");
    }
    return (x.array() > 0.0).select(upstream, 0.0);
}

/// Sum of squared entries, accumulated row by row in storage order.
inline double frobenius_sq(const Matrix& m) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) total += m.row(i).squaredNorm();
    return total;
}

inline Matrix frobenius_sq_grad(const Matrix& m) { return 2.0 * m; }

/// Uniform on ±sqrt(6 / (rows + cols)).
inline Matrix glorot_init(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    if (rows <= 0 || cols <= 0) throw ShapeError("glorot_init: dimensions must be positive");
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = dist(rng);
    return w;
}

struct Parameter {
    std::string name;
    Matrix value;
    Matrix grad;

    Parameter() = default;
    Parameter(std::string n, Matrix v)
        : name(std::move(n)), value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}

    void zero_grad() { grad.setZero(); }
};

struct AdamOptions {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamMoments {
    Matrix first;
    Matrix second;
};

/// Adam with bias correction. Moments are created lazily on the first step
/// and are matched to parameters by position.
class Adam {
public:
    explicit Adam(AdamOptions options = {}) : options_(options) {}

    const AdamOptions& options() const noexcept { return options_; }
    std::int64_t step_count() const noexcept { return step_; }
    const std::vector<AdamMoments>& moments() const noexcept { return moments_; }

    void restore(std::int64_t step, std::vector<AdamMoments> moments) {
        step_ = step;
        moments_ = std::move(moments);
    }

    /// Applies one update to every parameter, then zeroes the gradients.
    void step(std::span<Parameter* const> params) {
        for (const Parameter* p : params) {
            if (!p->grad.allFinite()) throw NumericError("adam: non-finite gradient in parameter '" + p->name + "'");
        }
        if (moments_.empty()) {
            moments_.reserve(params.size());
            for (const Parameter* p : params) {
                moments_.push_back({Matrix::Zero(p->value.rows(), p->value.cols()),
                                    Matrix::Zero(p->value.rows(), p->value.cols())});
            }
        }
        if (moments_.size() != params.size()) throw ShapeError("adam: parameter count changed between steps");

        ++step_;
        const double t = static_cast<double>(step_);
        const double c1 = 1.0 - std::pow(options_.beta1, t);
        const double c2 = 1.0 - std::pow(options_.beta2, t);
        for (std::size_t k = 0; k < params.size(); ++k) {
            Parameter& p = *params[k];
            AdamMoments& mom = moments_[k];
            if (mom.first.rows() != p.value.rows() || mom.first.cols() != p.value.cols()) {
                throw ShapeError("adam: moment shape mismatch for '" + p.name + "'");
            }
            mom.first = options_.beta1 * mom.first + (1.0 - options_.beta1) * p.grad;
            mom.second = options_.beta2 * mom.second + (1.0 - options_.beta2) * p.grad.cwiseAbs2();
            p.value.array() -= options_.lr * (mom.first.array() / c1) /
                               ((mom.second.array() / c2).sqrt() + options_.eps);
            p.zero_grad();
        }
    }

private:
    AdamOptions options_;
    std::int64_t step_ = 0;
    std::vector<AdamMoments> moments_;
};

}  // namespace guide

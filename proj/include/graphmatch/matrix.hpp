#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace gm {

// Dense n-by-n real matrix; the shared carrier for adjacency/distance
// matrices, iterates and weight matrices throughout the library.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Matrix& X) { return X.allFinite(); }

inline void require_square(const Matrix& X, const char* what) {
    if (X.rows() != X.cols() || X.rows() < 1) {
        throw std::invalid_argument(std::string(what) + ": expected a square matrix of order >= 1, got " +
                                    std::to_string(X.rows()) + "x" + std::to_string(X.cols()));
    }
}

inline void require_same_order(const Matrix& X, const Matrix& Y, const char* what) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch, " + std::to_string(X.rows()) + "x" +
                                    std::to_string(X.cols()) + " vs " + std::to_string(Y.rows()) + "x" +
                                    std::to_string(Y.cols()));
    }
}

// True iff every entry is >= -tol and every row sum and column sum lies
// within tol of 1.
inline bool is_doubly_stochastic(const Matrix& X, double tol) {
    if (X.rows() != X.cols() || X.rows() < 1) return false;
    if ((X.array() < -tol).any()) return false;
    if (((X.rowwise().sum().array() - 1.0).abs() > tol).any()) return false;
    if (((X.colwise().sum().array() - 1.0).abs() > tol).any()) return false;
    return true;
}

// Count of entries strictly greater than threshold; the operational ||X||_0.
inline int count_above(const Matrix& X, double threshold) {
    return static_cast<int>((X.array() > threshold).count());
}

inline Matrix uniform_barycenter(int n) { return Matrix::Constant(n, n, 1.0 / static_cast<double>(n)); }

inline double frobenius_distance(const Matrix& X, const Matrix& Y) { return (X - Y).norm(); }

}  // namespace gm

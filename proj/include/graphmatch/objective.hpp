#pragma once

#include <graphmatch/matrix.hpp>

namespace gm {

/// The matching objective f(X) = ||AX - XB||_F^2 for a fixed pair (A, B),
/// with precomputed Frobenius norms and the Lipschitz constant
/// L = 2*(||A||_F + ||B||_F)^2 of f on the doubly stochastic polytope.
/// All evaluations are pure and thread-safe.
class ObjectiveContext {
public:
    /// Throws std::invalid_argument unless A, B are square, same order,
    /// finite.
    ObjectiveContext(Matrix A, Matrix B);

    int order() const { return static_cast<int>(A_.rows()); }
    const Matrix& A() const { return A_; }
    const Matrix& B() const { return B_; }
    double norm_A() const { return norm_A_; }
    double norm_B() const { return norm_B_; }
    double lipschitz_constant() const { return lipschitz_; }

    /// f(X) = ||AX - XB||_F^2.
    double f(const Matrix& X) const;

    /// grad f(X) = 2*(A^T(AX - XB) - (AX - XB)B^T).
    Matrix grad_f(const Matrix& X) const;

    /// tr(A^T X B X^T), the quadratic-assignment form of the objective.
    double qap_objective(const Matrix& X) const;

    /// <A, X B X^T> = sum_ij A_ij (X B X^T)_ij, the alignment overlap.
    double overlap(const Matrix& X) const;

private:
    void check(const Matrix& X) const;

    Matrix A_;
    Matrix B_;
    double norm_A_;
    double norm_B_;
    double lipschitz_;
};

/// ||X - P||_F, the residual against a reference matrix.
inline double residual_fro(const Matrix& X, const Matrix& P) { return (X - P).norm(); }

}  // namespace gm

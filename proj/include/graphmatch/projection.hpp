#pragma once

#include <graphmatch/matrix.hpp>

#include <optional>

namespace gm {

/// Lagrange multipliers of the row-sum (y) and column-sum (z) constraints
/// of the projection QP, with the gradients of the dual objective and the
/// current combined step size.
struct DualState {
    Vector y;
    Vector z;
    Vector grad_y;
    Vector grad_z;
    double alpha = 0.01;
};

struct ProjectionResult {
    Matrix X;
    DualState dual;
    bool converged = true;
    int iterations = 0;
    double grad_norm = 0.0;
};

/// Dual objective theta(y, z) = 1/2 ||P+(C + y e^T + e z^T)||_F^2 - <y+z, e>,
/// where P+ clamps entrywise at zero.
double dual_value(const Matrix& C, const Vector& y, const Vector& z);

/// Gradient of the dual objective:
/// grad_y = P+(C + y e^T + e z^T) e - e, grad_z = P+(...)^T e - e.
void dual_gradient(const Matrix& C, const Vector& y, const Vector& z, Vector& grad_y, Vector& grad_z);
std::pair<Vector, Vector> dual_gradient(const Matrix& C, const Vector& y, const Vector& z);

/// Euclidean projection of C onto the doubly stochastic polytope by gradient
/// descent on the dual with per-block Barzilai-Borwein steps averaged into a
/// single rate (initial rate 0.01; a block whose s^T delta is <= 1e-16 falls
/// back to 0.01). Stops once ||(grad_y, grad_z)||_2 <= tol * sqrt(n) or after
/// max_iter iterations, in which case the lowest-gradient iterate seen is
/// returned with converged = false. The primal is recovered as
/// X = P+(C + y* e^T + e z*^T). Throws std::invalid_argument on non-finite C
/// and std::runtime_error if the dual iteration produces non-finite values.
ProjectionResult project_birkhoff(const Matrix& C, double tol = 1e-8, int max_iter = 50000,
                                  const DualState* warm_start = nullptr);

/// Independent reference projector: Dykstra-corrected alternating projection
/// between the affine subspace {Xe = e, X^T e = e} (closed form) and the
/// nonnegative orthant, iterated until successive sweeps and the gap between
/// the two half-projections fall below tol. Intended for tests and
/// cross-checks at small n; throws std::runtime_error on non-convergence.
Matrix project_birkhoff_oracle(const Matrix& C, double tol = 1e-10, int max_sweeps = 200000);

/// Projection helper for a single solve: reuses the previous call's dual
/// multipliers as the next warm start, which speeds up the near-identical
/// consecutive projections of a projected-gradient run. Not thread-safe;
/// one instance per solver run.
class BirkhoffProjector {
public:
    BirkhoffProjector(double tol, int max_iter) : tol_(tol), max_iter_(max_iter) {}

    ProjectionResult project(const Matrix& C);
    void reset() { warm_.reset(); }
    long total_dual_iterations() const { return total_iterations_; }

private:
    double tol_;
    int max_iter_;
    std::optional<DualState> warm_;
    long total_iterations_ = 0;
};

}  // namespace gm

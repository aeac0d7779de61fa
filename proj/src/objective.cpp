#include <graphmatch/objective.hpp>

#include <stdexcept>
#include <utility>

namespace gm {

ObjectiveContext::ObjectiveContext(Matrix A, Matrix B) : A_(std::move(A)), B_(std::move(B)) {
    require_square(A_, "ObjectiveContext.A");
    require_square(B_, "ObjectiveContext.B");
    require_same_order(A_, B_, "ObjectiveContext");
    if (!all_finite(A_) || !all_finite(B_)) throw std::invalid_argument("ObjectiveContext: non-finite entries");
    norm_A_ = A_.norm();
    norm_B_ = B_.norm();
    const double s = norm_A_ + norm_B_;
    lipschitz_ = 2.0 * s * s;
}

void ObjectiveContext::check(const Matrix& X) const { require_same_order(A_, X, "ObjectiveContext: X"); }

double ObjectiveContext::f(const Matrix& X) const {
    check(X);
    return (A_ * X - X * B_).squaredNorm();
}

Matrix ObjectiveContext::grad_f(const Matrix& X) const {
    check(X);
    const Matrix R = A_ * X - X * B_;
    return 2.0 * (A_.transpose() * R - R * B_.transpose());
}

double ObjectiveContext::qap_objective(const Matrix& X) const {
    check(X);
    return (A_.transpose() * X * B_ * X.transpose()).trace();
}

double ObjectiveContext::overlap(const Matrix& X) const {
    check(X);
    const Matrix M = X * B_ * X.transpose();
    return A_.cwiseProduct(M).sum();
}

}  // namespace gm

#include <graphmatch/projection.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>

namespace gm {

namespace {

// M = C + y e^T + e z^T, clamped at zero.
Matrix shifted_positive_part(const Matrix& C, const Vector& y, const Vector& z) {
    Matrix M = C;
    M.colwise() += y;
    M.rowwise() += z.transpose();
    return M.cwiseMax(0.0);
}

void check_dual_dims(const Matrix& C, const Vector& y, const Vector& z, const char* what) {
    require_square(C, what);
    if (y.size() != C.rows() || z.size() != C.rows())
        throw std::invalid_argument(std::string(what) + ": multiplier length does not match matrix order");
}

}  // namespace

double dual_value(const Matrix& C, const Vector& y, const Vector& z) {
    check_dual_dims(C, y, z, "dual_value");
    const Matrix Mp = shifted_positive_part(C, y, z);
    return 0.5 * Mp.squaredNorm() - (y.sum() + z.sum());
}

void dual_gradient(const Matrix& C, const Vector& y, const Vector& z, Vector& grad_y, Vector& grad_z) {
    check_dual_dims(C, y, z, "dual_gradient");
    const Matrix Mp = shifted_positive_part(C, y, z);
    grad_y = Mp.rowwise().sum().array() - 1.0;
    grad_z = Mp.colwise().sum().transpose().array() - 1.0;
}

std::pair<Vector, Vector> dual_gradient(const Matrix& C, const Vector& y, const Vector& z) {
    Vector gy, gz;
    dual_gradient(C, y, z, gy, gz);
    return {std::move(gy), std::move(gz)};
}

ProjectionResult project_birkhoff(const Matrix& C, double tol, int max_iter, const DualState* warm_start) {
    require_square(C, "project_birkhoff");
    if (!all_finite(C)) throw std::invalid_argument("project_birkhoff: non-finite input");
    if (!(tol > 0.0)) throw std::invalid_argument("project_birkhoff: tol must be > 0");

    const auto n = C.rows();
    const double stop = tol * std::sqrt(static_cast<double>(n));
    constexpr double kInitialRate = 0.01;
    constexpr double kCurvatureFloor = 1e-14;  // relative to ||s||^2; caps the BB ratio at 1e14

    Vector y = Vector::Zero(n);
    Vector z = Vector::Zero(n);
    double fallback_rate = kInitialRate;
    if (warm_start && warm_start->y.size() == n && warm_start->z.size() == n &&
        warm_start->y.allFinite() && warm_start->z.allFinite()) {
        y = warm_start->y;
        z = warm_start->z;
        // Resume at the previous run's accepted rate: near the old optimum
        // gradients are tiny and the fresh 0.01 rate would crawl while the
        // curvature history rebuilds.
        if (std::isfinite(warm_start->alpha) && warm_start->alpha > 0.0)
            fallback_rate = std::clamp(warm_start->alpha, kInitialRate, 1e6);
    }

    Matrix M(n, n), Mp(n, n), Mt(n, n), Mpt(n, n);
    Vector gy(n), gz(n), gyt(n), gzt(n), yt(n), zt(n);

    // Shifted matrix, its positive part and the dual gradients at (yy, zz).
    const auto eval_state = [&C](const Vector& yy, const Vector& zz, Matrix& shifted, Matrix& clamped, Vector& grad_row,
                                 Vector& grad_col) {
        shifted = C;
        shifted.colwise() += yy;
        shifted.rowwise() += zz.transpose();
        clamped = shifted.cwiseMax(0.0);
        grad_row = clamped.rowwise().sum().array() - 1.0;
        grad_col = clamped.colwise().sum().transpose().array() - 1.0;
    };

    eval_state(y, z, M, Mp, gy, gz);

    Vector prev_y = y, prev_z = z, prev_gy = gy, prev_gz = gz;
    bool have_prev = false;

    double best_norm = std::numeric_limits<double>::infinity();
    Vector best_y = y, best_z = z;
    double alpha = kInitialRate;

    // Dual value relative to the start, accumulated from the accepted
    // decrements, with the recent window for the nonmonotone safeguard.
    double theta_rel = 0.0;
    constexpr int kWindow = 10;
    std::deque<double> window{0.0};

    int it = 0;
    for (; it < max_iter; ++it) {
        const double gsq = gy.squaredNorm() + gz.squaredNorm();
        const double gnorm = std::sqrt(gsq);
        if (!std::isfinite(gnorm)) throw std::runtime_error("project_birkhoff: dual iteration diverged (non-finite)");
        if (gnorm < best_norm) {
            best_norm = gnorm;
            best_y = y;
            best_z = z;
        }
        if (gnorm <= stop) {
            DualState dual{y, z, gy, gz, alpha};
            return ProjectionResult{std::move(Mp), std::move(dual), true, it, gnorm};
        }

        // When a curvature pair is unmeasurable (s^T delta at or below the
        // floor, routine once gradients sit near rounding scale), reuse the
        // last accepted rate; the fixed initial rate can be orders of
        // magnitude off the local curvature and crawl.
        double alpha_y = fallback_rate;
        double alpha_z = fallback_rate;
        bool have_curvature = false;
        if (have_prev) {
            const Vector sy = y - prev_y;
            const Vector sz = z - prev_z;
            const double dy = sy.dot(gy - prev_gy);
            const double dz = sz.dot(gz - prev_gz);
            // The degeneracy test is relative: near the optimum both s and
            // delta shrink together and an absolute floor would discard
            // perfectly measurable curvature ratios.
            if (dy > kCurvatureFloor * sy.squaredNorm()) {
                alpha_y = sy.squaredNorm() / dy;
                have_curvature = true;
            }
            if (dz > kCurvatureFloor * sz.squaredNorm()) {
                alpha_z = sz.squaredNorm() / dz;
                have_curvature = true;
            }
        }
        if (!have_curvature) {
            // Every entry clamped: the dual is locally linear there and the
            // fixed fallback rate would crawl out one 0.01 at a time. Jump
            // far enough to reactivate the largest entry (10% margin); both
            // gradients are -e in that region so y and z each rise by alpha.
            const double max_m = M.maxCoeff();
            if (max_m < 0.0) alpha_y = alpha_z = std::max(kInitialRate, -0.55 * max_m);
        }
        double a = std::clamp(0.5 * (alpha_y + alpha_z), 1e-12, 1e8);

        // An unguarded step can cycle between the clamped region and a
        // near-empty active set when a low-curvature pair blows the step
        // up. Safeguard with a nonmonotone (GLL-window)
        // backtracking test so plain BB behavior survives its usual
        // transient spikes while catastrophic jumps get halved. The
        // decrement is evaluated in difference form,
        //   dtheta = 1/2 sum (Mp' - Mp) (Mp' + Mp) + a (sum gy + sum gz),
        // which stays accurate when the step (and so the change) is tiny.
        const double gsum = gy.sum() + gz.sum();
        const double ref = *std::max_element(window.begin(), window.end());
        bool accepted = false;
        double theta_rel_new = theta_rel;
        for (int j = 0; j <= 60; ++j) {
            yt = y - a * gy;
            zt = z - a * gz;
            eval_state(yt, zt, Mt, Mpt, gyt, gzt);
            const double dtheta = 0.5 * (Mpt - Mp).cwiseProduct(Mpt + Mp).sum() + a * gsum;
            theta_rel_new = theta_rel + dtheta;
            if (theta_rel_new <= ref - 1e-4 * a * gsq) {
                accepted = true;
                break;
            }
            a *= 0.5;
        }
        if (!accepted) break;  // no decrease at machine scale

        prev_y = y;
        prev_z = z;
        prev_gy = gy;
        prev_gz = gz;
        have_prev = true;
        y.swap(yt);
        z.swap(zt);
        M.swap(Mt);
        Mp.swap(Mpt);
        gy.swap(gyt);
        gz.swap(gzt);
        alpha = a;
        fallback_rate = std::max(a, kInitialRate);
        theta_rel = theta_rel_new;
        window.push_back(theta_rel);
        if (window.size() > kWindow) window.pop_front();
    }

    // Out of iterations (or stalled): report the lowest-gradient multipliers.
    Matrix X = shifted_positive_part(C, best_y, best_z);
    Vector bgy, bgz;
    dual_gradient(C, best_y, best_z, bgy, bgz);
    DualState dual{std::move(best_y), std::move(best_z), std::move(bgy), std::move(bgz), alpha};
    return ProjectionResult{std::move(X), std::move(dual), false, it, best_norm};
}

Matrix project_birkhoff_oracle(const Matrix& C, double tol, int max_sweeps) {
    require_square(C, "project_birkhoff_oracle");
    if (!all_finite(C)) throw std::invalid_argument("project_birkhoff_oracle: non-finite input");
    const auto n = C.rows();
    const double nd = static_cast<double>(n);

    // Closed-form projection onto the affine subspace {Xe = e, X^T e = e}.
    const auto project_affine = [&](const Matrix& X) -> Matrix {
        const Vector r = X.rowwise().sum();
        const Vector c = X.colwise().sum();
        const double total = r.sum();
        Matrix Y = X;
        Y.colwise() += (Vector::Ones(n) - r) / nd;
        Y.rowwise() += ((Vector::Ones(n) - c) / nd).transpose();
        Y.array() += (total - nd) / (nd * nd);
        return Y;
    };

    Matrix x = C;
    Matrix p = Matrix::Zero(n, n);
    Matrix q = Matrix::Zero(n, n);
    Matrix x_prev = x;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const Matrix y = project_affine(x + p);
        p = x + p - y;
        x = (y + q).cwiseMax(0.0);
        q = y + q - x;
        const double gap = (x - y).norm();
        const double change = (x - x_prev).norm();
        if (gap <= tol && change <= tol && sweep > 0) return x;
        x_prev = x;
    }
    throw std::runtime_error("project_birkhoff_oracle: no convergence within sweep limit");
}

ProjectionResult BirkhoffProjector::project(const Matrix& C) {
    ProjectionResult res = project_birkhoff(C, tol_, max_iter_, warm_ ? &*warm_ : nullptr);
    total_iterations_ += res.iterations;
    if (!res.converged && warm_) {
        // Stale multipliers can wedge the dual iteration on inputs that are
        // easy from a cold start; retry once without them.
        ProjectionResult cold = project_birkhoff(C, tol_, max_iter_, nullptr);
        total_iterations_ += cold.iterations;
        if (cold.converged || cold.grad_norm < res.grad_norm) res = std::move(cold);
    }
    warm_ = res.dual;
    return res;
}

}  // namespace gm

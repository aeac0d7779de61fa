#pragma once

#include <graphmatch/assignment.hpp>
#include <graphmatch/clock.hpp>
#include <graphmatch/config.hpp>
#include <graphmatch/instance.hpp>
#include <graphmatch/objective.hpp>
#include <graphmatch/projection.hpp>
#include <graphmatch/regularizers.hpp>
#include <graphmatch/trace.hpp>

#include <functional>
#include <string>
#include <vector>

namespace gm {

/// F(X) = f(X) + lambda * h(X), the regularized subproblem objective.
double reg_objective(const ObjectiveContext& ctx, const Matrix& X, const Regularizer& reg, double lambda);

/// Nonmonotone acceptance test: F_new <= C_ref + theta * step * gdotd,
/// where gdotd = <grad F, D> at the current iterate (nonpositive for a
/// projected-gradient direction).
bool nonmonotone_accept(double F_new, double C_ref, double theta, double step, double gdotd);

/// Reference-value recursion: Q' = eta*Q + 1,
/// C' = (eta*Q*C_ref + F_at_new_iterate) / Q'.
std::pair<double, double> update_reference(double C_ref, double Q, double F_at_new_iterate, double eta);

/// Projected-gradient search direction
/// D = Proj(X - alpha * grad F(X)) - X. Throws std::runtime_error if the
/// projection cannot reach an acceptably feasible point.
Matrix pg_direction(const ObjectiveContext& ctx, const Matrix& X, const Regularizer& reg, double lambda, double alpha,
                    BirkhoffProjector* projector = nullptr);

struct SubproblemResult {
    Matrix X;
    bool stalled = false;           // line search exhausted its backtracks
    bool budget_exhausted = false;  // stopped by the wall-clock budget
    int iterations = 0;             // accepted steps
    std::vector<double> objective_history;  // F at the start and after each accepted step
};

/// Called after each accepted inner step with the new iterate, f(X), the
/// regularized value F(X), and the 1-based step index.
using InnerStepFn = std::function<void(const Matrix&, double, double, int)>;

/// Minimizes F over the doubly stochastic polytope from feasible X0 by
/// projected gradient with spectral (Barzilai-Borwein) trial steps clamped
/// to [alpha_min, alpha_max] (first step 1/L) and the nonmonotone line
/// search above. Stops when ||X_i - X_{i-1}||_F / sqrt(n) <= tau_inner,
/// after max_inner accepted steps, on a line-search stall, or when the
/// budget runs out.
SubproblemResult solve_subproblem(const ObjectiveContext& ctx, const Matrix& X0, const Regularizer& reg, double lambda,
                                  const SolverConfig& cfg, BirkhoffProjector* projector = nullptr,
                                  SolveClock* clock = nullptr, const InnerStepFn& on_step = {});

enum class SolveStatus { ConvergedSparse, MaxOuterReached, TimeBudgetExhausted };
const char* to_string(SolveStatus s);

class SolveMonitor {
public:
    virtual ~SolveMonitor() = default;
    /// Receives every trace record together with the iterate it describes.
    virtual void on_record(const TraceRecord& rec, const Matrix& X) = 0;
    /// Return false to skip accumulating the in-memory SolveTrace.
    virtual bool want_trace() const { return true; }
};

struct SolveResult {
    Matrix X;               // final relaxed iterate
    Permutation rounded;    // assignment rounding of X
    SolveTrace trace;
    SolveStatus status = SolveStatus::ConvergedSparse;
    bool inner_stalled = false;
    double wall_time_s = 0.0;
    int outer_iterations = 0;
    long inner_iterations = 0;
    double final_objective = 0.0;    // f(X)
    double rounded_objective = 0.0;  // f of the rounded permutation matrix

    SolveResult() : rounded(Permutation::identity(1)) {}
};

/// The reweighted outer loop: starting from the uniform barycenter, repeat
///   - build this round's regularizer (linear: W = 1/(X + eps_k) from the
///     previous iterate; Lp: exponent p with offset eps_k; quartic),
///   - warm-start the projected-gradient subproblem at the previous iterate,
///   - update lambda <- min(lambda + gamma, lambda_max),
///     eps <- max(delta_eps * eps, eps_min),
/// until nnz(X) <= n + tau_sparsity, max_outer rounds, or the budget is
/// spent. Emits one trace record per inner iteration plus one at each
/// round's start; rounds the final iterate to a permutation.
SolveResult solve(const GraphMatchingInstance& inst, const SolverConfig& cfg, const RegularizerChoice& choice = {},
                  SolveMonitor* monitor = nullptr, SolveClock* clock = nullptr);

}  // namespace gm

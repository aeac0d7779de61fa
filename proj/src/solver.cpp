#include <graphmatch/solver.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace gm {

namespace {

void charge(SolveClock* clock, double seconds) {
    if (clock) clock->add_work(seconds);
}

bool budget_exceeded(const SolverConfig& cfg, const SolveClock* clock) {
    return cfg.time_budget_s > 0.0 && clock && clock->elapsed_s() >= cfg.time_budget_s;
}

Regularizer make_regularizer(const RegularizerChoice& choice, const Matrix& X, double epsilon) {
    switch (choice.kind) {
        case RegularizerKind::LinearReweighted:
            return Regularizer::linear_reweighted(weights_from_iterate(X, epsilon));
        case RegularizerKind::Lp:
            return Regularizer::lp(choice.p, epsilon);
        case RegularizerKind::Quartic:
            return Regularizer::quartic();
    }
    throw std::logic_error("make_regularizer: unreachable");
}

// Direction shared by pg_direction and the inner loop; reports the dual
// iteration count so callers can meter it.
Matrix projected_direction(const Matrix& X, const Matrix& grad, double alpha, BirkhoffProjector& projector,
                           long& dual_iters) {
    const ProjectionResult res = projector.project(X - alpha * grad);
    dual_iters = res.iterations;
    if (!res.converged && res.grad_norm > 1e-6)
        throw std::runtime_error("pg_direction: projection did not converge (dual gradient norm " +
                                 std::to_string(res.grad_norm) + ")");
    return res.X - X;
}

}  // namespace

double reg_objective(const ObjectiveContext& ctx, const Matrix& X, const Regularizer& reg, double lambda) {
    return ctx.f(X) + lambda * reg.value(X);
}

bool nonmonotone_accept(double F_new, double C_ref, double theta, double step, double gdotd) {
    return F_new <= C_ref + theta * step * gdotd;
}

std::pair<double, double> update_reference(double C_ref, double Q, double F_at_new_iterate, double eta) {
    const double Q_next = eta * Q + 1.0;
    const double C_next = (eta * Q * C_ref + F_at_new_iterate) / Q_next;
    return {C_next, Q_next};
}

Matrix pg_direction(const ObjectiveContext& ctx, const Matrix& X, const Regularizer& reg, double lambda, double alpha,
                    BirkhoffProjector* projector) {
    if (!(alpha > 0.0)) throw std::invalid_argument("pg_direction: alpha must be > 0");
    const Matrix grad = ctx.grad_f(X) + lambda * reg.gradient(X);
    long dual_iters = 0;
    if (projector) return projected_direction(X, grad, alpha, *projector, dual_iters);
    BirkhoffProjector local(1e-8, 50000);
    return projected_direction(X, grad, alpha, local, dual_iters);
}

SubproblemResult solve_subproblem(const ObjectiveContext& ctx, const Matrix& X0, const Regularizer& reg, double lambda,
                                  const SolverConfig& cfg, BirkhoffProjector* projector, SolveClock* clock,
                                  const InnerStepFn& on_step) {
    cfg.validate();
    require_same_order(ctx.A(), X0, "solve_subproblem: X0");
    if (!is_doubly_stochastic(X0, 1e-6)) throw std::invalid_argument("solve_subproblem: X0 is not feasible");

    const int n = ctx.order();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    BirkhoffProjector local_projector(cfg.proj_tol, cfg.proj_max_iter);
    BirkhoffProjector& proj = projector ? *projector : local_projector;

    const auto evaluate = [&](const Matrix& X) {
        const double fv = ctx.f(X);
        return std::tuple<double, double>(fv, fv + lambda * reg.value(X));
    };

    SubproblemResult out;
    Matrix X = X0;
    const double F_start = std::get<1>(evaluate(X));
    charge(clock, cost::gemm(n, 2) + cost::misc(n));
    double C_ref = F_start;
    double Q = 1.0;
    out.objective_history.push_back(F_start);

    const double L = ctx.lipschitz_constant();
    const double alpha_first = std::clamp(L > 0.0 ? 1.0 / L : 1.0, cfg.alpha_min, cfg.alpha_max);

    Matrix X_prev, G_prev;
    bool have_pair = false;

    for (int i = 0; i < cfg.max_inner; ++i) {
        if (budget_exceeded(cfg, clock)) {
            out.budget_exhausted = true;
            break;
        }

        const Matrix G = ctx.grad_f(X) + lambda * reg.gradient(X);
        charge(clock, cost::gemm(n, 4) + cost::misc(n));

        // Spectral trial step from the previous (s, delta) pair.
        double alpha = alpha_first;
        if (have_pair) {
            const double sts = (X - X_prev).squaredNorm();
            const double std_ = (X - X_prev).cwiseProduct(G - G_prev).sum();
            if (std_ > 0.0 && sts > 0.0) alpha = std::clamp(sts / std_, cfg.alpha_min, cfg.alpha_max);
        }
        // Keep the projection input within a few polytope diameters of the
        // iterate; past that the projected point no longer changes while the
        // badly scaled dual solve gets slow.
        const double g_inf = G.lpNorm<Eigen::Infinity>();
        if (g_inf > 0.0) alpha = std::min(alpha, std::max(cfg.alpha_min, 2.0 * static_cast<double>(n) / g_inf));

        long dual_iters = 0;
        const Matrix D = projected_direction(X, G, alpha, proj, dual_iters);
        charge(clock, cost::dual_iterations(n, dual_iters));

        // The projection satisfies <G, D> <= 0 up to its tolerance; clamp so
        // the acceptance threshold never rewards an ascent rounding.
        const double gdotd = std::min(G.cwiseProduct(D).sum(), 0.0);

        double step = 1.0;
        bool accepted = false;
        Matrix X_new;
        double f_new = 0.0, F_new = 0.0;
        for (int j = 0; j <= cfg.max_backtracks; ++j) {
            X_new = X + step * D;
            std::tie(f_new, F_new) = evaluate(X_new);
            charge(clock, cost::gemm(n, 2) + cost::misc(n));
            if (nonmonotone_accept(F_new, C_ref, cfg.theta, step, gdotd)) {
                accepted = true;
                break;
            }
            step *= cfg.delta_ls;
        }
        if (!accepted) {
            out.stalled = true;
            break;
        }

        const double move = (X_new - X).norm() / sqrt_n;
        X_prev = std::move(X);
        G_prev = G;
        have_pair = true;
        X = std::move(X_new);
        std::tie(C_ref, Q) = update_reference(C_ref, Q, F_new, cfg.eta);
        out.iterations = i + 1;
        out.objective_history.push_back(F_new);
        if (on_step) on_step(X, f_new, F_new, i + 1);
        if (move <= cfg.tau_inner) break;
    }

    out.X = std::move(X);
    return out;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ConvergedSparse: return "converged_sparse";
        case SolveStatus::MaxOuterReached: return "max_outer_reached";
        case SolveStatus::TimeBudgetExhausted: return "time_budget_exhausted";
    }
    return "unknown";
}

SolveResult solve(const GraphMatchingInstance& inst, const SolverConfig& cfg, const RegularizerChoice& choice,
                  SolveMonitor* monitor, SolveClock* clock) {
    cfg.validate();
    inst.validate();

    ObjectiveContext ctx(inst.A, inst.B);
    const int n = ctx.order();

    WallClock default_clock;
    SolveClock* clk = clock ? clock : &default_clock;
    clk->restart();

    std::optional<Matrix> P;
    if (inst.ground_truth) P = inst.ground_truth->to_matrix();

    SolveResult out;
    const bool want_trace = monitor ? monitor->want_trace() : true;

    double lambda = cfg.lambda0;
    double epsilon = cfg.epsilon0;
    Matrix X = uniform_barycenter(n);
    BirkhoffProjector projector(cfg.proj_tol, cfg.proj_max_iter);

    const auto emit = [&](int outer, int inner, const Matrix& Xe, double f_val, double F_val) {
        TraceRecord r;
        r.outer = outer;
        r.inner = inner;
        r.wall_time_s = clk->elapsed_s();
        r.objective = f_val;
        r.reg_objective = F_val;
        if (P) r.residual = residual_fro(Xe, *P);
        r.nnz = count_above(Xe, cfg.zero_threshold);
        r.lambda = lambda;
        r.epsilon = epsilon;
        charge(clk, cost::misc(n));
        if (want_trace) out.trace.records.push_back(r);
        if (monitor) monitor->on_record(r, Xe);
    };

    int k = 0;
    while (true) {
        if (count_above(X, cfg.zero_threshold) <= static_cast<double>(n) + cfg.tau_sparsity) {
            out.status = SolveStatus::ConvergedSparse;
            break;
        }
        if (k >= cfg.max_outer) {
            out.status = SolveStatus::MaxOuterReached;
            break;
        }
        if (budget_exceeded(cfg, clk)) {
            out.status = SolveStatus::TimeBudgetExhausted;
            break;
        }

        const Regularizer reg = make_regularizer(choice, X, epsilon);
        const double f0 = ctx.f(X);
        charge(clk, cost::gemm(n, 2) + cost::misc(n));
        emit(k, 0, X, f0, f0 + lambda * reg.value(X));

        SubproblemResult sub =
            solve_subproblem(ctx, X, reg, lambda, cfg, &projector, clk,
                             [&](const Matrix& Xi, double f_val, double F_val, int i) { emit(k, i, Xi, f_val, F_val); });
        X = std::move(sub.X);
        out.inner_iterations += sub.iterations;
        if (sub.stalled) out.inner_stalled = true;

        lambda = std::min(lambda + cfg.gamma, cfg.lambda_max);
        epsilon = std::max(cfg.delta_eps * epsilon, cfg.epsilon_min);
        ++k;
    }
    out.outer_iterations = k;

    if (out.trace.records.empty() && (want_trace || monitor)) {
        // Degenerate orders (n = 1) converge before the first round; still
        // record the initial state once.
        const Regularizer reg = make_regularizer(choice, X, epsilon);
        const double f0 = ctx.f(X);
        emit(0, 0, X, f0, f0 + lambda * reg.value(X));
    }

    out.X = std::move(X);
    out.rounded = round_to_permutation(out.X);
    out.final_objective = ctx.f(out.X);
    out.rounded_objective = ctx.f(out.rounded.to_matrix());
    out.wall_time_s = clk->elapsed_s();
    return out;
}

}  // namespace gm

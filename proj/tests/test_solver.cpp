#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <graphmatch/instances.hpp>
#include <graphmatch/oracle.hpp>
#include <graphmatch/solver.hpp>

#include "testutil.hpp"

#include <cmath>
#include <map>

using namespace gm;
using gmtest::rel_err;

TEST_CASE("nonmonotone acceptance rule") {
    CHECK(nonmonotone_accept(10.0, 10.0, 0.5, 1.0, 0.0));        // boundary
    CHECK_FALSE(nonmonotone_accept(11.0, 10.0, 0.5, 1.0, 0.0));  // above reference
    CHECK(nonmonotone_accept(9.89, 10.0, 0.1, 0.5, -2.0));       // threshold 9.9
    CHECK_FALSE(nonmonotone_accept(9.91, 10.0, 0.1, 0.5, -2.0));
}

TEST_CASE("reference value recursion") {
    SUBCASE("first update") {
        const double F0 = 4.0, F1 = 2.0;
        const auto [C1, Q1] = update_reference(F0, 1.0, F1, 0.85);
        CHECK(Q1 == doctest::Approx(1.85));
        CHECK(C1 == doctest::Approx((0.85 * F0 + F1) / 1.85));
    }
    SUBCASE("constant sequence is a fixed point") {
        double C = 7.5, Q = 1.0;
        for (int i = 0; i < 25; ++i) {
            std::tie(C, Q) = update_reference(C, Q, 7.5, 0.85);
            CHECK(C == doctest::Approx(7.5).epsilon(1e-14));
        }
    }
    SUBCASE("Q follows the geometric closed form") {
        const double eta = 0.85;
        double C = 1.0, Q = 1.0;
        double geom = 1.0;
        for (int i = 1; i <= 30; ++i) {
            std::tie(C, Q) = update_reference(C, Q, 1.0 / (1.0 + i), eta);
            geom = geom * eta + 1.0;  // sum_{j=0..i} eta^j
            CHECK(Q == doctest::Approx(geom).epsilon(1e-13));
        }
    }
}

TEST_CASE("regularized objective") {
    SplitMix64 rng(51);
    const int n = 3;
    const Matrix A = random_matrix(n, rng, -1, 1);
    const Matrix B = random_matrix(n, rng, -1, 1);
    ObjectiveContext ctx(A, B);
    const Matrix X = gmtest::random_doubly_stochastic(n, rng);

    SUBCASE("lambda zero reduces to f") {
        const Regularizer lin = Regularizer::linear_reweighted(Matrix::Ones(n, n));
        CHECK(reg_objective(ctx, X, lin, 0.0) == ctx.f(X));
    }
    SUBCASE("all-ones weights add lambda n on the polytope") {
        // the sample is feasible to the projector's 1e-9 tolerance
        const Regularizer lin = Regularizer::linear_reweighted(Matrix::Ones(n, n));
        CHECK(reg_objective(ctx, X, lin, 2.0) == doctest::Approx(ctx.f(X) + 2.0 * n).epsilon(1e-8));
    }
    SUBCASE("two-level weight sum at the identity") {
        ObjectiveContext same(A, A);
        const Matrix I = Matrix::Identity(n, n);
        const Regularizer lin = Regularizer::linear_reweighted(weights_from_iterate(I, 1.0));
        // f(I) = 0 and sum W.*I picks the n diagonal weights of 1/2
        CHECK(reg_objective(same, I, lin, 2.0) == doctest::Approx(static_cast<double>(n)).epsilon(1e-14));
    }
}

TEST_CASE("projected-gradient direction") {
    SplitMix64 rng(53);
    SUBCASE("zero at a stationary point") {
        const Matrix A = random_matrix(3, rng, -1, 1);
        ObjectiveContext ctx(A, A);
        const Regularizer lin = Regularizer::linear_reweighted(Matrix::Ones(3, 3));
        const Matrix D = pg_direction(ctx, Matrix::Identity(3, 3), lin, 0.0, 0.5);
        CHECK(D.norm() <= 1e-7);
    }
    SUBCASE("descent inequality holds on sampled iterates") {
        const Matrix A = random_matrix(5, rng, -2, 2);
        const Matrix B = random_matrix(5, rng, -2, 2);
        ObjectiveContext ctx(A, B);
        const Regularizer lin =
            Regularizer::linear_reweighted(weights_from_iterate(gmtest::random_doubly_stochastic(5, rng), 0.5));
        for (int trial = 0; trial < 100; ++trial) {
            const Matrix X = gmtest::random_doubly_stochastic(5, rng);
            const double alpha = std::pow(10.0, rng.next_double() * 4.0 - 3.0);
            const double lambda = rng.next_double();
            const Matrix G = ctx.grad_f(X) + lambda * lin.gradient(X);
            const Matrix D = pg_direction(ctx, X, lin, lambda, alpha);
            CHECK(G.cwiseProduct(D).sum() <= 1e-10);
        }
    }
    SUBCASE("alpha must be positive") {
        ObjectiveContext ctx(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
        CHECK_THROWS_AS(pg_direction(ctx, uniform_barycenter(2), Regularizer::quartic(), 1.0, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("subproblem drives toward a certified vertex under a large lambda") {
    // brute-force-certified instance; lambda above the equivalence threshold
    // with weights centered on the optimal vertex makes that vertex the
    // unique subproblem minimizer
    GeneratorSpec spec;
    spec.n = 4;
    spec.noise_scale = 0.0;
    spec.seed = 123;
    const GraphMatchingInstance inst = generate_instance(spec);
    ObjectiveContext ctx(inst.A, inst.B);
    const BruteForceResult brute = brute_force_match(ctx);
    CHECK(brute.best_value == 0.0);

    const Matrix P = brute.best.to_matrix();
    const Regularizer lin = Regularizer::linear_reweighted(weights_from_iterate(P, 1.0));
    const double lambda = lambda_threshold(0.0, 1.0, ctx.lipschitz_constant()) + 1.0;

    SolverConfig cfg;
    cfg.tau_inner = 1e-9;
    cfg.max_inner = 3000;
    const SubproblemResult sub = solve_subproblem(ctx, uniform_barycenter(4), lin, lambda, cfg);
    CHECK_FALSE(sub.stalled);
    CHECK((sub.X - P).norm() <= 1e-4);
}

TEST_CASE("subproblem reference value never drops below accepted objectives") {
    SplitMix64 rng(55);
    GeneratorSpec spec;
    spec.n = 5;
    spec.seed = 321;
    const GraphMatchingInstance inst = generate_instance(spec);
    ObjectiveContext ctx(inst.A, inst.B);
    const Regularizer lin = Regularizer::linear_reweighted(weights_from_iterate(uniform_barycenter(5), 1.0));

    SolverConfig cfg;
    cfg.max_inner = 200;
    const SubproblemResult sub = solve_subproblem(ctx, uniform_barycenter(5), lin, 0.5, cfg);
    REQUIRE(sub.objective_history.size() >= 2);
    // rebuild the C_ref recursion and re-check the necessary acceptance
    // condition F_i <= C_{i-1}
    double C = sub.objective_history.front(), Q = 1.0;
    for (std::size_t i = 1; i < sub.objective_history.size(); ++i) {
        const double Fi = sub.objective_history[i];
        CHECK(Fi <= C + 1e-9 * std::max(1.0, std::abs(C)));
        std::tie(C, Q) = update_reference(C, Q, Fi, cfg.eta);
    }
}

TEST_CASE("subproblem matches a long-run reference solve") {
    GeneratorSpec spec;
    spec.n = 3;
    spec.seed = 777;
    const GraphMatchingInstance inst = generate_instance(spec);
    ObjectiveContext ctx(inst.A, inst.B);
    const Regularizer lin = Regularizer::linear_reweighted(weights_from_iterate(uniform_barycenter(3), 1.0));
    const double lambda = 0.5;

    SolverConfig base;
    base.tau_inner = 1e-6;
    base.max_inner = 500;
    SolverConfig ref = base;
    ref.tau_inner = 1e-7;
    ref.max_inner = 5000;

    const SubproblemResult a = solve_subproblem(ctx, uniform_barycenter(3), lin, lambda, base);
    const SubproblemResult b = solve_subproblem(ctx, uniform_barycenter(3), lin, lambda, ref);
    const double Fa = reg_objective(ctx, a.X, lin, lambda);
    const double Fb = reg_objective(ctx, b.X, lin, lambda);
    CHECK(std::abs(Fa - Fb) <= 1e-6 * std::max(1.0, std::abs(Fb)));
}

TEST_CASE("subproblem flags a stall when the line search cannot move") {
    GeneratorSpec spec;
    spec.n = 4;
    spec.seed = 9;
    const GraphMatchingInstance inst = generate_instance(spec);
    ObjectiveContext ctx(inst.A, inst.B);
    const Regularizer lin = Regularizer::linear_reweighted(weights_from_iterate(uniform_barycenter(4), 1.0));

    SolverConfig cfg;
    cfg.max_backtracks = 0;
    cfg.theta = 1.0 - 1e-12;  // demands nearly the full linear decrease
    const SubproblemResult sub = solve_subproblem(ctx, uniform_barycenter(4), lin, 0.5, cfg);
    CHECK(sub.stalled);
    CHECK(sub.iterations == 0);
}

TEST_CASE("subproblem rejects an infeasible start") {
    ObjectiveContext ctx(Matrix::Identity(3, 3), Matrix::Identity(3, 3));
    const Regularizer lin = Regularizer::linear_reweighted(Matrix::Ones(3, 3));
    CHECK_THROWS_AS(solve_subproblem(ctx, Matrix::Ones(3, 3), lin, 1.0, SolverConfig{}), std::invalid_argument);
}

namespace {

// Records iterates so feasibility can be checked after the fact.
class FeasibilityMonitor final : public SolveMonitor {
public:
    void on_record(const TraceRecord& rec, const Matrix& X) override {
        linter.feed(rec, &X);
    }
    TraceLinter linter{1e-6};
};

}  // namespace

TEST_CASE("solve recovers a noiseless instance exactly") {
    GeneratorSpec spec;
    spec.n = 10;
    spec.noise_scale = 0.0;
    spec.seed = 2024;
    const GraphMatchingInstance inst = generate_instance(spec);

    FeasibilityMonitor monitor;
    const SolveResult res = solve(inst, SolverConfig{}, RegularizerChoice{}, &monitor);

    CHECK(res.status == SolveStatus::ConvergedSparse);
    CHECK(res.rounded == *inst.ground_truth);
    CHECK(res.rounded_objective == 0.0);
    CHECK(monitor.linter.ok());
    REQUIRE_FALSE(res.trace.empty());

    // schedules move the right way and the iterates stay feasible
    for (std::size_t i = 1; i < res.trace.records.size(); ++i) {
        CHECK(res.trace.records[i].lambda >= res.trace.records[i - 1].lambda);
        CHECK(res.trace.records[i].epsilon <= res.trace.records[i - 1].epsilon);
        CHECK(res.trace.records[i].wall_time_s >= res.trace.records[i - 1].wall_time_s);
    }
    // first record is the uniform start under the initial schedule
    const TraceRecord& first = res.trace.records.front();
    CHECK(first.outer == 0);
    CHECK(first.inner == 0);
    CHECK(first.nnz == 100);
    CHECK(first.lambda == doctest::Approx(0.01));
    CHECK(first.epsilon == doctest::Approx(1.0));
    // final iterate is sparse
    CHECK(res.trace.records.back().nnz <= 10);
}

TEST_CASE("solve handles the two-vertex tie") {
    // f is constant on the whole 2x2 polytope here and reweighting cannot
    // break the symmetry, so the relaxed iterate stays at the barycenter;
    // the rounded output must still be an optimal permutation.
    Matrix A(2, 2);
    A << 0, 1, 1, 0;
    GraphMatchingInstance inst;
    inst.A = A;
    inst.B = A;
    SolverConfig cfg;
    cfg.max_outer = 10;
    const SolveResult res = solve(inst, cfg);
    CHECK(res.rounded.size() == 2);
    CHECK(res.rounded_objective == 0.0);
}

TEST_CASE("solve on the degenerate order-one instance") {
    GraphMatchingInstance inst;
    inst.A = Matrix::Constant(1, 1, 3.0);
    inst.B = Matrix::Constant(1, 1, 5.0);
    const SolveResult res = solve(inst, SolverConfig{});
    CHECK(res.status == SolveStatus::ConvergedSparse);
    CHECK(res.rounded.size() == 1);
    CHECK(res.final_objective == doctest::Approx(4.0));
    CHECK_FALSE(res.trace.empty());
}

TEST_CASE("solve propagates inner stalls without failing") {
    GeneratorSpec spec;
    spec.n = 5;
    spec.seed = 333;
    const GraphMatchingInstance inst = generate_instance(spec);
    SolverConfig cfg;
    cfg.max_backtracks = 0;
    cfg.theta = 1.0 - 1e-12;
    cfg.max_outer = 3;
    const SolveResult res = solve(inst, cfg);
    CHECK(res.inner_stalled);
    CHECK(res.status == SolveStatus::MaxOuterReached);
}

TEST_CASE("deterministic clock makes traces reproducible") {
    GeneratorSpec spec;
    spec.n = 6;
    spec.seed = 11;
    const GraphMatchingInstance inst = generate_instance(spec);
    DeterministicClock c1, c2;
    const SolveResult r1 = solve(inst, SolverConfig{}, RegularizerChoice{}, nullptr, &c1);
    const SolveResult r2 = solve(inst, SolverConfig{}, RegularizerChoice{}, nullptr, &c2);
    REQUIRE(r1.trace.size() == r2.trace.size());
    for (std::size_t i = 0; i < r1.trace.size(); ++i) {
        CHECK(r1.trace.records[i].wall_time_s == r2.trace.records[i].wall_time_s);
        CHECK(r1.trace.records[i].objective == r2.trace.records[i].objective);
    }
}

TEST_CASE("time budget cuts a solve short") {
    GeneratorSpec spec;
    spec.n = 12;
    spec.seed = 4;
    const GraphMatchingInstance inst = generate_instance(spec);
    SolverConfig cfg;
    cfg.time_budget_s = 1e-4;  // a few inner iterations of metered work
    DeterministicClock clock;
    const SolveResult res = solve(inst, cfg, RegularizerChoice{}, nullptr, &clock);
    CHECK(res.status == SolveStatus::TimeBudgetExhausted);
}

TEST_CASE("lemma: positive and negative parts balance on the polytope") {
    // the 1e-10 identity tolerance needs samples far more feasible than
    // the default projection tolerance, so project tighter here
    SplitMix64 rng(57);
    const auto sample = [&rng](int n) { return project_birkhoff(random_matrix(n, rng, -0.5, 1.5), 1e-12, 400000).X; };
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(6));
        const Matrix X = sample(n);
        const Matrix Y = sample(n);
        const Matrix D = X - Y;
        const double pos = D.cwiseMax(0.0).sum();
        const double neg = D.cwiseMin(0.0).sum();
        const double abs_sum = D.cwiseAbs().sum();
        CHECK(std::abs(pos + neg) <= 1e-10);
        CHECK(std::abs(pos - 0.5 * abs_sum) <= 1e-10);
    }
}

TEST_CASE("round_to_permutation") {
    SUBCASE("permutation matrices map to themselves") {
        SplitMix64 rng(59);
        for (int trial = 0; trial < 10; ++trial) {
            const Permutation p = random_permutation(6, rng);
            CHECK(round_to_permutation(p.to_matrix()) == p);
        }
    }
    SUBCASE("total tie resolves to the identity") {
        CHECK(round_to_permutation(uniform_barycenter(4)) == Permutation::identity(4));
    }
    SUBCASE("dominant diagonal") {
        Matrix X(2, 2);
        X << 0.9, 0.1, 0.1, 0.9;
        CHECK(round_to_permutation(X) == Permutation::identity(2));
    }
    SUBCASE("off-diagonal dominance") {
        Matrix X(2, 2);
        X << 0.1, 0.9, 0.9, 0.1;
        CHECK(round_to_permutation(X) == Permutation({1, 0}));
    }
    SUBCASE("deterministic on repeated input") {
        SplitMix64 rng(61);
        const Matrix X = gmtest::random_doubly_stochastic(7, rng);
        CHECK(round_to_permutation(X) == round_to_permutation(X));
    }
    SUBCASE("rejects clearly negative entries") {
        Matrix X = uniform_barycenter(3);
        X(0, 0) = -1e-3;
        CHECK_THROWS_AS(round_to_permutation(X), std::invalid_argument);
    }
    SUBCASE("maximizes the supported weight against brute force") {
        SplitMix64 rng(63);
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix X = gmtest::random_doubly_stochastic(5, rng);
            const Permutation p = round_to_permutation(X);
            double best = -1.0;
            std::vector<int> map{0, 1, 2, 3, 4};
            do {
                double s = 0;
                for (int i = 0; i < 5; ++i) s += X(i, map[static_cast<std::size_t>(i)]);
                best = std::max(best, s);
            } while (std::next_permutation(map.begin(), map.end()));
            double got = 0;
            for (int i = 0; i < 5; ++i) got += X(i, p(i));
            CHECK(got == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

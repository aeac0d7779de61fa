#pragma once

#include <graphmatch/objective.hpp>
#include <graphmatch/permutation.hpp>

#include <cstdint>

namespace gm {

struct BruteForceResult {
    Permutation best;
    double best_value = 0.0;
    std::uint64_t num_evaluated = 0;
};

/// Exhaustive minimization of f over all n! permutations (n <= 9; throws
/// std::invalid_argument beyond that). Ties go to the lexicographically
/// smallest map. best_value is f evaluated through the same code path as
/// ObjectiveContext::f on the winning permutation matrix.
BruteForceResult brute_force_match(const ObjectiveContext& ctx);

struct Theorem1Report {
    bool pass = false;
    double threshold = 0.0;        // smallest certified lambda for (a, epsilon, L)
    double objective_at_star = 0.0;  // regularized value F at the candidate vertex
    double min_gap = 0.0;          // min over evaluated points of F(Y) - F(X*)
    int vertices_evaluated = 0;
    int interior_evaluated = 0;
};

/// Single-step equivalence certificate: with the reweighting taken at a
/// synthetic iterate X^(k) at Frobenius distance `a` from the candidate
/// vertex X* (X^(k) = X* when a = 0, otherwise the point at distance a on
/// the segment from X* toward the uniform barycenter), checks that X*
/// minimizes F(X) = f(X) + lambda * sum_ij X_ij / (X^(k)_ij + epsilon)
/// over every vertex (all n! when n <= 7, `samples` random vertices
/// otherwise) and `samples` random projected points of the polytope,
/// within 1e-9. Requires a in [0, 1/2) and lambda >= the certified
/// threshold; pass enforce_hypothesis = false to evaluate outside the
/// certified regime (negative controls).
Theorem1Report verify_theorem1(const ObjectiveContext& ctx, const Permutation& x_star, double a, double epsilon,
                               double lambda, int samples, std::uint64_t seed, bool enforce_hypothesis = true);

}  // namespace gm

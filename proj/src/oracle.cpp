#include <graphmatch/oracle.hpp>

#include <graphmatch/projection.hpp>
#include <graphmatch/random.hpp>
#include <graphmatch/regularizers.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gm {

BruteForceResult brute_force_match(const ObjectiveContext& ctx) {
    const int n = ctx.order();
    if (n > 9) throw std::invalid_argument("brute_force_match: refused for n > 9 (enumeration bound)");

    std::vector<int> map(static_cast<std::size_t>(n));
    std::iota(map.begin(), map.end(), 0);

    std::vector<int> best_map = map;
    double best_value = std::numeric_limits<double>::infinity();
    std::uint64_t evaluated = 0;

    Matrix P = Matrix::Zero(n, n);
    do {
        P.setZero();
        for (int i = 0; i < n; ++i) P(i, map[static_cast<std::size_t>(i)]) = 1.0;
        const double value = ctx.f(P);
        ++evaluated;
        // next_permutation enumerates in lexicographic order, so a strict
        // improvement test breaks ties toward the smallest map.
        if (value < best_value) {
            best_value = value;
            best_map = map;
        }
    } while (std::next_permutation(map.begin(), map.end()));

    return BruteForceResult{Permutation(std::move(best_map)), best_value, evaluated};
}

namespace {

// Feasible sample: Euclidean projection of a matrix with entries uniform
// in [-0.5, 1.5).
Matrix random_polytope_point(int n, SplitMix64& rng) {
    const Matrix C = random_matrix(n, rng, -0.5, 1.5);
    return project_birkhoff(C, 1e-9, 100000).X;
}

}  // namespace

Theorem1Report verify_theorem1(const ObjectiveContext& ctx, const Permutation& x_star, double a, double epsilon,
                               double lambda, int samples, std::uint64_t seed, bool enforce_hypothesis) {
    const int n = ctx.order();
    if (x_star.size() != n) throw std::invalid_argument("verify_theorem1: permutation order mismatch");
    if (!(a >= 0.0 && a < 0.5)) throw std::invalid_argument("verify_theorem1: a must lie in [0, 1/2)");
    if (samples < 0) throw std::invalid_argument("verify_theorem1: samples must be >= 0");

    const double threshold = lambda_threshold(a, epsilon, ctx.lipschitz_constant());
    if (enforce_hypothesis && lambda < threshold)
        throw std::invalid_argument("verify_theorem1: lambda " + std::to_string(lambda) +
                                    " is below the certified threshold " + std::to_string(threshold));

    const Matrix star = x_star.to_matrix();

    // Synthetic previous iterate at distance exactly a from the vertex.
    Matrix iterate = star;
    if (a > 0.0) {
        const Matrix U = uniform_barycenter(n);
        const double span = (U - star).norm();
        if (!(span > 0.0)) throw std::invalid_argument("verify_theorem1: degenerate polytope (n too small for a > 0)");
        const double t = a / span;
        if (t > 1.0) throw std::invalid_argument("verify_theorem1: a exceeds the distance to the barycenter");
        iterate = (1.0 - t) * star + t * U;
    }

    const Matrix W = weights_from_iterate(iterate, epsilon);
    const auto F = [&](const Matrix& X) { return ctx.f(X) + lambda * W.cwiseProduct(X).sum(); };

    Theorem1Report report;
    report.threshold = threshold;
    report.objective_at_star = F(star);

    double min_gap = std::numeric_limits<double>::infinity();
    SplitMix64 rng(seed);

    if (n <= 7) {
        std::vector<int> map(static_cast<std::size_t>(n));
        std::iota(map.begin(), map.end(), 0);
        Matrix P = Matrix::Zero(n, n);
        do {
            P.setZero();
            for (int i = 0; i < n; ++i) P(i, map[static_cast<std::size_t>(i)]) = 1.0;
            if (map == x_star.map()) continue;
            min_gap = std::min(min_gap, F(P) - report.objective_at_star);
            ++report.vertices_evaluated;
        } while (std::next_permutation(map.begin(), map.end()));
    } else {
        for (int s = 0; s < samples; ++s) {
            const Permutation p = random_permutation(n, rng);
            if (p == x_star) continue;
            min_gap = std::min(min_gap, F(p.to_matrix()) - report.objective_at_star);
            ++report.vertices_evaluated;
        }
    }

    for (int s = 0; s < samples; ++s) {
        const Matrix Y = random_polytope_point(n, rng);
        min_gap = std::min(min_gap, F(Y) - report.objective_at_star);
        ++report.interior_evaluated;
    }

    report.min_gap = min_gap;
    report.pass = min_gap >= -1e-9;
    return report;
}

}  // namespace gm

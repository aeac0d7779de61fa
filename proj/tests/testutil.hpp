#pragma once

#include <graphmatch/matrix.hpp>
#include <graphmatch/projection.hpp>
#include <graphmatch/random.hpp>

#include <cmath>

namespace gmtest {

inline double rel_err(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) / scale;
}

// Central finite difference of a scalar function along direction D.
template <typename Fn>
double central_difference(Fn&& fn, const gm::Matrix& X, const gm::Matrix& D, double h) {
    return (fn(X + h * D) - fn(X - h * D)) / (2.0 * h);
}

inline gm::Matrix random_symmetric(int n, gm::SplitMix64& rng, double lo, double hi) {
    gm::Matrix M = gm::random_matrix(n, rng, lo, hi);
    gm::Matrix S = 0.5 * (M + M.transpose());
    return S;
}

// Random point of the doubly stochastic polytope (projection of a random
// matrix; may touch the boundary).
inline gm::Matrix random_doubly_stochastic(int n, gm::SplitMix64& rng) {
    return gm::project_birkhoff(gm::random_matrix(n, rng, -0.5, 1.5), 1e-9, 200000).X;
}

// Strictly positive polytope point: a projected sample pulled toward the
// barycenter.
inline gm::Matrix random_interior_point(int n, gm::SplitMix64& rng) {
    return 0.7 * random_doubly_stochastic(n, rng) + 0.3 * gm::uniform_barycenter(n);
}

}  // namespace gmtest

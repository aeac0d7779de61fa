#pragma once

#include <graphmatch/matrix.hpp>
#include <graphmatch/permutation.hpp>

namespace gm {

/// Exact maximum-weight perfect assignment on a dense score matrix:
/// returns the permutation maximizing sum_i score(i, p(i)). Shortest
/// augmenting path (Jonker-Volgenant style), O(n^3); rows are augmented in
/// index order and ties are resolved toward the lowest column index, so the
/// result is deterministic given the matrix.
Permutation max_weight_assignment(const Matrix& score);

/// Rounds a (near-)doubly-stochastic iterate to the permutation with
/// maximum total supported weight. Requires entries >= -1e-9.
Permutation round_to_permutation(const Matrix& X);

}  // namespace gm

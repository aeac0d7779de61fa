#pragma once

#include <graphmatch/matrix.hpp>
#include <graphmatch/random.hpp>

#include <vector>

namespace gm {

/// A bijection on {0..n-1} in vector form: map()[i] is the column assigned
/// to row i. The matrix form has a 1 at (i, map()[i]) and 0 elsewhere.
class Permutation {
public:
    /// Throws std::invalid_argument unless `map` is a bijection on {0..n-1}.
    explicit Permutation(std::vector<int> map);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& map() const { return map_; }

    Matrix to_matrix() const;
    Permutation inverse() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> map_;
};

/// Uniformly random permutation via Fisher-Yates: for i = n-1 down to 1,
/// swap positions i and rng.next_below(i+1).
Permutation random_permutation(int n, SplitMix64& rng);

}  // namespace gm

#include <graphmatch/permutation.hpp>

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace gm {

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
    const int n = static_cast<int>(map_.size());
    if (n < 1) throw std::invalid_argument("Permutation: empty map");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : map_) {
        if (v < 0 || v >= n) throw std::invalid_argument("Permutation: index " + std::to_string(v) + " out of range");
        if (seen[static_cast<std::size_t>(v)]) throw std::invalid_argument("Permutation: duplicate image " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

Matrix Permutation::to_matrix() const {
    const int n = size();
    Matrix P = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) P(i, map_[static_cast<std::size_t>(i)]) = 1.0;
    return P;
}

Permutation Permutation::inverse() const {
    const int n = size();
    std::vector<int> inv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(map_[static_cast<std::size_t>(i)])] = i;
    return Permutation(std::move(inv));
}

Permutation random_permutation(int n, SplitMix64& rng) {
    std::vector<int> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    for (int i = n - 1; i >= 1; --i) {
        const auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(m[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(j)]);
    }
    return Permutation(std::move(m));
}

}  // namespace gm

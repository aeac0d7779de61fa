#pragma once

#include <graphmatch/matrix.hpp>

#include <cstdint>
#include <limits>

namespace gm {

/// SplitMix64 generator (Steele, Lea & Vigna). Chosen because its output
/// stream is fully specified by the seed and a handful of integer ops, so
/// instances regenerate bit-for-bit on any platform. Doubles are produced
/// from the top 53 bits, bounded integers by rejection sampling; both
/// conventions are part of the file-format contract for seeded generation.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1): top 53 bits scaled by 2^-53.
    double next_double() { return static_cast<double>(operator()() >> 11) * 0x1.0p-53; }

    /// Uniform double in [0, scale).
    double next_double(double scale) { return next_double() * scale; }

    /// Uniform integer in [0, bound), unbiased (rejection on the top range).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x = operator()();
        while (x >= limit) x = operator()();
        return x % bound;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed for sub-task `index` from `base`.
/// Defined as the SplitMix64 output function applied to
/// base XOR (index+1)*0x9E3779B97F4A7C15; constant-time and documented so
/// other implementations can reproduce per-instance seeds.
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base ^ ((index + 1) * 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// n-by-n matrix with i.i.d. entries uniform in [lo, hi), filled row by row.
inline Matrix random_matrix(int n, SplitMix64& rng, double lo, double hi) {
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = lo + rng.next_double() * (hi - lo);
    return M;
}

}  // namespace gm

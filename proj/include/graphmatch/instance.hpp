#pragma once

#include <graphmatch/matrix.hpp>
#include <graphmatch/permutation.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gm {

/// Raised when a byte stream cannot be decoded; `position()` is the byte
/// offset at which decoding failed (0 when unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position) : std::runtime_error(message), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Raised when a file cannot be opened, read, or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matching problem: two same-order matrices plus optional generation
/// metadata. When `ground_truth` is present, matching row i of A to column
/// ground_truth(i) of B is the intended solution.
struct GraphMatchingInstance {
    Matrix A;
    Matrix B;
    std::optional<Permutation> ground_truth;
    std::optional<std::int64_t> seed;
    std::optional<double> noise_scale;

    int order() const { return static_cast<int>(A.rows()); }

    /// Throws std::invalid_argument on shape mismatch or non-finite entries.
    void validate() const;
};

bool operator==(const GraphMatchingInstance& a, const GraphMatchingInstance& b);

/// JSON object {"n": int, "A": [n*n reals row-major], "B": [...],
/// "ground_truth": [ints] | null, "seed": int | null,
/// "noise_scale": real | null}. Matrix entries are written row-major with
/// shortest round-trip number formatting, so serialize/deserialize is the
/// identity on every field, bit-exact for entries.
std::string serialize_instance(const GraphMatchingInstance& inst);

/// Throws ParseError (with byte position) on malformed input and
/// std::invalid_argument on structurally valid but inconsistent content.
GraphMatchingInstance deserialize_instance(std::string_view text);

void save_instance(const GraphMatchingInstance& inst, const std::filesystem::path& path);
GraphMatchingInstance load_instance(const std::filesystem::path& path);

}  // namespace gm

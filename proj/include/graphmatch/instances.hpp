#pragma once

#include <graphmatch/instance.hpp>
#include <graphmatch/matrix.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace gm {

/// Synthetic-instance recipe: n random 2D points uniform on
/// [0, point_scale)^2 give the pairwise-distance matrix A; a uniformly
/// random permutation g relabels it; n noise points uniform on
/// [0, noise_scale)^2 give a perturbation distance matrix C; and
/// B_ij = A_{g^-1(i), g^-1(j)} + C_ij, so matching row i of A to column
/// g(i) of B is exact up to the noise (with noise_scale = 0 the match
/// objective at g is exactly zero).
struct GeneratorSpec {
    int n = 2;
    double point_scale = 10.0;
    double noise_scale = 0.5;
    std::int64_t seed = 0;

    void validate() const;
};

/// Deterministic given the seed: draws, in order, the n base points
/// (x then y each), the Fisher-Yates permutation, then the n noise points,
/// all from one SplitMix64 stream.
GraphMatchingInstance generate_instance(const GeneratorSpec& spec);

/// Undirected simple graph as an edge list (optional weights, default 1).
struct Graph {
    struct Edge {
        int u = 0;
        int v = 0;
        double w = 1.0;
    };

    int n_vertices = 0;
    std::vector<Edge> edges;

    /// Throws std::invalid_argument on self-loops or out-of-range indices.
    void validate() const;
};

/// Text format: one "u v [w]" edge per line, 0-indexed; '#' starts a
/// comment; blank lines ignored. Vertex count is 1 + the largest index.
Graph parse_edge_list(std::istream& in);

/// Hop-count distances by breadth-first search from every vertex; 0 on the
/// diagonal, symmetric. Pairs in different components get the sentinel n
/// (one more than any possible path length).
Matrix bfs_distance_matrix(const Graph& g);

}  // namespace gm

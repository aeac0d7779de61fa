#include <graphmatch/instances.hpp>

#include <graphmatch/permutation.hpp>
#include <graphmatch/random.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gm {

void GeneratorSpec::validate() const {
    if (n < 2) throw std::invalid_argument("GeneratorSpec: n must be >= 2");
    if (!(point_scale > 0.0)) throw std::invalid_argument("GeneratorSpec: point_scale must be > 0");
    if (!(noise_scale >= 0.0)) throw std::invalid_argument("GeneratorSpec: noise_scale must be >= 0");
}

namespace {

// Pairwise Euclidean distances of n points drawn uniformly on [0, scale)^2.
Matrix distance_matrix_from_points(int n, double scale, SplitMix64& rng) {
    std::vector<double> px(static_cast<std::size_t>(n)), py(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        px[static_cast<std::size_t>(i)] = rng.next_double(scale);
        py[static_cast<std::size_t>(i)] = rng.next_double(scale);
    }
    Matrix D = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = px[static_cast<std::size_t>(i)] - px[static_cast<std::size_t>(j)];
            const double dy = py[static_cast<std::size_t>(i)] - py[static_cast<std::size_t>(j)];
            const double d = std::sqrt(dx * dx + dy * dy);
            D(i, j) = d;
            D(j, i) = d;
        }
    }
    return D;
}

}  // namespace

GraphMatchingInstance generate_instance(const GeneratorSpec& spec) {
    spec.validate();
    SplitMix64 rng(static_cast<std::uint64_t>(spec.seed));

    const Matrix A = distance_matrix_from_points(spec.n, spec.point_scale, rng);
    const Permutation g = random_permutation(spec.n, rng);
    const Matrix C = distance_matrix_from_points(spec.n, spec.noise_scale, rng);

    // B = A conjugated by the ground-truth permutation, plus noise:
    // B_ij = A_{g^-1(i), g^-1(j)} + C_ij, built by index so the noiseless
    // case is an exact relabeling.
    const Permutation ginv = g.inverse();
    Matrix B(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) B(i, j) = A(ginv(i), ginv(j)) + C(i, j);

    GraphMatchingInstance inst;
    inst.A = A;
    inst.B = std::move(B);
    inst.ground_truth = g;
    inst.seed = spec.seed;
    inst.noise_scale = spec.noise_scale;
    inst.validate();
    return inst;
}

void Graph::validate() const {
    if (n_vertices < 1) throw std::invalid_argument("Graph: must have at least one vertex");
    for (const auto& e : edges) {
        if (e.u < 0 || e.u >= n_vertices || e.v < 0 || e.v >= n_vertices)
            throw std::invalid_argument("Graph: edge index out of range");
        if (e.u == e.v) throw std::invalid_argument("Graph: self-loops are not allowed");
    }
}

Graph parse_edge_list(std::istream& in) {
    Graph g;
    std::string line;
    std::size_t line_no = 0;
    int max_vertex = -1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int u, v;
        if (!(ls >> u)) continue;  // blank or comment-only line
        double w = 1.0;
        if (!(ls >> v)) throw ParseError("edge list: missing second endpoint on line " + std::to_string(line_no), line_no);
        ls >> w;
        std::string rest;
        if (ls >> rest) throw ParseError("edge list: trailing tokens on line " + std::to_string(line_no), line_no);
        if (u < 0 || v < 0) throw ParseError("edge list: negative vertex index on line " + std::to_string(line_no), line_no);
        g.edges.push_back({u, v, w});
        max_vertex = std::max({max_vertex, u, v});
    }
    g.n_vertices = max_vertex + 1;
    g.validate();
    return g;
}

Matrix bfs_distance_matrix(const Graph& g) {
    g.validate();
    const int n = g.n_vertices;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : g.edges) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }

    Matrix D = Matrix::Constant(n, n, static_cast<double>(n));  // disconnected sentinel
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[static_cast<std::size_t>(s)] = 0;
        queue.assign(1, s);
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (dist[static_cast<std::size_t>(v)] < 0) {
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue.push_back(v);
                }
            }
        }
        for (int t = 0; t < n; ++t)
            if (dist[static_cast<std::size_t>(t)] >= 0) D(s, t) = dist[static_cast<std::size_t>(t)];
    }
    return D;
}

}  // namespace gm

#include <graphmatch/assignment.hpp>

#include <limits>
#include <stdexcept>
#include <vector>

namespace gm {

Permutation max_weight_assignment(const Matrix& score) {
    require_square(score, "max_weight_assignment");
    if (!all_finite(score)) throw std::invalid_argument("max_weight_assignment: non-finite scores");
    const int n = static_cast<int>(score.rows());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Minimize -score with dual potentials u (rows) and v (columns);
    // 1-based with column 0 as the virtual source.
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> matched_row(static_cast<std::size_t>(n) + 1, 0);  // matched_row[j] = row assigned to column j
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        matched_row[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(static_cast<std::size_t>(n) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = matched_row[static_cast<std::size_t>(j0)];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = -score(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < min_slack[static_cast<std::size_t>(j)]) {
                    min_slack[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (min_slack[static_cast<std::size_t>(j)] < delta) {
                    delta = min_slack[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    min_slack[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched_row[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            matched_row[static_cast<std::size_t>(j0)] = matched_row[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> map(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j) map[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(j)]) - 1] = j - 1;
    return Permutation(std::move(map));
}

Permutation round_to_permutation(const Matrix& X) {
    require_square(X, "round_to_permutation");
    if ((X.array() < -1e-9).any())
        throw std::invalid_argument("round_to_permutation: entries must be >= -1e-9");
    return max_weight_assignment(X);
}

}  // namespace gm

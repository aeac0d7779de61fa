#pragma once

#include <graphmatch/matrix.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gm {

/// One sampled solver state. `objective` is f(X); `reg_objective` is the
/// regularized value F(X) under the lambda/weights active at that moment;
/// `residual` is ||X - P||_F when a ground-truth permutation P is known;
/// `nnz` counts entries above the configured zero threshold.
struct TraceRecord {
    int outer = 0;
    int inner = 0;
    double wall_time_s = 0.0;
    double objective = 0.0;
    double reg_objective = 0.0;
    std::optional<double> residual;
    int nnz = 0;
    double lambda = 0.0;
    double epsilon = 0.0;
};

struct SolveTrace {
    std::vector<TraceRecord> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }

    /// CSV with header
    /// outer,inner,wall_time_s,objective,reg_objective,residual,nnz,lambda,epsilon
    /// Numbers use shortest round-trip formatting; a missing residual is an
    /// empty field.
    void write_csv(std::ostream& out) const;
    static SolveTrace read_csv(std::istream& in);
};

/// Shortest round-trip decimal rendering of a double (std::to_chars).
/// Shared by the trace and benchmark CSV writers so repeated runs are
/// byte-identical.
std::string format_double(double v);

/// Streaming validity checker for traces: wall time nondecreasing, lambda
/// nondecreasing, epsilon nonincreasing, nnz in [1, n^2], and (when iterates
/// are supplied) every iterate doubly stochastic at `feas_tol`. Violations
/// accumulate as human-readable strings instead of throwing, so a lint pass
/// can report all problems at once.
class TraceLinter {
public:
    explicit TraceLinter(double feas_tol = 1e-6) : feas_tol_(feas_tol) {}

    void feed(const TraceRecord& rec, const Matrix* iterate = nullptr);
    void feed_all(const SolveTrace& trace);

    bool ok() const { return violations_.empty(); }
    const std::vector<std::string>& violations() const { return violations_; }
    std::size_t records_seen() const { return count_; }

private:
    double feas_tol_;
    std::size_t count_ = 0;
    bool have_prev_ = false;
    TraceRecord prev_;
    std::vector<std::string> violations_;
};

}  // namespace gm

#pragma once

#include <graphmatch/config.hpp>
#include <graphmatch/regularizers.hpp>
#include <graphmatch/solver.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace gm {

/// One benchmark campaign: num_instances seeded instances of order n, each
/// solved once per regularizer under a shared per-solve time budget.
/// Instance i uses seed split_seed(base_seed, i), identical across
/// regularizers. With deterministic_clock (default) solves are metered by
/// the nominal cost model, so the summary is a pure function of this struct.
struct BenchmarkSpec {
    int n = 50;
    int num_instances = 10;
    std::vector<RegularizerChoice> regularizers = default_regularizers();
    double time_budget_s = 60.0;
    SolverConfig config;
    std::int64_t base_seed = 0;
    int grid_points = 50;
    int workers = 1;
    double point_scale = 10.0;
    double noise_scale = 0.5;
    bool deterministic_clock = true;

    static std::vector<RegularizerChoice> default_regularizers();
    void validate() const;
};

struct SeriesPoint {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Per-regularizer time series of best-so-far |f(X) - f(P)| and
/// ||X - P||_F, aggregated over the instances that solved cleanly.
struct RegularizerSeries {
    std::string name;
    std::vector<SeriesPoint> objective_error;
    std::vector<SeriesPoint> residual;
    int instances_ok = 0;
    int failures = 0;
};

struct BenchmarkSummary {
    int n = 0;
    int num_instances = 0;
    int grid_points = 0;
    int workers = 0;
    double time_budget_s = 0.0;
    double point_scale = 0.0;
    double noise_scale = 0.0;
    std::int64_t base_seed = 0;
    bool deterministic_clock = true;
    std::vector<double> grid_times;
    std::vector<RegularizerSeries> series;

    /// '#'-prefixed metadata lines, then one row per (regularizer, grid
    /// point):
    /// regularizer,grid_time_s,objective_error_mean,objective_error_std,
    /// residual_mean,residual_std,instances_ok
    /// Deterministic fields and shortest round-trip formatting only, so
    /// equal specs produce byte-identical files.
    void write_csv(std::ostream& out) const;
};

/// Optional per-solve observer hook (e.g. trace linting); called once per
/// (instance, regularizer) pair before that solve starts. May be invoked
/// from worker threads, one solve per monitor instance.
using BenchMonitorFactory = std::function<std::unique_ptr<SolveMonitor>(int instance_index, const RegularizerChoice&)>;

BenchmarkSummary run_benchmark(const BenchmarkSpec& spec, const BenchMonitorFactory& monitor_factory = {});

}  // namespace gm

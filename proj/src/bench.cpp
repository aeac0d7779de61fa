#include <graphmatch/bench.hpp>

#include <graphmatch/instances.hpp>
#include <graphmatch/random.hpp>

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

namespace gm {

std::vector<RegularizerChoice> BenchmarkSpec::default_regularizers() {
    return {{RegularizerKind::LinearReweighted, 0.5}, {RegularizerKind::Lp, 0.75}, {RegularizerKind::Lp, 0.5}};
}

void BenchmarkSpec::validate() const {
    if (n < 2) throw std::invalid_argument("BenchmarkSpec: n must be >= 2");
    if (num_instances < 1) throw std::invalid_argument("BenchmarkSpec: num_instances must be >= 1");
    if (regularizers.empty()) throw std::invalid_argument("BenchmarkSpec: need at least one regularizer");
    if (!(time_budget_s > 0.0)) throw std::invalid_argument("BenchmarkSpec: time_budget_s must be > 0");
    if (grid_points < 1) throw std::invalid_argument("BenchmarkSpec: grid_points must be >= 1");
    if (workers < 1) throw std::invalid_argument("BenchmarkSpec: workers must be >= 1");
    if (!(point_scale > 0.0)) throw std::invalid_argument("BenchmarkSpec: point_scale must be > 0");
    if (!(noise_scale >= 0.0)) throw std::invalid_argument("BenchmarkSpec: noise_scale must be >= 0");
    config.validate();
}

namespace {

// Streams one solve: keeps running minima of |f - f_truth| and the residual,
// freezing them at each grid time as the trace passes it (step function,
// last observation carried forward). Grid points before the first record
// are backfilled with the first observation.
class BestSoFarSampler final : public SolveMonitor {
public:
    BestSoFarSampler(const std::vector<double>& grid, double f_truth, SolveMonitor* forward)
        : grid_(grid),
          f_truth_(f_truth),
          forward_(forward),
          obj_(grid.size(), std::numeric_limits<double>::infinity()),
          res_(grid.size(), std::numeric_limits<double>::infinity()) {}

    void on_record(const TraceRecord& rec, const Matrix& X) override {
        while (next_ < grid_.size() && grid_[next_] < rec.wall_time_s) {
            obj_[next_] = best_obj_;
            res_[next_] = best_res_;
            ++next_;
        }
        best_obj_ = std::min(best_obj_, std::abs(rec.objective - f_truth_));
        if (rec.residual) best_res_ = std::min(best_res_, *rec.residual);
        if (forward_) forward_->on_record(rec, X);
    }

    bool want_trace() const override { return false; }

    void finish() {
        while (next_ < grid_.size()) {
            obj_[next_] = best_obj_;
            res_[next_] = best_res_;
            ++next_;
        }
        for (std::size_t g = 0; g < grid_.size(); ++g) {
            if (std::isinf(obj_[g])) obj_[g] = best_obj_;
            if (std::isinf(res_[g])) res_[g] = best_res_;
        }
    }

    const std::vector<double>& objective_error() const { return obj_; }
    const std::vector<double>& residual() const { return res_; }

private:
    const std::vector<double>& grid_;
    double f_truth_;
    SolveMonitor* forward_;
    std::size_t next_ = 0;
    double best_obj_ = std::numeric_limits<double>::infinity();
    double best_res_ = std::numeric_limits<double>::infinity();
    std::vector<double> obj_;
    std::vector<double> res_;
};

struct CellResult {
    bool ok = false;
    std::vector<double> objective_error;
    std::vector<double> residual;
};

SeriesPoint aggregate(const std::vector<const std::vector<double>*>& rows, std::size_t g) {
    SeriesPoint pt;
    if (rows.empty()) return pt;
    double sum = 0.0;
    for (const auto* r : rows) sum += (*r)[g];
    pt.mean = sum / static_cast<double>(rows.size());
    double sq = 0.0;
    for (const auto* r : rows) {
        const double d = (*r)[g] - pt.mean;
        sq += d * d;
    }
    pt.stddev = std::sqrt(sq / static_cast<double>(rows.size()));
    return pt;
}

}  // namespace

BenchmarkSummary run_benchmark(const BenchmarkSpec& spec, const BenchMonitorFactory& monitor_factory) {
    spec.validate();

    BenchmarkSummary summary;
    summary.n = spec.n;
    summary.num_instances = spec.num_instances;
    summary.grid_points = spec.grid_points;
    summary.workers = spec.workers;
    summary.time_budget_s = spec.time_budget_s;
    summary.point_scale = spec.point_scale;
    summary.noise_scale = spec.noise_scale;
    summary.base_seed = spec.base_seed;
    summary.deterministic_clock = spec.deterministic_clock;
    summary.grid_times.resize(static_cast<std::size_t>(spec.grid_points));
    for (int g = 0; g < spec.grid_points; ++g)
        summary.grid_times[static_cast<std::size_t>(g)] =
            spec.time_budget_s * static_cast<double>(g + 1) / static_cast<double>(spec.grid_points);

    const std::size_t num_regs = spec.regularizers.size();
    std::vector<std::vector<CellResult>> cells(static_cast<std::size_t>(spec.num_instances),
                                               std::vector<CellResult>(num_regs));

    SolverConfig cfg = spec.config;
    cfg.time_budget_s = spec.time_budget_s;

    const auto run_instance = [&](int idx) {
        GeneratorSpec gen;
        gen.n = spec.n;
        gen.point_scale = spec.point_scale;
        gen.noise_scale = spec.noise_scale;
        gen.seed = static_cast<std::int64_t>(split_seed(static_cast<std::uint64_t>(spec.base_seed),
                                                        static_cast<std::uint64_t>(idx)));
        const GraphMatchingInstance inst = generate_instance(gen);
        const ObjectiveContext ctx(inst.A, inst.B);
        const double f_truth = ctx.f(inst.ground_truth->to_matrix());

        for (std::size_t r = 0; r < num_regs; ++r) {
            std::unique_ptr<SolveMonitor> external;
            if (monitor_factory) external = monitor_factory(idx, spec.regularizers[r]);
            BestSoFarSampler sampler(summary.grid_times, f_truth, external.get());
            CellResult& cell = cells[static_cast<std::size_t>(idx)][r];
            try {
                WallClock wall;
                DeterministicClock det;
                SolveClock* clock = spec.deterministic_clock ? static_cast<SolveClock*>(&det)
                                                             : static_cast<SolveClock*>(&wall);
                solve(inst, cfg, spec.regularizers[r], &sampler, clock);
                sampler.finish();
                cell.ok = true;
                cell.objective_error = sampler.objective_error();
                cell.residual = sampler.residual();
            } catch (const std::exception&) {
                cell.ok = false;
            }
        }
    };

    if (spec.workers == 1 || spec.num_instances == 1) {
        for (int i = 0; i < spec.num_instances; ++i) run_instance(i);
    } else {
        std::atomic<int> next{0};
        const int nthreads = std::min(spec.workers, spec.num_instances);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < spec.num_instances; i = next.fetch_add(1)) run_instance(i);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t r = 0; r < num_regs; ++r) {
        RegularizerSeries series;
        series.name = to_string(spec.regularizers[r]);
        std::vector<const std::vector<double>*> obj_rows, res_rows;
        for (int i = 0; i < spec.num_instances; ++i) {
            const CellResult& cell = cells[static_cast<std::size_t>(i)][r];
            if (cell.ok) {
                obj_rows.push_back(&cell.objective_error);
                res_rows.push_back(&cell.residual);
            } else {
                ++series.failures;
            }
        }
        series.instances_ok = static_cast<int>(obj_rows.size());
        series.objective_error.resize(summary.grid_times.size());
        series.residual.resize(summary.grid_times.size());
        for (std::size_t g = 0; g < summary.grid_times.size(); ++g) {
            series.objective_error[g] = aggregate(obj_rows, g);
            series.residual[g] = aggregate(res_rows, g);
        }
        summary.series.push_back(std::move(series));
    }
    return summary;
}

void BenchmarkSummary::write_csv(std::ostream& out) const {
    out << "# graphmatch bench summary\n";
    out << "# n," << n << '\n';
    out << "# instances," << num_instances << '\n';
    out << "# budget_s," << format_double(time_budget_s) << '\n';
    out << "# base_seed," << base_seed << '\n';
    out << "# grid_points," << grid_points << '\n';
    out << "# workers," << workers << '\n';
    out << "# clock," << (deterministic_clock ? "deterministic" : "wall") << '\n';
    out << "# point_scale," << format_double(point_scale) << '\n';
    out << "# noise_scale," << format_double(noise_scale) << '\n';
    out << "# regularizers,";
    for (std::size_t r = 0; r < series.size(); ++r) {
        if (r) out << ';';
        out << series[r].name;
    }
    out << '\n';
    out << "regularizer,grid_time_s,objective_error_mean,objective_error_std,residual_mean,residual_std,instances_ok\n";
    for (const auto& s : series) {
        for (std::size_t g = 0; g < grid_times.size(); ++g) {
            out << s.name << ',' << format_double(grid_times[g]) << ',' << format_double(s.objective_error[g].mean)
                << ',' << format_double(s.objective_error[g].stddev) << ',' << format_double(s.residual[g].mean) << ','
                << format_double(s.residual[g].stddev) << ',' << s.instances_ok << '\n';
        }
    }
}

}  // namespace gm

// graphmatch: generate, solve and benchmark graph-matching instances with
// reweighted/Lp/quartic regularized relaxation solvers.
//
// Exit codes: 0 success, 1 usage or validation error, 2 solve failure,
// 3 I/O error. GRAPHMATCH_OUT_DIR sets the directory for default output
// file names.

#include <graphmatch/bench.hpp>
#include <graphmatch/instances.hpp>
#include <graphmatch/oracle.hpp>
#include <graphmatch/projection.hpp>
#include <graphmatch/solver.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolve = 2;
constexpr int kExitIo = 3;

fs::path resolve_output(const std::string& explicit_path, const std::string& default_name) {
    if (!explicit_path.empty()) return fs::path(explicit_path);
    if (const char* dir = std::getenv("GRAPHMATCH_OUT_DIR"); dir && *dir) return fs::path(dir) / default_name;
    return fs::path(default_name);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gm::IoError("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw gm::IoError("write failed: " + path.string());
}

gm::Matrix read_matrix_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw gm::IoError("cannot open for reading: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) throw gm::ParseError("matrix: bad token on line " + std::to_string(line_no), line_no);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw gm::ParseError("matrix: no data in " + path.string(), 0);
    const std::size_t n = rows.size();
    for (const auto& r : rows)
        if (r.size() != n) throw gm::ParseError("matrix: expected " + std::to_string(n) + " columns per row", 0);
    gm::Matrix M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

std::string matrix_to_text(const gm::Matrix& M) {
    std::string out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out += ' ';
            out += gm::format_double(M(i, j));
        }
        out += '\n';
    }
    return out;
}

// Collects trace records during a benchmark solve and writes them on
// completion (no iterate copies kept).
class TraceFileMonitor final : public gm::SolveMonitor {
public:
    explicit TraceFileMonitor(fs::path path) : path_(std::move(path)) {}
    ~TraceFileMonitor() override {
        try {
            std::ofstream out(path_, std::ios::binary);
            if (out) trace_.write_csv(out);
        } catch (...) {
        }
    }
    void on_record(const gm::TraceRecord& rec, const gm::Matrix&) override { trace_.records.push_back(rec); }
    bool want_trace() const override { return false; }

private:
    fs::path path_;
    gm::SolveTrace trace_;
};

void add_config_flags(CLI::App* cmd, gm::SolverConfig& cfg) {
    cmd->add_option("--lambda0", cfg.lambda0, "Initial regularization weight");
    cmd->add_option("--epsilon0", cfg.epsilon0, "Initial reweighting offset");
    cmd->add_option("--gamma", cfg.gamma, "Additive lambda increment per round");
    cmd->add_option("--delta-ls", cfg.delta_ls, "Line-search backtracking factor");
    cmd->add_option("--delta-eps", cfg.delta_eps, "Epsilon shrink factor per round");
    cmd->add_option("--theta", cfg.theta, "Sufficient-decrease parameter");
    cmd->add_option("--eta", cfg.eta, "Nonmonotone reference mixing weight");
    cmd->add_option("--tau-inner", cfg.tau_inner, "Inner stop on ||dX||_F/sqrt(n)");
    cmd->add_option("--tau-sparsity", cfg.tau_sparsity, "Outer stop slack on nnz(X) - n");
    cmd->add_option("--epsilon-min", cfg.epsilon_min, "Epsilon floor");
    cmd->add_option("--lambda-max", cfg.lambda_max, "Lambda cap");
    cmd->add_option("--zero-threshold", cfg.zero_threshold, "Entry cutoff for nnz counting");
    cmd->add_option("--max-outer", cfg.max_outer, "Outer iteration cap");
    cmd->add_option("--max-inner", cfg.max_inner, "Inner iteration cap per round");
    cmd->add_option("--max-backtracks", cfg.max_backtracks, "Line-search trial cap");
    cmd->add_option("--proj-tol", cfg.proj_tol, "Projection dual tolerance (scaled by sqrt(n))");
    cmd->add_option("--proj-max-iter", cfg.proj_max_iter, "Projection iteration cap");
}

json permutation_to_json(const gm::Permutation& p) { return json(p.map()); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph matching / QAP relaxation solver and benchmark harness"};
    app.require_subcommand(1);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic instance (or build one from two graphs)");
    gm::GeneratorSpec gen_spec;
    std::string gen_out, gen_graph_a, gen_graph_b;
    auto* gen_n = gen_cmd->add_option("--n", gen_spec.n, "Instance order (>= 2)");
    gen_cmd->add_option("--point-scale", gen_spec.point_scale, "Coordinate range of the base points");
    gen_cmd->add_option("--noise-scale", gen_spec.noise_scale, "Coordinate range of the noise points");
    gen_cmd->add_option("--seed", gen_spec.seed, "Generator seed");
    auto* gen_ga = gen_cmd->add_option("--graph-a", gen_graph_a,
                                       "Edge-list file; A becomes its hop-count distance matrix");
    auto* gen_gb = gen_cmd->add_option("--graph-b", gen_graph_b,
                                       "Edge-list file; B becomes its hop-count distance matrix");
    gen_ga->needs(gen_gb);
    gen_gb->needs(gen_ga);
    gen_ga->excludes(gen_n);
    gen_cmd->add_option("-o,--output", gen_out, "Output instance path (JSON)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance file");
    std::string solve_in, solve_out, solve_trace, solve_reg = "linear";
    double solve_p = 0.5;
    double solve_budget = 0.0;
    bool solve_det_clock = false;
    gm::SolverConfig solve_cfg;
    solve_cmd->add_option("instance", solve_in, "Instance JSON path")->required();
    solve_cmd->add_option("--regularizer", solve_reg, "linear | lp | quartic (or lp<p> e.g. lp0.75)");
    solve_cmd->add_option("--p", solve_p, "Lp exponent in (0,1)");
    solve_cmd->add_option("--time-budget", solve_budget, "Wall-clock budget in seconds (0 = none)");
    solve_cmd->add_flag("--deterministic-clock", solve_det_clock, "Meter time with the nominal cost model");
    solve_cmd->add_option("--trace", solve_trace, "Write the per-iteration trace CSV here");
    solve_cmd->add_option("-o,--output", solve_out, "Result JSON path");
    add_config_flags(solve_cmd, solve_cfg);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the multi-instance benchmark");
    gm::BenchmarkSpec bench_spec;
    std::string bench_out, bench_regs = "linear,lp0.75,lp0.5", bench_trace_dir;
    bool bench_wall = false;
    bench_cmd->add_option("--n", bench_spec.n, "Instance order");
    bench_cmd->add_option("--instances", bench_spec.num_instances, "Number of instances");
    bench_cmd->add_option("--budget", bench_spec.time_budget_s, "Per-solve time budget in seconds");
    bench_cmd->add_option("--regularizers", bench_regs, "Comma-separated list, e.g. linear,lp0.75,lp0.5");
    bench_cmd->add_option("--grid", bench_spec.grid_points, "Number of time-grid samples");
    bench_cmd->add_option("--workers", bench_spec.workers, "Parallel instance workers");
    bench_cmd->add_option("--base-seed", bench_spec.base_seed, "Base seed for per-instance seeds");
    bench_cmd->add_option("--point-scale", bench_spec.point_scale, "Generator point scale");
    bench_cmd->add_option("--noise-scale", bench_spec.noise_scale, "Generator noise scale");
    bench_cmd->add_flag("--wall-clock", bench_wall, "Use real time instead of the deterministic cost model");
    bench_cmd->add_option("--trace-dir", bench_trace_dir, "Also write one trace CSV per (instance, regularizer)");
    bench_cmd->add_option("-o,--output", bench_out, "Summary CSV path");
    add_config_flags(bench_cmd, bench_spec.config);

    // project
    auto* proj_cmd = app.add_subcommand("project", "Project a matrix onto the doubly stochastic polytope");
    std::string proj_in, proj_out;
    double proj_tol = 1e-8;
    int proj_max_iter = 50000;
    proj_cmd->add_option("matrix", proj_in, "Whitespace text matrix (one row per line)")->required();
    proj_cmd->add_option("--tol", proj_tol, "Dual gradient tolerance (scaled by sqrt(n))");
    proj_cmd->add_option("--max-iter", proj_max_iter, "Iteration cap");
    proj_cmd->add_option("-o,--output", proj_out, "Output matrix path (text)");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force optimum for n <= 9");
    std::string oracle_in, oracle_out;
    oracle_cmd->add_option("instance", oracle_in, "Instance JSON path")->required();
    oracle_cmd->add_option("-o,--output", oracle_out, "Result JSON path");

    // verify-theorem1
    auto* verify_cmd = app.add_subcommand("verify-theorem1", "Check the single-step equivalence certificate");
    std::string verify_in;
    int verify_n = 4;
    std::int64_t verify_seed = 0;
    double verify_a = 0.0, verify_eps = 1.0, verify_lambda = -1.0, verify_lambda_factor = 1.01;
    int verify_samples = 200;
    std::uint64_t verify_rng_seed = 1;
    verify_cmd->add_option("instance", verify_in, "Instance JSON path (must carry ground truth)");
    verify_cmd->add_option("--n", verify_n, "Order of a generated noiseless instance (when no file given)");
    verify_cmd->add_option("--seed", verify_seed, "Seed of the generated instance");
    verify_cmd->add_option("--a", verify_a, "Iterate distance hypothesis, in [0, 1/2)");
    verify_cmd->add_option("--epsilon", verify_eps, "Reweighting offset");
    verify_cmd->add_option("--lambda", verify_lambda, "Explicit lambda (overrides --lambda-factor)");
    verify_cmd->add_option("--lambda-factor", verify_lambda_factor, "Lambda as a multiple of the certified threshold");
    verify_cmd->add_option("--samples", verify_samples, "Random polytope samples");
    verify_cmd->add_option("--rng-seed", verify_rng_seed, "Sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen_cmd) {
            gm::GraphMatchingInstance inst;
            std::string default_name;
            if (!gen_graph_a.empty()) {
                std::ifstream ina(gen_graph_a), inb(gen_graph_b);
                if (!ina) throw gm::IoError("cannot open for reading: " + gen_graph_a);
                if (!inb) throw gm::IoError("cannot open for reading: " + gen_graph_b);
                const gm::Graph ga = gm::parse_edge_list(ina);
                const gm::Graph gb = gm::parse_edge_list(inb);
                if (ga.n_vertices != gb.n_vertices)
                    throw std::invalid_argument("generate: graphs have different vertex counts (" +
                                                std::to_string(ga.n_vertices) + " vs " + std::to_string(gb.n_vertices) +
                                                ")");
                inst.A = gm::bfs_distance_matrix(ga);
                inst.B = gm::bfs_distance_matrix(gb);
                inst.validate();
                default_name = "instance_graphs_n" + std::to_string(ga.n_vertices) + ".json";
            } else {
                if (!*gen_n) throw std::invalid_argument("generate: provide --n or --graph-a/--graph-b");
                inst = gm::generate_instance(gen_spec);
                default_name =
                    "instance_n" + std::to_string(gen_spec.n) + "_seed" + std::to_string(gen_spec.seed) + ".json";
            }
            const fs::path path = resolve_output(gen_out, default_name);
            gm::save_instance(inst, path);
            std::cout << path.string() << '\n';
            return kExitOk;
        }

        if (*solve_cmd) {
            const gm::GraphMatchingInstance inst = gm::load_instance(solve_in);
            gm::RegularizerChoice choice = gm::parse_regularizer(solve_reg);
            if (solve_cmd->count("--p")) choice.p = solve_p;
            if (choice.kind == gm::RegularizerKind::Lp && !(choice.p > 0.0 && choice.p < 1.0))
                throw std::invalid_argument("solve: Lp exponent must lie in (0,1)");
            solve_cfg.time_budget_s = solve_budget;
            solve_cfg.validate();

            gm::WallClock wall;
            gm::DeterministicClock det;
            gm::SolveClock* clock = solve_det_clock ? static_cast<gm::SolveClock*>(&det) : &wall;

            gm::SolveResult result;
            try {
                result = gm::solve(inst, solve_cfg, choice, nullptr, clock);
            } catch (const std::runtime_error& e) {
                std::cerr << "solve failed: " << e.what() << '\n';
                return kExitSolve;
            }

            if (!solve_trace.empty() || solve_cmd->count("--trace")) {
                const fs::path tpath = resolve_output(solve_trace, "trace.csv");
                std::ostringstream buf;
                result.trace.write_csv(buf);
                write_text_file(tpath, buf.str());
            }

            json out;
            out["n"] = inst.order();
            out["regularizer"] = gm::to_string(choice);
            out["status"] = gm::to_string(result.status);
            out["inner_stalled"] = result.inner_stalled;
            out["final_objective"] = result.final_objective;
            out["rounded_permutation"] = permutation_to_json(result.rounded);
            out["rounded_objective"] = result.rounded_objective;
            out["wall_time_s"] = result.wall_time_s;
            out["outer_iterations"] = result.outer_iterations;
            out["inner_iterations"] = result.inner_iterations;
            if (inst.ground_truth) {
                const gm::Matrix P = inst.ground_truth->to_matrix();
                out["residual_final_iterate"] = gm::residual_fro(result.X, P);
                out["residual_rounded"] = gm::residual_fro(result.rounded.to_matrix(), P);
                out["matches_ground_truth"] = (result.rounded == *inst.ground_truth);
            }
            const std::string text = out.dump(2) + "\n";
            if (!solve_out.empty() || solve_cmd->count("-o") || solve_cmd->count("--output"))
                write_text_file(resolve_output(solve_out, "result.json"), text);
            else
                std::cout << text;
            return kExitOk;
        }

        if (*bench_cmd) {
            std::vector<gm::RegularizerChoice> regs;
            std::istringstream rs(bench_regs);
            std::string tok;
            while (std::getline(rs, tok, ',')) {
                if (!tok.empty()) regs.push_back(gm::parse_regularizer(tok));
            }
            bench_spec.regularizers = std::move(regs);
            bench_spec.deterministic_clock = !bench_wall;

            gm::BenchMonitorFactory factory;
            if (!bench_trace_dir.empty()) {
                const fs::path dir(bench_trace_dir);
                fs::create_directories(dir);
                factory = [dir](int idx, const gm::RegularizerChoice& c) -> std::unique_ptr<gm::SolveMonitor> {
                    return std::make_unique<TraceFileMonitor>(
                        dir / ("trace_i" + std::to_string(idx) + "_" + gm::to_string(c) + ".csv"));
                };
            }

            gm::BenchmarkSummary summary;
            try {
                summary = gm::run_benchmark(bench_spec, factory);
            } catch (const std::runtime_error& e) {
                std::cerr << "bench failed: " << e.what() << '\n';
                return kExitSolve;
            }
            const fs::path path = resolve_output(bench_out, "bench_summary.csv");
            std::ostringstream buf;
            summary.write_csv(buf);
            write_text_file(path, buf.str());
            std::cout << path.string() << '\n';
            return kExitOk;
        }

        if (*proj_cmd) {
            const gm::Matrix C = read_matrix_text(proj_in);
            gm::ProjectionResult res;
            try {
                res = gm::project_birkhoff(C, proj_tol, proj_max_iter);
            } catch (const std::runtime_error& e) {
                std::cerr << "projection failed: " << e.what() << '\n';
                return kExitSolve;
            }
            if (!res.converged) {
                std::cerr << "projection did not converge within " << proj_max_iter
                          << " iterations (gradient norm " << res.grad_norm << ")\n";
                return kExitSolve;
            }
            const std::string text = matrix_to_text(res.X);
            if (!proj_out.empty())
                write_text_file(fs::path(proj_out), text);
            else
                std::cout << text;
            return kExitOk;
        }

        if (*oracle_cmd) {
            const gm::GraphMatchingInstance inst = gm::load_instance(oracle_in);
            const gm::ObjectiveContext ctx(inst.A, inst.B);
            const gm::BruteForceResult res = gm::brute_force_match(ctx);
            json out;
            out["n"] = inst.order();
            out["best_permutation"] = permutation_to_json(res.best);
            out["best_value"] = res.best_value;
            out["num_evaluated"] = res.num_evaluated;
            const std::string text = out.dump(2) + "\n";
            if (!oracle_out.empty())
                write_text_file(fs::path(oracle_out), text);
            else
                std::cout << text;
            return kExitOk;
        }

        if (*verify_cmd) {
            gm::GraphMatchingInstance inst;
            if (!verify_in.empty()) {
                inst = gm::load_instance(verify_in);
                if (!inst.ground_truth) throw std::invalid_argument("verify-theorem1: instance has no ground truth");
            } else {
                gm::GeneratorSpec spec;
                spec.n = verify_n;
                spec.noise_scale = 0.0;
                spec.seed = verify_seed;
                inst = gm::generate_instance(spec);
            }
            const gm::ObjectiveContext ctx(inst.A, inst.B);
            const double threshold = gm::lambda_threshold(verify_a, verify_eps, ctx.lipschitz_constant());
            const double lambda = verify_lambda >= 0.0 ? verify_lambda : verify_lambda_factor * threshold;
            const gm::Theorem1Report report =
                gm::verify_theorem1(ctx, *inst.ground_truth, verify_a, verify_eps, lambda, verify_samples, verify_rng_seed);
            std::cout << (report.pass ? "PASS" : "FAIL") << " threshold=" << gm::format_double(report.threshold)
                      << " lambda=" << gm::format_double(lambda) << " min_gap=" << gm::format_double(report.min_gap)
                      << " vertices=" << report.vertices_evaluated << " interior=" << report.interior_evaluated << '\n';
            return report.pass ? kExitOk : kExitSolve;
        }
    } catch (const gm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const gm::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolve;
    }

    return kExitUsage;
}

// Command-line harness for DCA / BDCA experiments: basin censuses for the
// separable toy function, clustering and MDS comparisons, and single-run
// trace dumps.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dcopt/bench.hpp"
#include "dcopt/clustering.hpp"
#include "dcopt/data_io.hpp"
#include "dcopt/mds.hpp"
#include "dcopt/rate.hpp"
#include "dcopt/solver.hpp"
#include "dcopt/toy.hpp"

namespace {

using namespace dcopt;
using bench::ExperimentConfig;

void add_solver_flags(CLI::App* cmd, ExperimentConfig& config) {
    cmd->add_option("--alpha", config.alpha, "line-search coefficient");
    cmd->add_option("--beta", config.beta, "backtrack factor in (0,1)");
    cmd->add_option("--strategy", config.strategy,
                    "trial step strategy: zero | constant | self-adaptive");
    cmd->add_option("--lambda1", config.lambda1,
                    "constant trial step, or the self-adaptive initial trial");
    cmd->add_option("--gamma", config.gamma, "self-adaptive growth factor");
    cmd->add_option("--max-iter", config.max_iter, "iteration budget per run");
}

void add_run_flags(CLI::App* cmd, ExperimentConfig& config) {
    cmd->add_option("--starts", config.starts, "number of runs / instances");
    cmd->add_option("--seed", config.seed, "base RNG seed");
    cmd->add_option("--threads", config.threads,
                    "worker threads (0 = hardware concurrency)");
    cmd->add_option("--out", config.out_path, "output path (default stdout)");
    cmd->add_option("--format", config.format, "output format: csv | json");
}

int rows_exit_code(const std::vector<bench::ComparisonRow>& rows) {
    for (const auto& row : rows)
        if (!row.error.empty()) {
            std::fprintf(stderr, "dcbench: %s: %s\n", row.instance.c_str(),
                         row.error.c_str());
            return 2;
        }
    return 0;
}

Vec parse_vector(const std::string& text) {
    Vec out;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t comma = text.find(',', begin);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        out.push_back(std::stod(text.substr(begin, end - begin)));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    return out;
}

int run_trace(ExperimentConfig config, const std::string& problem_name,
              const std::string& x0_text) {
    SolverParams params;
    params.alpha = config.alpha;
    params.beta = config.beta;
    params.max_iter = config.max_iter;
    params.stopping = config.stopping_rule();
    if (config.algo == "bdca")
        params.trial = config.trial_strategy();
    else if (config.algo != "dca")
        throw CLI::ValidationError("--algo must be dca or bdca");

    RunResult run;
    if (problem_name == "toy") {
        ToyProblem problem(config.dim);
        Vec x0;
        if (!x0_text.empty()) {
            x0 = parse_vector(x0_text);
        } else {
            x0 = io::gen_uniform_starts(1, Vec(config.dim, -1.5),
                                        Vec(config.dim, 1.5), config.seed)[0];
        }
        run = bdca_run(problem, x0, params);
    } else if (problem_name == "cluster") {
        const io::PointCloud cloud =
            config.data_csv.empty()
                ? io::gen_normal_points(config.n, config.dim, 0.0, 10.0,
                                        config.seed)
                : io::load_points_csv(config.data_csv, config.csv_has_header);
        const std::size_t k = config.k_list.at(0);
        const std::size_t m = cloud.points.cols();
        ClusteringProblem problem(cloud.points, k, config.rho);
        Vec lo(k * m), hi(k * m);
        for (std::size_t t = 0; t < m; ++t) {
            double cmin = cloud.points(0, t), cmax = cloud.points(0, t);
            for (std::size_t i = 1; i < cloud.points.rows(); ++i) {
                cmin = std::min(cmin, cloud.points(i, t));
                cmax = std::max(cmax, cloud.points(i, t));
            }
            for (std::size_t j = 0; j < k; ++j) {
                lo[j * m + t] = cmin;
                hi[j * m + t] = cmin < cmax ? cmax : cmin + 1.0;
            }
        }
        const Vec x0 = io::gen_uniform_starts(1, lo, hi, config.seed + 1)[0];
        run = bdca_run(problem, x0, params);
    } else if (problem_name == "mds") {
        const std::size_t source_dim =
            config.mds_case == 1 ? config.dim : 2 * config.dim;
        const io::PointCloud cloud =
            config.data_csv.empty()
                ? io::gen_normal_points(config.n, source_dim, 0.0, 10.0,
                                        config.seed)
                : io::load_points_csv(config.data_csv, config.csv_has_header);
        const std::size_t n = cloud.points.rows();
        const double rho = config.rho > 0.0
                               ? config.rho
                               : MdsProblem::default_rho(n, config.dim);
        MdsProblem problem(io::dissimilarity_from_points(cloud), config.dim, rho);
        const Vec x0 =
            io::centered_mds_start(n, config.dim, config.seed + 1).flat();
        run = bdca_run(problem, x0, params);
    } else {
        throw CLI::ValidationError("--problem must be toy, cluster or mds");
    }

    bench::emit_results(run.trace, config, config.format, config.out_path);
    std::fprintf(stderr,
                 "dcbench trace: %s, %d iterations, phi_final=%.12g, "
                 "criticality=%.3g, %.3fs\n",
                 to_string(run.reason), run.iterations(), run.phi_final,
                 run.criticality_residual, run.wall_seconds);
    if (run.trace.size() >= 5) {
        const RateEstimate est = estimate_rate(run.trace);
        const char* kind = est.type == RateEstimate::Type::Finite    ? "finite"
                           : est.type == RateEstimate::Type::Linear ? "linear"
                                                                    : "sublinear";
        std::fprintf(stderr, "dcbench trace: fitted decay %s (rate %.4f)\n", kind,
                     est.rate);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DCA / BDCA benchmark harness"};
    app.require_subcommand(1);

    ExperimentConfig config;

    CLI::App* basins = app.add_subcommand(
        "toy-basins", "census of the critical points both algorithms reach");
    basins->add_option("--m", config.dim, "toy dimension (must be 2)");
    add_solver_flags(basins, config);
    add_run_flags(basins, config);

    CLI::App* cluster = app.add_subcommand(
        "cluster", "BDCA vs DCA on minimum sum-of-squares clustering");
    cluster->add_option("--csv", config.data_csv, "data points CSV");
    cluster->add_flag("--has-header", config.csv_has_header,
                      "skip the first CSV row");
    cluster->add_option("--n", config.n, "synthetic point count");
    cluster->add_option("--m", config.dim, "point dimension");
    cluster->add_option("--k", config.k_list, "cluster counts (repeatable)");
    cluster->add_option("--rho", config.rho, "strong convexity parameter");
    cluster->add_option("--rel-tol", config.stop_tol,
                        "relative objective tolerance for BDCA");
    add_solver_flags(cluster, config);
    add_run_flags(cluster, config);

    CLI::App* mds =
        app.add_subcommand("mds", "BDCA vs DCA on multidimensional scaling");
    mds->add_option("--case", config.mds_case,
                    "1: delta from R^p points (stress target); 2: from R^{2p}");
    mds->add_option("--n", config.n, "object count");
    mds->add_option("--p", config.dim, "embedding dimension");
    mds->add_option("--rho", config.rho,
                    "strong convexity parameter (0 = 1/(n p))");
    mds->add_option("--stop-tol", config.stop_tol,
                    "stress target (case 1) or relative tolerance (case 2)");
    add_solver_flags(mds, config);
    add_run_flags(mds, config);

    std::string trace_problem = "toy";
    std::string x0_text;
    CLI::App* trace =
        app.add_subcommand("trace", "single run with a full per-iteration dump");
    trace->add_option("--problem", trace_problem, "toy | cluster | mds");
    trace->add_option("--algo", config.algo, "dca | bdca");
    trace->add_option("--x0", x0_text, "explicit start, comma-separated (toy)");
    trace->add_option("--csv", config.data_csv, "data points CSV");
    trace->add_flag("--has-header", config.csv_has_header,
                    "skip the first CSV row");
    trace->add_option("--n", config.n, "synthetic point count");
    trace->add_option("--m,--p", config.dim, "point / embedding dimension");
    trace->add_option("--k", config.k_list, "cluster counts (first is used)");
    trace->add_option("--case", config.mds_case, "MDS case");
    trace->add_option("--rho", config.rho, "strong convexity parameter");
    trace->add_option("--stop", config.stop,
                      "d-norm | rel-phi | abs-phi | phi-decrease");
    trace->add_option("--stop-tol", config.stop_tol, "stopping rule value");
    add_solver_flags(trace, config);
    add_run_flags(trace, config);

    CLI11_PARSE(app, argc, argv);

    try {
        if (basins->parsed()) {
            config.experiment = "toy-basins";
            if (!basins->count("--strategy")) config.strategy = "constant";
            if (!basins->count("--lambda1")) config.lambda1 = 1.0;
            const bench::BasinCensus census = bench::run_toy_basins(config);
            bench::emit_results(census, config, config.format, config.out_path);
            return 0;
        }
        if (cluster->parsed()) {
            config.experiment = "cluster";
            config.stop = "rel-phi";
            if (!cluster->count("--lambda1")) config.lambda1 = 5.0;
            const auto rows = bench::run_cluster_compare(config);
            bench::emit_results(rows, config, config.format, config.out_path);
            return rows_exit_code(rows);
        }
        if (mds->parsed()) {
            config.experiment = "mds";
            if (!mds->count("--rho")) config.rho = 0.0; // 1/(n p)
            if (!mds->count("--alpha")) config.alpha = 0.05;
            if (!mds->count("--beta")) config.beta = 0.1;
            if (!mds->count("--lambda1")) config.lambda1 = 3.0;
            if (!mds->count("--stop-tol"))
                config.stop_tol = config.mds_case == 1 ? 1e-6 : 1e-3;
            const auto rows = bench::run_mds_compare(config);
            bench::emit_results(rows, config, config.format, config.out_path);
            return rows_exit_code(rows);
        }
        config.experiment = "trace";
        return run_trace(config, trace_problem, x0_text);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "dcbench: error: %s\n", e.what());
        return 2;
    }
}

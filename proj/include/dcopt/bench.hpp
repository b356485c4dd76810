#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dcopt/matrix.hpp"
#include "dcopt/solver.hpp"

namespace dcopt::bench {

// Flat description of one experiment; every emitted artifact embeds it so
// runs can be reproduced from the output file alone.
struct ExperimentConfig {
    std::string experiment = "trace"; // toy-basins | cluster | mds | trace

    // problem
    std::string data_csv;        // empty = synthetic data
    bool csv_has_header = false;
    std::size_t n = 500;         // synthetic point count
    std::size_t dim = 2;         // m for toy/cluster, p for mds
    std::vector<std::size_t> k_list = {5};
    int mds_case = 1;
    double rho = 0.1;

    // solver
    double alpha = 0.1;
    double beta = 0.5;
    std::string strategy = "self-adaptive"; // zero | constant | self-adaptive
    double lambda1 = 1.0;
    double gamma = 2.0;
    std::string stop = "rel-phi"; // d-norm | rel-phi | abs-phi | phi-decrease
    double stop_tol = 1e-3;
    int max_iter = 10000;

    // run
    std::string algo = "bdca"; // trace subcommand: dca | bdca
    std::size_t starts = 10;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = hardware concurrency
    std::string out_path; // empty = stdout
    std::string format = "csv"; // csv | json

    TrialStepStrategy trial_strategy() const;
    StoppingRule stopping_rule() const;

    std::map<std::string, std::string> to_kv() const;
    static ExperimentConfig from_kv(const std::map<std::string, std::string>& kv);
};

struct ComparisonRow {
    std::string instance;
    double dca_time = 0.0;
    double bdca_time = 0.0;
    int dca_iters = 0;
    int bdca_iters = 0;
    double phi_dca = 0.0;
    double phi_bdca = 0.0;
    // DCA plateaued at a critical value strictly above BDCA's target
    bool dca_failed = false;
    std::string error; // per-instance solver error; empty on success
};

// Counts of runs converging to each critical point of the m=2 toy lattice,
// in the fixed row order (-1,-1), (-1,0), (0,-1), (0,0).
struct BasinCensus {
    std::array<std::array<double, 2>, 4> points{
        {{-1.0, -1.0}, {-1.0, 0.0}, {0.0, -1.0}, {0.0, 0.0}}};
    std::array<std::size_t, 4> dca_counts{};
    std::array<std::size_t, 4> bdca_counts{};
    std::size_t starts = 0;
    // largest distance from any final iterate to its assigned lattice point
    double max_snap_distance = 0.0;
};

// index into BasinCensus::points of the lattice point nearest to x
std::size_t toy_basin_index(const Vec& x, double* distance = nullptr);

// Runs DCA and BDCA from the same uniform starts in [-1.5, 1.5]^2 and
// counts the basins both land in.
BasinCensus run_toy_basins(const ExperimentConfig& config);

// Per instance: BDCA first to the configured stopping rule, then DCA from
// the same start until it reaches BDCA's final objective value, plateaus at
// a critical point above it, or exhausts max_iter. Solver errors are
// recorded per row and the run continues.
std::vector<ComparisonRow> run_cluster_compare(const ExperimentConfig& config);
std::vector<ComparisonRow> run_mds_compare(const ExperimentConfig& config);

void emit_results(const BasinCensus& census, const ExperimentConfig& config,
                  const std::string& format, const std::string& path);
void emit_results(const std::vector<ComparisonRow>& rows,
                  const ExperimentConfig& config, const std::string& format,
                  const std::string& path);
void emit_results(const Trace& trace, const ExperimentConfig& config,
                  const std::string& format, const std::string& path);

// Chunk-free parallel loop; body(i) runs exactly once per index, on up to
// `threads` workers (0 = hardware concurrency). The first exception thrown
// by any body is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

} // namespace dcopt::bench

#include "dcopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dcopt/clustering.hpp"
#include "dcopt/data_io.hpp"
#include "dcopt/errors.hpp"
#include "dcopt/mds.hpp"
#include "dcopt/toy.hpp"

namespace dcopt::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    return s > 1e-9 ? s : 1e-9;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad numeric config value '" + s + "'");
    return v;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::size_t> split_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::size_t begin = 0;
    while (begin <= s.size()) {
        const std::size_t comma = s.find(',', begin);
        const std::size_t end = comma == std::string::npos ? s.size() : comma;
        if (end > begin)
            out.push_back(static_cast<std::size_t>(
                std::stoull(s.substr(begin, end - begin))));
        if (comma == std::string::npos) break;
        begin = comma + 1;
    }
    return out;
}

// DCA chases BDCA's final value; a critical-point stop above the target is
// the plateau ("failed") case
struct ChaseOutcome {
    RunResult result;
    bool failed = false;
};

ChaseOutcome dca_chase(const DcProblem& problem, const Vec& x0, double phi_target,
                       SolverParams params) {
    params.trial = TrialStepStrategy::zero();
    params.stopping = StoppingRule::abs_phi_target(phi_target);
    ChaseOutcome out;
    out.result = dca_run(problem, x0, params);
    const double tol = 1e-12 * (1.0 + std::fabs(phi_target));
    out.failed = out.result.phi_final > phi_target + tol;
    return out;
}

} // namespace

TrialStepStrategy ExperimentConfig::trial_strategy() const {
    if (strategy == "zero") return TrialStepStrategy::zero();
    if (strategy == "constant") return TrialStepStrategy::constant(lambda1);
    if (strategy == "self-adaptive")
        return TrialStepStrategy::self_adaptive(lambda1, gamma);
    throw std::invalid_argument("unknown trial strategy '" + strategy + "'");
}

StoppingRule ExperimentConfig::stopping_rule() const {
    if (stop == "d-norm") return StoppingRule::d_norm_tol(stop_tol);
    if (stop == "rel-phi") return StoppingRule::rel_phi_tol(stop_tol);
    if (stop == "abs-phi") return StoppingRule::abs_phi_target(stop_tol);
    if (stop == "phi-decrease") return StoppingRule::phi_decrease_tol(stop_tol);
    throw std::invalid_argument("unknown stopping rule '" + stop + "'");
}

std::map<std::string, std::string> ExperimentConfig::to_kv() const {
    std::map<std::string, std::string> kv;
    kv["experiment"] = experiment;
    kv["data_csv"] = data_csv;
    kv["csv_has_header"] = csv_has_header ? "1" : "0";
    kv["n"] = std::to_string(n);
    kv["dim"] = std::to_string(dim);
    kv["k_list"] = join_sizes(k_list);
    kv["mds_case"] = std::to_string(mds_case);
    kv["rho"] = format_double(rho);
    kv["alpha"] = format_double(alpha);
    kv["beta"] = format_double(beta);
    kv["strategy"] = strategy;
    kv["lambda1"] = format_double(lambda1);
    kv["gamma"] = format_double(gamma);
    kv["stop"] = stop;
    kv["stop_tol"] = format_double(stop_tol);
    kv["max_iter"] = std::to_string(max_iter);
    kv["algo"] = algo;
    kv["starts"] = std::to_string(starts);
    kv["seed"] = std::to_string(seed);
    kv["threads"] = std::to_string(threads);
    kv["out_path"] = out_path;
    kv["format"] = format;
    return kv;
}

ExperimentConfig ExperimentConfig::from_kv(
    const std::map<std::string, std::string>& kv) {
    ExperimentConfig c;
    auto get = [&kv](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::invalid_argument(std::string("missing config key '") + key +
                                        "'");
        return it->second;
    };
    c.experiment = get("experiment");
    c.data_csv = get("data_csv");
    c.csv_has_header = get("csv_has_header") == "1";
    c.n = std::stoull(get("n"));
    c.dim = std::stoull(get("dim"));
    c.k_list = split_sizes(get("k_list"));
    c.mds_case = std::stoi(get("mds_case"));
    c.rho = parse_double(get("rho"));
    c.alpha = parse_double(get("alpha"));
    c.beta = parse_double(get("beta"));
    c.strategy = get("strategy");
    c.lambda1 = parse_double(get("lambda1"));
    c.gamma = parse_double(get("gamma"));
    c.stop = get("stop");
    c.stop_tol = parse_double(get("stop_tol"));
    c.max_iter = std::stoi(get("max_iter"));
    c.algo = get("algo");
    c.starts = std::stoull(get("starts"));
    c.seed = std::stoull(get("seed"));
    c.threads = static_cast<unsigned>(std::stoul(get("threads")));
    c.out_path = get("out_path");
    c.format = get("format");
    return c;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::size_t toy_basin_index(const Vec& x, double* distance) {
    static constexpr double points[4][2] = {
        {-1.0, -1.0}, {-1.0, 0.0}, {0.0, -1.0}, {0.0, 0.0}};
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < 4; ++c) {
        const double dx = x[0] - points[c][0];
        const double dy = x[1] - points[c][1];
        const double d = std::sqrt(dx * dx + dy * dy);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (distance) *distance = best_d;
    return best;
}

BasinCensus run_toy_basins(const ExperimentConfig& config) {
    if (config.dim != 2)
        throw std::invalid_argument("run_toy_basins: requires dim (m) = 2");

    const ToyProblem problem(2);
    const std::vector<Vec> starts = io::gen_uniform_starts(
        config.starts, {-1.5, -1.5}, {1.5, 1.5}, config.seed);

    SolverParams dca_params;
    dca_params.alpha = config.alpha;
    dca_params.beta = config.beta;
    dca_params.max_iter = config.max_iter;

    SolverParams bdca_params = dca_params;
    bdca_params.trial = config.trial_strategy();

    struct Slot {
        std::size_t dca = 0, bdca = 0;
        double snap = 0.0;
    };
    std::vector<Slot> slots(starts.size());

    parallel_for(starts.size(), config.threads, [&](std::size_t i) {
        const RunResult rd = dca_run(problem, starts[i], dca_params);
        const RunResult rb = bdca_run(problem, starts[i], bdca_params);
        double snap_d = 0.0, snap_b = 0.0;
        slots[i].dca = toy_basin_index(rd.x_final, &snap_d);
        slots[i].bdca = toy_basin_index(rb.x_final, &snap_b);
        slots[i].snap = std::max(snap_d, snap_b);
    });

    BasinCensus census;
    census.starts = starts.size();
    for (const Slot& s : slots) {
        census.dca_counts[s.dca] += 1;
        census.bdca_counts[s.bdca] += 1;
        census.max_snap_distance = std::max(census.max_snap_distance, s.snap);
    }
    return census;
}

std::vector<ComparisonRow> run_cluster_compare(const ExperimentConfig& config) {
    const io::PointCloud cloud =
        config.data_csv.empty()
            ? io::gen_normal_points(config.n, config.dim, 0.0, 10.0, config.seed)
            : io::load_points_csv(config.data_csv, config.csv_has_header);
    const Matrix& data = cloud.points;
    const std::size_t m = data.cols();

    // starting centers drawn from the data's bounding box
    Vec lo(m, std::numeric_limits<double>::infinity());
    Vec hi(m, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (std::size_t t = 0; t < m; ++t) {
            lo[t] = std::min(lo[t], data(i, t));
            hi[t] = std::max(hi[t], data(i, t));
        }
    for (std::size_t t = 0; t < m; ++t)
        if (!(lo[t] < hi[t])) hi[t] = lo[t] + 1.0; // degenerate column

    SolverParams bdca_params;
    bdca_params.alpha = config.alpha;
    bdca_params.beta = config.beta;
    bdca_params.trial = config.trial_strategy();
    bdca_params.stopping = config.stopping_rule();
    bdca_params.max_iter = config.max_iter;

    std::vector<ComparisonRow> rows;
    for (const std::size_t k : config.k_list) {
        const ClusteringProblem problem(data, k, config.rho);
        Vec box_lo(k * m), box_hi(k * m);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t t = 0; t < m; ++t) {
                box_lo[j * m + t] = lo[t];
                box_hi[j * m + t] = hi[t];
            }
        const std::vector<Vec> starts = io::gen_uniform_starts(
            config.starts, box_lo, box_hi, config.seed + k);

        std::vector<ComparisonRow> batch(starts.size());
        parallel_for(starts.size(), config.threads, [&](std::size_t s) {
            ComparisonRow& row = batch[s];
            row.instance = "k" + std::to_string(k) + "-s" + std::to_string(s);
            try {
                const auto t0 = Clock::now();
                const RunResult bdca = bdca_run(problem, starts[s], bdca_params);
                row.bdca_time = seconds_since(t0);
                row.bdca_iters = bdca.iterations();
                row.phi_bdca = bdca.phi_final;

                const auto t1 = Clock::now();
                const ChaseOutcome dca =
                    dca_chase(problem, starts[s], bdca.phi_final, bdca_params);
                row.dca_time = seconds_since(t1);
                row.dca_iters = dca.result.iterations();
                row.phi_dca = dca.result.phi_final;
                row.dca_failed = dca.failed;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        });
        rows.insert(rows.end(), batch.begin(), batch.end());
    }
    return rows;
}

std::vector<ComparisonRow> run_mds_compare(const ExperimentConfig& config) {
    if (config.mds_case != 1 && config.mds_case != 2)
        throw std::invalid_argument("run_mds_compare: case must be 1 or 2");
    const std::size_t n = config.n, p = config.dim;
    const std::size_t source_dim = config.mds_case == 1 ? p : 2 * p;

    std::vector<ComparisonRow> rows(config.starts);
    parallel_for(config.starts, config.threads, [&](std::size_t s) {
        ComparisonRow& row = rows[s];
        row.instance = "case" + std::to_string(config.mds_case) + "-s" +
                       std::to_string(s);
        try {
            // fresh data and start per instance; seeds partitioned per index
            const std::uint64_t inst_seed = config.seed + 2 * s;
            const io::PointCloud cloud = io::gen_normal_points(
                n, source_dim, 0.0, 10.0, inst_seed);
            const Matrix delta = io::dissimilarity_from_points(cloud);
            const double rho =
                config.rho > 0.0 ? config.rho : MdsProblem::default_rho(n, p);
            const MdsProblem problem(delta, p, rho);
            const Vec x0 = io::centered_mds_start(n, p, inst_seed + 1).flat();

            SolverParams bdca_params;
            bdca_params.alpha = config.alpha;
            bdca_params.beta = config.beta;
            bdca_params.trial = config.trial_strategy();
            bdca_params.max_iter = config.max_iter;

            if (config.mds_case == 1) {
                // stop both at the same absolute stress target
                const double phi_target =
                    0.5 * (config.stop_tol - problem.stress_offset());
                bdca_params.stopping = StoppingRule::abs_phi_target(phi_target);

                const auto t0 = Clock::now();
                const RunResult bdca = bdca_run(problem, x0, bdca_params);
                row.bdca_time = seconds_since(t0);
                row.bdca_iters = bdca.iterations();
                row.phi_bdca = bdca.phi_final;

                const auto t1 = Clock::now();
                const ChaseOutcome dca =
                    dca_chase(problem, x0, phi_target, bdca_params);
                row.dca_time = seconds_since(t1);
                row.dca_iters = dca.result.iterations();
                row.phi_dca = dca.result.phi_final;
                row.dca_failed = dca.failed;
            } else {
                bdca_params.stopping = StoppingRule::rel_phi_tol(config.stop_tol);

                const auto t0 = Clock::now();
                const RunResult bdca = bdca_run(problem, x0, bdca_params);
                row.bdca_time = seconds_since(t0);
                row.bdca_iters = bdca.iterations();
                row.phi_bdca = bdca.phi_final;

                const auto t1 = Clock::now();
                const ChaseOutcome dca =
                    dca_chase(problem, x0, bdca.phi_final, bdca_params);
                row.dca_time = seconds_since(t1);
                row.dca_iters = dca.result.iterations();
                row.phi_dca = dca.result.phi_final;
                row.dca_failed = dca.failed;
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    return rows;
}

} // namespace dcopt::bench

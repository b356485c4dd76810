#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>

#include "dcopt/bench.hpp"
#include "dcopt/clustering.hpp"
#include "dcopt/counterexample.hpp"
#include "dcopt/data_io.hpp"
#include "dcopt/errors.hpp"
#include "dcopt/mds.hpp"
#include "dcopt/rate.hpp"
#include "dcopt/rng.hpp"
#include "dcopt/solver.hpp"
#include "dcopt/subproblem.hpp"
#include "dcopt/toy.hpp"

#include "test_oracles.hpp"

using namespace dcopt;

namespace {

// quadratic-in-a-box instance that turns non-finite once an iterate leaves
// the box; used for the NonFiniteValue path
class ExplodingProblem : public DcProblem {
public:
    std::size_t dimension() const override { return 1; }
    double eval_g(const Vec& x) const override {
        if (std::fabs(x[0]) > 0.5) return std::numeric_limits<double>::infinity();
        return x[0] * x[0];
    }
    double eval_h(const Vec& x) const override { return 0.5 * x[0] * x[0]; }
    Vec grad_g(const Vec& x) const override { return {2.0 * x[0]}; }
    Vec subgrad_h(const Vec& x) const override { return {x[0]}; }
    Vec solve_subproblem(const Vec& u) const override { return {u[0] / 2.0 + 10.0}; }
    double strong_convexity_modulus() const override { return 1.0; }
    double subproblem_tolerance() const override { return 1e18; }
};

SolverParams boosted_toy_params() {
    SolverParams p;
    p.alpha = 0.1;
    p.beta = 0.5;
    p.trial = TrialStepStrategy::constant(1.0);
    return p;
}

void check_trace_invariants(const DcProblem& problem, const RunResult& run,
                            double alpha) {
    double prev_phi = run.trace.empty() ? run.phi_final : run.trace.front().phi_x;
    const double rho = problem.strong_convexity_modulus();
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
        const IterationRecord& rec = run.trace[i];
        const double slack =
            1e-8 * (1.0 + std::fabs(rec.phi_x) + std::fabs(rec.phi_y));
        // phi(y_k) <= phi(x_k) - rho ||d_k||^2
        CHECK(rec.phi_y <= rec.phi_x - rho * rec.d_norm * rec.d_norm + slack);
        // phi(x_{k+1}) <= phi(y_k) - alpha lambda^2 ||d_k||^2
        const double phi_next =
            i + 1 < run.trace.size() ? run.trace[i + 1].phi_x : run.phi_final;
        CHECK(phi_next <= rec.phi_y -
                              alpha * rec.lambda * rec.lambda * rec.d_norm *
                                  rec.d_norm +
                              slack);
        // monotone trace
        CHECK(rec.phi_x <= prev_phi + slack);
        prev_phi = rec.phi_x;
        CHECK(rec.lambda <= rec.lambda_bar);
        CHECK(rec.backtracks >= 0);
    }
    CHECK(run.phi_final <= prev_phi + 1e-8 * (1.0 + std::fabs(prev_phi)));
}

} // namespace

TEST_CASE("dca_step on the toy problem") {
    ToyProblem toy(2);

    SUBCASE("from (1,0): the documented subgradient choice and minimizer") {
        const auto [y, u] = dca_step(toy, {1.0, 0.0});
        CHECK(u[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(u[1] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(y[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(y[1] == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
        // grad_g(y) = u is the optimality certificate
        CHECK(dist(toy.grad_g(y), u) <= 1e-12);
    }

    SUBCASE("(-1,-1) is a fixed point") {
        const auto [y, u] = dca_step(toy, {-1.0, -1.0});
        CHECK(u[0] == -2.0);
        CHECK(u[1] == -2.0);
        CHECK(y[0] == -1.0);
        CHECK(y[1] == -1.0);
    }

    SUBCASE("clustering k=1: subproblem residual certificate") {
        Rng rng(7);
        Matrix data(40, 3);
        for (double& v : data.flat()) v = rng.normal(0.0, 5.0);
        ClusteringProblem problem(data, 1, 0.1);
        Vec x(3);
        for (double& v : x) v = rng.uniform(-5.0, 5.0);
        const auto [y, u] = dca_step(problem, x);
        CHECK(dist(problem.grad_g(y), u) < 1e-10);
    }
}

TEST_CASE("line_search") {
    ToyProblem toy(2);
    SolverParams params = boosted_toy_params();

    SUBCASE("toy first step accepts the full trial") {
        const Vec y{1.0 / 3.0, -1.0 / 3.0};
        const Vec d{-2.0 / 3.0, -1.0 / 3.0};
        // hand values: phi(y+d) = -13/9, phi(y) = -4/9, ||d||^2 = 5/9
        CHECK(toy.eval_phi(add_scaled(y, 1.0, d)) ==
              doctest::Approx(-13.0 / 9.0).epsilon(1e-14));
        CHECK(toy.eval_phi(y) == doctest::Approx(-4.0 / 9.0).epsilon(1e-14));
        const LineSearchResult ls = line_search(toy, y, d, 1.0, params);
        CHECK(ls.lambda == 1.0);
        CHECK(ls.backtracks == 0);
        CHECK(ls.phi_accepted == doctest::Approx(-13.0 / 9.0).epsilon(1e-14));
    }

    SUBCASE("zero trial is a pure DCA step") {
        const Vec y{0.2, 0.4};
        const Vec d{0.1, -0.3};
        const LineSearchResult ls = line_search(toy, y, d, 0.0, params);
        CHECK(ls.lambda == 0.0);
        CHECK(ls.backtracks == 0);
        CHECK(ls.phi_accepted == toy.eval_phi(y));
    }

    SUBCASE("nonsmooth-g fixture: every positive step fails, guard returns 0") {
        const Vec y{1.0, 0.0};
        const Vec d{0.5, -1.0};
        const double phi_y = counterexample_phi(y);
        const LineSearchResult ls = line_search(
            counterexample_phi, y, d, phi_y, norm_sq(d), 1.0, params);
        CHECK(ls.lambda == 0.0);
        CHECK(ls.phi_accepted == phi_y);
        // beta = 0.5 from trial 1 crosses lambda_min = 1e-12 after 40 halvings
        CHECK(ls.backtracks == 40);
    }
}

TEST_CASE("next_trial_step rule") {
    const TrialStepStrategy strategy = TrialStepStrategy::self_adaptive(10.0, 2.0);

    SUBCASE("two unreduced acceptances double the step") {
        CHECK(next_trial_step({0.0, 0.0}, {5.0, 5.0}, strategy, 1e-12) == 10.0);
    }

    SUBCASE("a backtracked step is carried over") {
        CHECK(next_trial_step({5.0, 5.0}, {10.0, 2.5}, strategy, 1e-12) == 2.5);
    }

    SUBCASE("collapse below the floor restarts from lambda1") {
        CHECK(next_trial_step({0.0, 0.0}, {3.0, 0.0}, strategy, 1e-12) == 10.0);
    }

    SUBCASE("reset fires on a fixture forcing full backtracking") {
        ToyProblem toy(2);
        SolverParams params;
        params.alpha = 0.1;
        params.beta = 0.5;
        params.max_backtracks = 1;
        // an absurd trial distance gets rejected outright while the iterates
        // are far from a critical point
        params.trial = TrialStepStrategy::self_adaptive(1e8, 2.0);
        params.max_iter = 12;
        const RunResult run = bdca_run(toy, {1.0, 0.0}, params);
        REQUIRE(run.trace.size() >= 11);
        CHECK(run.trace[0].lambda_bar == 0.0); // self-adaptive starts with DCA
        for (std::size_t i = 1; i <= 10; ++i) {
            // each rejection accepts lambda = 0; without the reset the trial
            // would collapse to 0 for good, so seeing lambda1 again proves it
            CHECK(run.trace[i].lambda == 0.0);
            CHECK(run.trace[i].lambda_bar == 1e8);
        }
    }
}

TEST_CASE("bdca_run and dca_run on the toy problem") {
    ToyProblem toy(2);
    const SolverParams params = boosted_toy_params();

    SUBCASE("BDCA escapes the non-minimal stationary point (0,-1)") {
        const RunResult bdca = bdca_run(toy, {1.0, 0.0}, params);
        CHECK(bdca.reason == StopReason::CriticalPoint);
        CHECK(bdca.x_final[0] == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(bdca.x_final[1] == doctest::Approx(-1.0).epsilon(1e-6));

        const RunResult dca = dca_run(toy, {1.0, 0.0}, params);
        CHECK(dca.x_final[0] == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(dca.x_final[1] == doctest::Approx(-1.0).epsilon(1e-6));

        check_trace_invariants(toy, bdca, params.alpha);
        check_trace_invariants(toy, dca, params.alpha);
    }

    SUBCASE("starting at the stationary point returns immediately") {
        const Vec x0{-1.0, -1.0};
        const RunResult bdca = bdca_run(toy, x0, params);
        CHECK(bdca.reason == StopReason::CriticalPoint);
        CHECK(bdca.trace.size() <= 1);
        CHECK(bdca.x_final == x0);
        CHECK(bdca.criticality_residual <= 1e-8 * (1.0 + norm(x0)));
    }

    SUBCASE("the sign(0)=0 selection walks off boundary critical points") {
        // (0,-1) is critical, but the selected subgradient there is (0,-2)
        // while grad g is (1,-2), so DCA moves and finds the global minimum
        const RunResult run = dca_run(toy, {0.0, -1.0}, params);
        CHECK(run.x_final[0] == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(run.x_final[1] == doctest::Approx(-1.0).epsilon(1e-6));
    }

    SUBCASE("dca_run limit from (-0.5,-0.5) matches the written-out recursion") {
        const RunResult run = dca_run(toy, {-0.5, -0.5}, params);
        const Vec oracle = oracles::toy_dca_recursion_limit({-0.5, -0.5}, 60);
        CHECK(dist(run.x_final, oracle) < 1e-7);
        CHECK(run.x_final[0] == doctest::Approx(-1.0).epsilon(1e-7));
        CHECK(run.x_final[1] == doctest::Approx(-1.0).epsilon(1e-7));
    }

    SUBCASE("criticality residual bound holds whenever reported critical") {
        Rng rng(21);
        for (int trial = 0; trial < 25; ++trial) {
            const Vec x0{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
            const RunResult run = bdca_run(toy, x0, params);
            if (run.reason == StopReason::CriticalPoint)
                CHECK(run.criticality_residual <=
                      params.critical_tol * (1.0 + norm(run.x_final)));
        }
    }
}

TEST_CASE("clustering k=1 converges to the centroid") {
    Rng rng(3);
    Matrix data(25, 2);
    for (double& v : data.flat()) v = rng.normal(1.0, 4.0);
    ClusteringProblem problem(data, 1, 0.1);

    Vec centroid(2, 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (std::size_t t = 0; t < 2; ++t) centroid[t] += data(i, t);
    for (double& v : centroid) v /= static_cast<double>(data.rows());
    double mean_sq_dist = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i)
        for (std::size_t t = 0; t < 2; ++t) {
            const double diff = data(i, t) - centroid[t];
            mean_sq_dist += diff * diff;
        }
    mean_sq_dist /= static_cast<double>(data.rows());

    SolverParams params;
    params.trial = TrialStepStrategy::self_adaptive(2.0);
    for (const Vec x0 : {Vec{9.0, -7.0}, Vec{0.0, 0.0}, centroid}) {
        const RunResult bdca = bdca_run(problem, x0, params);
        CHECK(dist(bdca.x_final, centroid) < 1e-6);
        CHECK(bdca.phi_final == doctest::Approx(mean_sq_dist).epsilon(1e-8));
        const RunResult dca = dca_run(problem, x0, params);
        CHECK(dist(dca.x_final, centroid) < 1e-6);
    }
    // coincident duplicate data points, k=1
    Matrix dup(6, 1, 2.0);
    ClusteringProblem dup_problem(dup, 1, 0.1);
    const RunResult run = dca_run(dup_problem, {17.0}, params);
    CHECK(run.x_final[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(run.phi_final == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("trial_strategy zero is bitwise identical to dca_run") {
    SolverParams params;
    params.trial = TrialStepStrategy::zero();
    params.max_iter = 200;

    auto check_same = [&](const DcProblem& problem, const Vec& x0) {
        const RunResult a = bdca_run(problem, x0, params);
        const RunResult b = dca_run(problem, x0, params);
        REQUIRE(a.trace.size() == b.trace.size());
        CHECK(std::memcmp(a.x_final.data(), b.x_final.data(),
                          a.x_final.size() * sizeof(double)) == 0);
        CHECK(a.phi_final == b.phi_final);
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            CHECK(a.trace[i].phi_x == b.trace[i].phi_x);
            CHECK(a.trace[i].phi_y == b.trace[i].phi_y);
            CHECK(a.trace[i].d_norm == b.trace[i].d_norm);
            CHECK(a.trace[i].lambda == 0.0);
        }
    };

    ToyProblem toy(3);
    check_same(toy, {1.2, -0.4, 0.3});

    Rng rng(11);
    Matrix data(30, 2);
    for (double& v : data.flat()) v = rng.normal(0.0, 10.0);
    ClusteringProblem cluster(data, 3, 0.1);
    Vec x0(6);
    for (double& v : x0) v = rng.uniform(-10.0, 10.0);
    check_same(cluster, x0);

    const io::PointCloud pts = io::gen_normal_points(12, 2, 0.0, 10.0, 5);
    MdsProblem mds(io::dissimilarity_from_points(pts), 2,
                   MdsProblem::default_rho(12, 2));
    check_same(mds, io::centered_mds_start(12, 2, 6).flat());
}

TEST_CASE("descent chain and dominance on a clustering run") {
    Rng rng(13);
    Matrix data(80, 2);
    for (double& v : data.flat()) v = rng.normal(0.0, 10.0);
    ClusteringProblem problem(data, 4, 0.1);
    Vec x0(8);
    for (double& v : x0) v = rng.uniform(-15.0, 15.0);

    SolverParams params;
    params.trial = TrialStepStrategy::self_adaptive(5.0);
    params.stopping = StoppingRule::rel_phi_tol(1e-6);
    const RunResult run = bdca_run(problem, x0, params);
    CHECK(run.trace.size() >= 3);
    check_trace_invariants(problem, run, params.alpha);

    // per-step dominance from a shared x_k: the BDCA successor never beats
    // the DCA successor y_k in the wrong direction
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
        const double phi_next =
            i + 1 < run.trace.size() ? run.trace[i + 1].phi_x : run.phi_final;
        CHECK(phi_next <= run.trace[i].phi_y);
    }

    // summability proxy: on a run driven all the way to a critical point the
    // tail of sum ||d_k||^2 is negligible against the head
    SolverParams full = params;
    full.stopping = StoppingRule{};
    const RunResult long_run = dca_run(problem, x0, full);
    REQUIRE(long_run.trace.size() >= 20);
    double head = 0.0, tail = 0.0;
    const std::size_t w = long_run.trace.size() / 4;
    for (std::size_t i = 0; i < long_run.trace.size(); ++i) {
        const double dsq = long_run.trace[i].d_norm * long_run.trace[i].d_norm;
        if (i < w) head += dsq;
        if (i + w >= long_run.trace.size()) tail += dsq;
    }
    CHECK(tail <= 1e-6 * (1.0 + head));
}

TEST_CASE("stopping rules") {
    Rng rng(17);
    Matrix data(50, 2);
    for (double& v : data.flat()) v = rng.normal(0.0, 10.0);
    ClusteringProblem problem(data, 3, 0.1);
    Vec x0(6);
    for (double& v : x0) v = rng.uniform(-10.0, 10.0);

    SolverParams params;
    params.trial = TrialStepStrategy::self_adaptive(5.0);

    SUBCASE("rel-phi fires before full convergence") {
        params.stopping = StoppingRule::rel_phi_tol(1e-3);
        const RunResult run = bdca_run(problem, x0, params);
        CHECK(run.reason == StopReason::StoppingRuleMet);
        const IterationRecord& last = run.trace.back();
        CHECK(std::fabs(last.phi_x - run.phi_final) <=
              1e-3 * (1.0 + std::fabs(run.phi_final)));
    }

    SUBCASE("abs-phi target stops at the target") {
        params.stopping = StoppingRule::rel_phi_tol(1e-9);
        const RunResult full = bdca_run(problem, x0, params);
        params.stopping = StoppingRule::abs_phi_target(full.phi_final + 1.0);
        const RunResult run = bdca_run(problem, x0, params);
        CHECK(run.reason == StopReason::StoppingRuleMet);
        CHECK(run.phi_final <= full.phi_final + 1.0);
        CHECK(run.iterations() <= full.iterations());
    }

    SUBCASE("max_iter is reported") {
        params.max_iter = 2;
        params.stopping = StoppingRule::d_norm_tol(0.0);
        const RunResult run = bdca_run(problem, x0, params);
        CHECK(run.reason == StopReason::MaxIter);
        CHECK(run.trace.size() == 2);
    }

    SUBCASE("d-norm rule fires") {
        params.stopping = StoppingRule::d_norm_tol(1e-3);
        const RunResult run = bdca_run(problem, x0, params);
        CHECK(run.reason == StopReason::StoppingRuleMet);
        CHECK(run.trace.back().d_norm <= 1e-3);
    }

    SUBCASE("phi-decrease plateau rule fires") {
        params.stopping = StoppingRule::phi_decrease_tol(1e-6);
        const RunResult run = bdca_run(problem, x0, params);
        CHECK(run.reason == StopReason::StoppingRuleMet);
    }
}

TEST_CASE("parameter validation") {
    SolverParams params;
    params.alpha = 0.0;
    ToyProblem toy(2);
    CHECK_THROWS_AS(bdca_run(toy, {0.1, 0.1}, params), std::invalid_argument);
    params = SolverParams{};
    params.beta = 1.0;
    CHECK_THROWS_AS(bdca_run(toy, {0.1, 0.1}, params), std::invalid_argument);
    params = SolverParams{};
    params.max_iter = 0;
    CHECK_THROWS_AS(bdca_run(toy, {0.1, 0.1}, params), std::invalid_argument);
    params = SolverParams{};
    CHECK_THROWS_AS(bdca_run(toy, {0.1}, params), std::invalid_argument);
    CHECK_THROWS_AS(
        bdca_run(toy, {0.1, std::numeric_limits<double>::quiet_NaN()}, params),
        NonFiniteValue);
}

TEST_CASE("non-finite objective values raise NonFiniteValue") {
    ExplodingProblem bad;
    SolverParams params;
    CHECK_THROWS_AS(bdca_run(bad, {0.1}, params), NonFiniteValue);
}

TEST_CASE("solve_subproblem_generic") {
    SUBCASE("toy closed form is reproduced") {
        ToyProblem toy(2);
        auto grad = [&toy](const Vec& x) { return toy.grad_g(x); };
        const Vec y =
            solve_subproblem_generic(grad, {2.0, 0.0}, 1.0, {0.0, 0.0});
        CHECK(std::fabs(y[0] - 1.0 / 3.0) < 1e-8);
        CHECK(std::fabs(y[1] + 1.0 / 3.0) < 1e-8);
    }

    SUBCASE("pure rho-quadratic with u = 0 lands on 0") {
        const double rho = 0.7;
        auto grad = [rho](const Vec& x) {
            Vec g(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = rho * x[i];
            return g;
        };
        const Vec y = solve_subproblem_generic(grad, {0.0, 0.0, 0.0}, rho,
                                               {3.0, -2.0, 0.5});
        CHECK(norm(y) < 1e-10);
    }

    SUBCASE("non-quadratic strongly convex gradient meets its residual") {
        // g(x) = sum log cosh(x_i) + (rho/2)||x||^2
        const double rho = 0.5;
        auto grad = [rho](const Vec& x) {
            Vec g(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                g[i] = std::tanh(x[i]) + rho * x[i];
            return g;
        };
        const Vec u{0.3, -1.1, 0.7};
        const Vec y = solve_subproblem_generic(grad, u, rho, {0.0, 0.0, 0.0});
        CHECK(dist(grad(y), u) <= 1e-10);
    }

    SUBCASE("budget exhaustion raises SubproblemFailure") {
        ToyProblem toy(4);
        auto grad = [&toy](const Vec& x) { return toy.grad_g(x); };
        CHECK_THROWS_AS(solve_subproblem_generic(grad, Vec(4, 5.0), 1.0,
                                                 Vec(4, 100.0), 1e-14, 2),
                        SubproblemFailure);
    }
}

TEST_CASE("estimate_rate") {
    SUBCASE("geometric decay is classified linear with the right factor") {
        Trace trace;
        for (int k = 0; k <= 40; ++k) {
            IterationRecord rec;
            rec.k = k;
            rec.phi_x = std::pow(2.0, -k);
            rec.phi_y = std::pow(2.0, -k - 1);
            trace.push_back(rec);
        }
        const RateEstimate est = estimate_rate(trace);
        CHECK(est.type == RateEstimate::Type::Linear);
        CHECK(std::fabs(est.rate - 0.5) < 0.01);
    }

    SUBCASE("constant trace is finite") {
        Trace trace;
        for (int k = 0; k < 10; ++k) {
            IterationRecord rec;
            rec.k = k;
            rec.phi_x = -2.0;
            rec.phi_y = -2.0;
            trace.push_back(rec);
        }
        CHECK(estimate_rate(trace).type == RateEstimate::Type::Finite);
    }

    SUBCASE("short traces are rejected") {
        Trace trace(4);
        CHECK_THROWS_AS(estimate_rate(trace), InsufficientTrace);
    }

    SUBCASE("a clustering run fits a linear rate in (0,1)") {
        Rng rng(29);
        Matrix data(60, 2);
        for (double& v : data.flat()) v = rng.normal(0.0, 10.0);
        ClusteringProblem problem(data, 3, 0.1);
        Vec x0(6);
        for (double& v : x0) v = rng.uniform(-10.0, 10.0);
        SolverParams params;
        const RunResult run = dca_run(problem, x0, params);
        REQUIRE(run.trace.size() >= 5);
        const RateEstimate est = estimate_rate(run.trace);
        CHECK(est.type == RateEstimate::Type::Linear);
        CHECK(est.rate > 0.0);
        CHECK(est.rate < 1.0);
    }
}

TEST_CASE("parallel runs on a shared problem match sequential runs") {
    Rng rng(41);
    Matrix data(40, 2);
    for (double& v : data.flat()) v = rng.normal(0.0, 10.0);
    const ClusteringProblem problem(data, 3, 0.1);
    SolverParams params;
    params.trial = TrialStepStrategy::self_adaptive(5.0);
    params.stopping = StoppingRule::rel_phi_tol(1e-5);

    std::vector<Vec> starts;
    for (int s = 0; s < 8; ++s) {
        Vec x0(6);
        for (double& v : x0) v = rng.uniform(-10.0, 10.0);
        starts.push_back(x0);
    }

    std::vector<double> sequential(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i)
        sequential[i] = bdca_run(problem, starts[i], params).phi_final;

    std::vector<double> parallel(starts.size());
    bench::parallel_for(starts.size(), 4, [&](std::size_t i) {
        parallel[i] = bdca_run(problem, starts[i], params).phi_final;
    });
    for (std::size_t i = 0; i < starts.size(); ++i)
        CHECK(sequential[i] == parallel[i]);
}

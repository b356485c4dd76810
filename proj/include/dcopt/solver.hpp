#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dcopt/matrix.hpp"
#include "dcopt/problem.hpp"

namespace dcopt {

// How the trial step fed to the backtracking line search is chosen.
//  - Zero: trial is always 0, which reproduces plain DCA.
//  - Constant: the same trial lambda1 > 0 every iteration.
//  - SelfAdaptive: trial 0 at iteration 0, lambda1 at iteration 1, then
//    gamma * lambda_{k-1} after two consecutive unreduced acceptances and
//    lambda_{k-1} otherwise.
struct TrialStepStrategy {
    enum class Kind { Zero, Constant, SelfAdaptive };

    Kind kind = Kind::Zero;
    double lambda1 = 0.0;
    double gamma = 2.0;

    static TrialStepStrategy zero() { return {}; }
    static TrialStepStrategy constant(double lambda_bar) {
        return {Kind::Constant, lambda_bar, 2.0};
    }
    static TrialStepStrategy self_adaptive(double lambda1, double gamma = 2.0) {
        return {Kind::SelfAdaptive, lambda1, gamma};
    }
};

// User stopping rule, evaluated after each completed iteration and after the
// critical-point test. phi_prev / phi_next denote phi(x_k) and phi(x_{k+1}).
struct StoppingRule {
    enum class Kind {
        DNormTol,       // ||d_k|| <= value
        RelPhiTol,      // |phi_prev - phi_next| <= value * (1 + |phi_next|)
        AbsPhiTarget,   // phi_next <= value
        PhiDecreaseTol, // phi_prev - phi_next < value
    };

    Kind kind = Kind::DNormTol;
    double value = 0.0; // the default never fires; the critical-point test governs

    static StoppingRule d_norm_tol(double eps) { return {Kind::DNormTol, eps}; }
    static StoppingRule rel_phi_tol(double eps) { return {Kind::RelPhiTol, eps}; }
    static StoppingRule abs_phi_target(double target) { return {Kind::AbsPhiTarget, target}; }
    static StoppingRule phi_decrease_tol(double eps) { return {Kind::PhiDecreaseTol, eps}; }
};

struct SolverParams {
    double alpha = 0.1; // line-search coefficient, > 0
    double beta = 0.5;  // backtrack factor, in (0,1)
    TrialStepStrategy trial;
    StoppingRule stopping;
    int max_iter = 10000;
    double lambda_min = 1e-12; // backtracking floor
    int max_backtracks = 50;
    double critical_tol = 1e-8; // scaled by 1 + ||x_k||

    void validate() const; // throws std::invalid_argument
};

struct IterationRecord {
    int k = 0;
    double phi_x = 0.0;      // phi(x_k)
    double phi_y = 0.0;      // phi(y_k)
    double d_norm = 0.0;     // ||y_k - x_k||
    double lambda_bar = 0.0; // trial step
    double lambda = 0.0;     // accepted step; 0 when the guard fired or the trial was 0
    int backtracks = 0;
    double elapsed = 0.0; // seconds since run start
};

using Trace = std::vector<IterationRecord>;

enum class StopReason { CriticalPoint, StoppingRuleMet, MaxIter };

const char* to_string(StopReason reason);

struct RunResult {
    Vec x_final;
    double phi_final = 0.0;
    StopReason reason = StopReason::MaxIter;
    Trace trace;
    double criticality_residual = 0.0; // ||grad_g(x_final) - subgrad_h(x_final)||
    double wall_seconds = 0.0;

    int iterations() const { return static_cast<int>(trace.size()); }
};

struct LineSearchResult {
    double lambda = 0.0;
    int backtracks = 0;
    double phi_accepted = 0.0; // phi(y + lambda d) as evaluated by the search
};

// One DCA step: u = subgrad_h(x), y = argmin g - <u,.>. Verifies the
// subproblem optimality residual and throws SubproblemFailure when it
// exceeds the problem's tolerance.
std::pair<Vec, Vec> dca_step(const DcProblem& problem, const Vec& x);

// Backtracking search for the largest lambda in {lambda_bar * beta^i} with
// phi(y + lambda d) <= phi(y) - alpha lambda^2 ||d||^2. Returns lambda = 0
// when the trial is 0 or when the max_backtracks / lambda_min guard fires
// (the step degrades to plain DCA); never throws. Non-finite trial values
// are rejected like failed tests.
LineSearchResult line_search(const std::function<double(const Vec&)>& phi,
                             const Vec& y, const Vec& d, double phi_y,
                             double d_norm_sq, double lambda_bar,
                             const SolverParams& params);

LineSearchResult line_search(const DcProblem& problem, const Vec& y,
                             const Vec& d, double lambda_bar,
                             const SolverParams& params);

struct StepPair {
    double trial = 0.0;
    double accepted = 0.0;
};

// Self-adaptive trial step rule from the last two (trial, accepted) pairs.
// If the carried value collapses below lambda_min (or to 0), restarts from
// strategy.lambda1 so the search never degenerates to DCA permanently.
double next_trial_step(const StepPair& prev2, const StepPair& prev1,
                       const TrialStepStrategy& strategy, double lambda_min);

RunResult bdca_run(const DcProblem& problem, const Vec& x0,
                   const SolverParams& params);

// Identical to bdca_run with TrialStepStrategy::zero() (shared loop).
RunResult dca_run(const DcProblem& problem, const Vec& x0,
                  const SolverParams& params);

} // namespace dcopt

#include "dcopt/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dcopt/errors.hpp"

namespace dcopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// relative slack for the descent inequalities; phi is a difference of two
// large parts, so exact comparisons are meaningless near convergence
double descent_slack(double phi_a, double phi_b) {
    return 1e-8 * (1.0 + std::fabs(phi_a) + std::fabs(phi_b));
}

double trial_for_iteration(int k, const TrialStepStrategy& strategy,
                           const StepPair& prev2, const StepPair& prev1,
                           double lambda_min) {
    switch (strategy.kind) {
    case TrialStepStrategy::Kind::Zero:
        return 0.0;
    case TrialStepStrategy::Kind::Constant:
        return strategy.lambda1;
    case TrialStepStrategy::Kind::SelfAdaptive:
        if (k == 0) return 0.0; // lambda_bar_0 = 0: the first step is plain DCA
        if (k == 1) return strategy.lambda1;
        return next_trial_step(prev2, prev1, strategy, lambda_min);
    }
    return 0.0;
}

} // namespace

void SolverParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("SolverParams: alpha must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("SolverParams: beta must be in (0,1)");
    if (!(lambda_min >= 0.0))
        throw std::invalid_argument("SolverParams: lambda_min must be >= 0");
    if (max_iter < 1) throw std::invalid_argument("SolverParams: max_iter must be >= 1");
    if (max_backtracks < 1)
        throw std::invalid_argument("SolverParams: max_backtracks must be >= 1");
    if (!(critical_tol >= 0.0))
        throw std::invalid_argument("SolverParams: critical_tol must be >= 0");
    if (trial.kind == TrialStepStrategy::Kind::Constant && !(trial.lambda1 > 0.0))
        throw std::invalid_argument("SolverParams: constant trial step must be > 0");
    if (trial.kind == TrialStepStrategy::Kind::SelfAdaptive) {
        if (!(trial.lambda1 > 0.0))
            throw std::invalid_argument("SolverParams: lambda1 must be > 0");
        if (!(trial.gamma > 1.0))
            throw std::invalid_argument("SolverParams: gamma must be > 1");
    }
}

const char* to_string(StopReason reason) {
    switch (reason) {
    case StopReason::CriticalPoint: return "critical-point";
    case StopReason::StoppingRuleMet: return "stopping-rule";
    case StopReason::MaxIter: return "max-iter";
    }
    return "unknown";
}

std::pair<Vec, Vec> dca_step(const DcProblem& problem, const Vec& x) {
    Vec u = problem.subgrad_h(x);
    Vec y = problem.solve_subproblem(u);
    const double residual = dist(problem.grad_g(y), u);
    if (residual > problem.subproblem_tolerance() * (1.0 + norm(u)))
        throw SubproblemFailure("subproblem residual " + std::to_string(residual) +
                                " exceeds tolerance");
    return {std::move(y), std::move(u)};
}

LineSearchResult line_search(const std::function<double(const Vec&)>& phi,
                             const Vec& y, const Vec& d, double phi_y,
                             double d_norm_sq, double lambda_bar,
                             const SolverParams& params) {
    LineSearchResult res;
    res.phi_accepted = phi_y;
    if (lambda_bar <= 0.0) return res; // pure DCA step

    double lambda = lambda_bar;
    Vec trial(y.size());
    while (true) {
        for (std::size_t i = 0; i < y.size(); ++i) trial[i] = y[i] + lambda * d[i];
        const double phi_trial = phi(trial);
        const double bound = phi_y - params.alpha * lambda * lambda * d_norm_sq;
        if (std::isfinite(phi_trial) && !(phi_trial > bound)) {
            res.lambda = lambda;
            res.phi_accepted = phi_trial;
            return res;
        }
        if (res.backtracks >= params.max_backtracks) break;
        lambda *= params.beta;
        ++res.backtracks;
        if (lambda < params.lambda_min) break;
    }
    res.lambda = 0.0;
    res.phi_accepted = phi_y;
    return res;
}

LineSearchResult line_search(const DcProblem& problem, const Vec& y,
                             const Vec& d, double lambda_bar,
                             const SolverParams& params) {
    const double phi_y = problem.eval_phi(y);
    return line_search([&problem](const Vec& z) { return problem.eval_phi(z); },
                       y, d, phi_y, norm_sq(d), lambda_bar, params);
}

double next_trial_step(const StepPair& prev2, const StepPair& prev1,
                       const TrialStepStrategy& strategy, double lambda_min) {
    const bool both_unreduced =
        prev2.accepted == prev2.trial && prev1.accepted == prev1.trial;
    double next = both_unreduced ? strategy.gamma * prev1.accepted : prev1.accepted;
    if (next < lambda_min || next <= 0.0) next = strategy.lambda1; // restart
    return next;
}

RunResult bdca_run(const DcProblem& problem, const Vec& x0,
                   const SolverParams& params) {
    params.validate();
    if (x0.size() != problem.dimension())
        throw std::invalid_argument("bdca_run: x0 has size " +
                                    std::to_string(x0.size()) + ", expected " +
                                    std::to_string(problem.dimension()));
    if (!all_finite(x0)) throw NonFiniteValue("bdca_run: x0 is not finite");

    const auto t0 = Clock::now();
    const double rho = problem.strong_convexity_modulus();
    auto phi_fn = [&problem](const Vec& z) { return problem.eval_phi(z); };

    RunResult result;
    result.trace.reserve(64);

    Vec x = x0;
    double phi_x = problem.eval_phi(x);
    if (!std::isfinite(phi_x)) throw NonFiniteValue("bdca_run: phi(x0) is not finite");

    StepPair prev2, prev1;
    StopReason reason = StopReason::MaxIter;
    double residual = -1.0;

    for (int k = 0; k < params.max_iter; ++k) {
        auto [y, u] = dca_step(problem, x);
        const Vec d = subtract(y, x);
        const double dn_sq = norm_sq(d);
        const double dn = std::sqrt(dn_sq);

        const double phi_y = problem.eval_phi(y);
        if (!std::isfinite(phi_y)) throw NonFiniteValue("bdca_run: phi(y) is not finite");

        const double eps_crit = params.critical_tol * (1.0 + norm(x));
        if (dn <= eps_crit) {
            // d is already negligible; certify criticality at y, where the
            // subproblem pins grad_g(y) = u, before stopping
            const double r = dist(problem.grad_g(y), problem.subgrad_h(y));
            if (r <= eps_crit) {
                result.trace.push_back(
                    {k, phi_x, phi_y, dn, 0.0, 0.0, 0, seconds_since(t0)});
                x = std::move(y);
                phi_x = phi_y;
                reason = StopReason::CriticalPoint;
                residual = r;
                break;
            }
            // the subgradient selection disagrees at this scale; keep going
        }

        if (phi_y > phi_x - rho * dn_sq + descent_slack(phi_x, phi_y))
            throw SolverError("descent invariant violated: phi(y_k) > phi(x_k) - rho||d||^2");

        const double lambda_bar =
            trial_for_iteration(k, params.trial, prev2, prev1, params.lambda_min);
        const LineSearchResult ls =
            line_search(phi_fn, y, d, phi_y, dn_sq, lambda_bar, params);

        Vec x_next = ls.lambda == 0.0 ? std::move(y) : add_scaled(y, ls.lambda, d);
        const double phi_next = ls.phi_accepted;
        if (phi_next > phi_y - params.alpha * ls.lambda * ls.lambda * dn_sq)
            throw SolverError("line search certificate violated");

        result.trace.push_back(
            {k, phi_x, phi_y, dn, lambda_bar, ls.lambda, ls.backtracks, seconds_since(t0)});

        bool stop = false;
        switch (params.stopping.kind) {
        case StoppingRule::Kind::DNormTol:
            stop = dn <= params.stopping.value;
            break;
        case StoppingRule::Kind::RelPhiTol:
            stop = std::fabs(phi_x - phi_next) <=
                   params.stopping.value * (1.0 + std::fabs(phi_next));
            break;
        case StoppingRule::Kind::AbsPhiTarget:
            stop = phi_next <= params.stopping.value;
            break;
        case StoppingRule::Kind::PhiDecreaseTol:
            stop = phi_x - phi_next < params.stopping.value;
            break;
        }

        x = std::move(x_next);
        phi_x = phi_next;
        prev2 = prev1;
        prev1 = {lambda_bar, ls.lambda};

        if (stop) {
            reason = StopReason::StoppingRuleMet;
            break;
        }
    }

    result.x_final = std::move(x);
    result.phi_final = phi_x;
    result.reason = reason;
    result.criticality_residual =
        residual >= 0.0
            ? residual
            : dist(problem.grad_g(result.x_final), problem.subgrad_h(result.x_final));
    result.wall_seconds = seconds_since(t0);
    return result;
}

RunResult dca_run(const DcProblem& problem, const Vec& x0,
                  const SolverParams& params) {
    SolverParams p = params;
    p.trial = TrialStepStrategy::zero();
    return bdca_run(problem, x0, p);
}

} // namespace dcopt

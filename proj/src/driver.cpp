#include "kcsp/driver.hpp"

#include <algorithm>
#include <cmath>

#include "kcsp/rounding.hpp"

namespace kcsp {

double per_trial_alpha(int k, int d) {
    if (k < 1 || d < 2) throw std::invalid_argument("per_trial_alpha: need k >= 1, d >= 2");
    const double dk = std::pow(static_cast<double>(d), k);
    return std::min(static_cast<double>(k) * d / 64.0, 2.0 * std::exp(k / 8.0)) / (4.0 * dk);
}

double amplification_bound(double alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::domain_error("amplification_bound: alpha must lie in (0,1]");
    return alpha / (2.0 - alpha);
}

namespace {

long long trial_budget(const Instance& inst, double alpha, long long max_rounds) {
    const double dk = std::pow(static_cast<double>(inst.d), inst.k);
    long long n = dk > 1e6 ? 1'000'000 : static_cast<long long>(std::llround(dk));
    const double want = std::ceil(10.0 / alpha);
    const long long auto_budget =
        std::max<long long>(want > 1e6 ? 1'000'000 : static_cast<long long>(want), 100);
    n = std::max(n, auto_budget);
    if (max_rounds > 0) n = std::min(n, max_rounds);
    return std::max<long long>(n, 1);
}

// Deterministic assignment satisfying the one clause of a single-clause
// instance; unconstrained variables get value 1.
Assignment single_clause_assignment(const Instance& inst) {
    Assignment a;
    a.values.assign(static_cast<std::size_t>(inst.n), 1);
    for (const auto& [var, val] : inst.clauses.front().pairs)
        a.values[static_cast<std::size_t>(var)] = val;
    return a;
}

}  // namespace

SolveReport solve_with_solution(const Instance& inst, const SdpSolution& sol,
                                const DriverConfig& cfg) {
    if (inst.clauses.empty())
        throw std::invalid_argument("solve: instance has no clauses");

    SolveReport rep;
    rep.alpha = per_trial_alpha(inst.k, inst.d);
    rep.alpha_claimed = inst.d >= 113;
    rep.sdp_objective = sol.objective();

    const long long trials = trial_budget(inst, rep.alpha, cfg.max_rounds);
    rep.per_iteration_values.reserve(static_cast<std::size_t>(trials) +
                                     (inst.clauses.size() == 1 ? 1 : 0));

    const RoundContext ctx(inst, sol);
    const Rng root(cfg.seed);

    rep.best_value = -1;
    auto consider = [&](Assignment&& a) {
        const long long v = assignment_value(inst, a);
        rep.per_iteration_values.push_back(v);
        if (v > rep.best_value) {
            rep.best_value = v;
            rep.best_assignment = std::move(a);
        }
    };

    if (inst.clauses.size() == 1) consider(single_clause_assignment(inst));
    for (long long t = 0; t < trials; ++t) {
        Rng rng = root.substream(0x607, static_cast<std::uint64_t>(t));
        consider(round_general(ctx, rng));
    }
    rep.iterations_run = static_cast<long long>(rep.per_iteration_values.size());
    return rep;
}

SolveReport solve(const Instance& inst, const DriverConfig& cfg) {
    if (inst.clauses.empty())
        throw std::invalid_argument("solve: instance has no clauses");

    SolverConfig sdp_cfg = cfg.sdp;
    if (sdp_cfg.seed == SolverConfig{}.seed) sdp_cfg.seed = mix64(cfg.seed ^ 0x5D9);
    const SolveSdpResult sdp = solve_sdp(inst, sdp_cfg);

    SolveReport rep = solve_with_solution(inst, sdp.solution, cfg);
    rep.solver_converged = sdp.converged;
    rep.max_residual = sdp.report.max_residual();
    return rep;
}

}  // namespace kcsp

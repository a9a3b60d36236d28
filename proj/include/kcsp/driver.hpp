#pragma once

#include <cstdint>
#include <vector>

#include "kcsp/instance.hpp"
#include "kcsp/sdp.hpp"

namespace kcsp {

struct DriverConfig {
    std::uint64_t seed = 1;
    long long max_rounds = 0;  // 0 = automatic budget (see solve)
    SolverConfig sdp;          // sdp.seed is derived from seed when left at default
};

struct SolveReport {
    Assignment best_assignment;
    long long best_value = 0;
    double sdp_objective = 0.0;
    long long iterations_run = 0;
    double alpha = 0.0;        // per-trial guarantee constant min(kd/64, 2e^{k/8})/(4 d^k)
    bool alpha_claimed = false;  // the constant is only claimed for d >= 113
    std::vector<long long> per_iteration_values;
    bool solver_converged = true;
    double max_residual = 0.0;
    // filled by the boolean pipeline only
    double beta0 = 0.0;
    double alpha0 = 0.0;
};

// min(kd/64, 2 e^{k/8}) / (4 d^k)
double per_trial_alpha(int k, int d);

// Per-trial success floor alpha/(2 - alpha) for the event
// {value >= alpha * OPT / 2}; alpha must lie in (0, 1].
double amplification_bound(double alpha);

// End-to-end algorithm: solve the SDP, run the general rounding scheme for
// N trials, return the best assignment (ties by first occurrence).
//
// N is min(max(d^k, ceil(10/alpha) capped at 1e6, 100), cfg.max_rounds when
// set).  For single-clause instances the deterministic satisfying assignment
// is emitted as trial 0.
SolveReport solve(const Instance& inst, const DriverConfig& cfg = {});

// Rounding stage alone, against a caller-provided solution.
SolveReport solve_with_solution(const Instance& inst, const SdpSolution& sol,
                                const DriverConfig& cfg = {});

}  // namespace kcsp

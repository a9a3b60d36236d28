#pragma once

#include <cstdint>
#include <vector>

#include "kcsp/instance.hpp"
#include "kcsp/rounding.hpp"
#include "kcsp/sdp.hpp"

namespace kcsp {

enum class Scheme { Uniform, Survival, SmallR, General, Boolean };

const char* scheme_name(Scheme s);
// Throws std::invalid_argument for an unknown name.
Scheme scheme_from_name(const std::string& name);

struct ProbeResult {
    int clause_id = 0;
    long long trials = 0;
    long long successes = 0;
    double p_hat = 0.0;
    double std_err = 0.0;  // sqrt(p_hat (1 - p_hat) / trials)
    double bound = 0.0;
    bool bound_claimed = false;  // false => bound reported as 0 ("not claimed")
    bool pass = false;           // p_hat >= bound - 3 * std_err
};

// Closed-form per-clause satisfaction lower bound for the scheme:
//   Uniform:  min(z^2 |C| d/8,  e^{|C|})     / (2 d^{|C|}),  claimed for d >= 57
//   Survival: min(z^2 |C| d/64, e^{|C|/4})   / (2 d^{|C|}),  claimed for d >= 113 and r >= |C|/4
//   SmallR:   e^{|C|/8} / d^{|C|},                            claimed for d >= 113 and r <= |C|/4
//   General:  min(z^2 |C| d/64, 2 e^{|C|/8}) / (4 d^{|C|}),  claimed for d >= 113
//   Boolean:  clause_bound_integral(|C|, sqrt(|C|) ||z||),    claimed for d = 2
// When not claimed the returned bound is 0.
double bound_for_clause(Scheme scheme, const ClauseStats& stats, int d,
                        bool* claimed = nullptr);

// Runs the scheme `trials` times with independent substreams of `seed`
// (trial t uses substream(0xE57, t)) and counts how often the one clause is
// satisfied.  Trials are distributed over threads; results do not depend on
// the thread count.  For Scheme::Boolean the rounding is round_boolean with
// the given p_mix (default 1: the pure projection branch).
ProbeResult estimate_clause_probability(const Instance& inst, const SdpSolution& sol,
                                        Scheme scheme, int clause_idx, long long trials,
                                        std::uint64_t seed, double p_mix = 1.0);

// One ProbeResult per clause of the instance.
std::vector<ProbeResult> probe_all_clauses(const Instance& inst, const SdpSolution& sol,
                                           Scheme scheme, long long trials, std::uint64_t seed,
                                           double p_mix = 1.0);

// Worker threads used by the estimator: KCSP_THREADS when set, otherwise
// hardware concurrency (at least 1).
int thread_count();

}  // namespace kcsp

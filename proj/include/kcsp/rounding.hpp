#pragma once

#include <vector>

#include "kcsp/instance.hpp"
#include "kcsp/rng.hpp"
#include "kcsp/sdp.hpp"

namespace kcsp {

// Per-variable split into the ceil(d/2) shortest and floor(d/2) longest
// indicator vectors.  Equal norms are broken by value index (smaller index
// counts as shorter); variables without vectors behave as all-zero and get
// the default split S = {1..ceil(d/2)}.
struct Partition {
    std::vector<std::vector<int>> S;  // indexed by variable; values ascending
    std::vector<std::vector<int>> L;
};

struct ClauseStats {
    int length = 0;
    int r = 0;  // |{(u,i) in C : i in S_u}|
    double z_norm_sq = 0.0;
};

Partition compute_partition(const SdpSolution& sol, const Instance& inst);
std::vector<ClauseStats> compute_clause_stats(const SdpSolution& sol, const Instance& inst,
                                              const Partition& part);

// Immutable precomputed state shared by repeated rounding trials.
struct RoundContext {
    const Instance* inst = nullptr;
    const SdpSolution* sol = nullptr;
    Partition part;
    std::vector<ClauseStats> stats;

    RoundContext(const Instance& instance, const SdpSolution& solution);
};

enum class UniformBranch {
    Mixture,      // fair coin between the two branches (the scheme itself)
    ArgmaxOnly,   // x': argmax_i |<u_i, g>| with one shared Gaussian g
    UniformOnly,  // x'': independent uniform values
};

// Gaussian-projection rounding for uniform solutions.  Argmax ties go to the
// lowest value index; variables without vectors draw uniform values.
Assignment round_uniform(const RoundContext& ctx, Rng& rng,
                         UniformBranch branch = UniformBranch::Mixture);

// Partial-assignment reduction: each variable independently receives a
// uniform value from L_u with probability |L_u|/d, else stays unassigned;
// surviving clauses restrict to the S_u sub-domain and are rounded by the
// uniform scheme; remaining unassigned variables draw uniformly from S_u.
Assignment round_survival(const RoundContext& ctx, Rng& rng);

// Independent per variable: value uniform over L_u with probability 3/4,
// else uniform over S_u.
Assignment round_smallr(const RoundContext& ctx, Rng& rng);

// Fair coin between round_survival and round_smallr.
Assignment round_general(const RoundContext& ctx, Rng& rng);

Assignment round_uniform(const Instance& inst, const SdpSolution& sol, Rng& rng);
Assignment round_survival(const Instance& inst, const SdpSolution& sol, Rng& rng);
Assignment round_smallr(const Instance& inst, const SdpSolution& sol, Rng& rng);
Assignment round_general(const Instance& inst, const SdpSolution& sol, Rng& rng);

// The partial-assignment step alone, for survival-probability diagnostics.
struct SurvivalStep {
    std::vector<int> partial;    // per variable: assigned value, or 0
    std::vector<int> survived;   // surviving clause indices
};
SurvivalStep survival_partial_step(const RoundContext& ctx, Rng& rng);

// Materialized sub-instance for a survival step (diagnostics/tests): clauses
// are the non-empty restrictions of surviving clauses, every unassigned
// variable in their supports becomes a sub-variable with domain S_u relabeled
// to [1, ceil(d/2)], u-vectors are reused and z vectors carried over.
struct SurvivalSubInstance {
    Instance inst;
    SdpSolution sol;
    std::vector<int> parent_var;              // sub var -> parent var
    std::vector<int> parent_clause;           // sub clause -> parent clause index
    std::vector<std::vector<int>> value_map;  // sub var -> (sub value -> parent value)
};
SurvivalSubInstance build_survival_subinstance(const RoundContext& ctx, const SurvivalStep& step);

}  // namespace kcsp

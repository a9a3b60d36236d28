#include "kcsp/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kcsp/gauss.hpp"
#include "kcsp/linalg.hpp"

namespace kcsp {

namespace {

// Missing vectors (absent variables or values beyond what a solution file
// carried) act as zero vectors.
double vec_norm_sq(const std::vector<std::vector<double>>& vecs, int val) {
    if (val < 1 || static_cast<std::size_t>(val) > vecs.size()) return 0.0;
    return norm_sq(vecs[static_cast<std::size_t>(val - 1)]);
}

// |<u_i, g>| argmax over the given values; ties go to the lowest value.
int argmax_abs_projection(const std::vector<std::vector<double>>& vecs,
                          const std::vector<int>& values, const std::vector<double>& g) {
    int arg = values.front();
    double best = -1.0;
    for (int val : values) {
        const bool present = val >= 1 && static_cast<std::size_t>(val) <= vecs.size();
        const double p =
            present ? std::abs(dot(vecs[static_cast<std::size_t>(val - 1)], g)) : 0.0;
        if (p > best) {
            best = p;
            arg = val;
        }
    }
    return arg;
}

std::vector<int> all_values(int d) {
    std::vector<int> v(static_cast<std::size_t>(d));
    std::iota(v.begin(), v.end(), 1);
    return v;
}

}  // namespace

Partition compute_partition(const SdpSolution& sol, const Instance& inst) {
    Partition part;
    part.S.resize(static_cast<std::size_t>(inst.n));
    part.L.resize(static_cast<std::size_t>(inst.n));
    const int short_count = (inst.d + 1) / 2;  // ceil(d/2)

    std::vector<std::pair<double, int>> order(static_cast<std::size_t>(inst.d));
    for (int v = 0; v < inst.n; ++v) {
        auto it = sol.u.find(v);
        for (int val = 1; val <= inst.d; ++val) {
            const double nn = it == sol.u.end() ? 0.0 : vec_norm_sq(it->second, val);
            order[static_cast<std::size_t>(val - 1)] = {nn, val};
        }
        std::sort(order.begin(), order.end());  // (norm^2, value) ascending
        auto& s = part.S[static_cast<std::size_t>(v)];
        auto& l = part.L[static_cast<std::size_t>(v)];
        for (int i = 0; i < inst.d; ++i) {
            if (i < short_count)
                s.push_back(order[static_cast<std::size_t>(i)].second);
            else
                l.push_back(order[static_cast<std::size_t>(i)].second);
        }
        std::sort(s.begin(), s.end());
        std::sort(l.begin(), l.end());
    }
    return part;
}

std::vector<ClauseStats> compute_clause_stats(const SdpSolution& sol, const Instance& inst,
                                              const Partition& part) {
    std::vector<ClauseStats> stats;
    stats.reserve(inst.clauses.size());
    for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
        ClauseStats cs;
        cs.length = inst.clauses[c].length();
        cs.z_norm_sq = c < sol.z.size() ? norm_sq(sol.z[c]) : 0.0;
        for (const auto& [var, val] : inst.clauses[c].pairs) {
            const auto& s = part.S[static_cast<std::size_t>(var)];
            if (std::binary_search(s.begin(), s.end(), val)) ++cs.r;
        }
        stats.push_back(cs);
    }
    return stats;
}

RoundContext::RoundContext(const Instance& instance, const SdpSolution& solution)
    : inst(&instance), sol(&solution) {
    part = compute_partition(solution, instance);
    stats = compute_clause_stats(solution, instance, part);
}

Assignment round_uniform(const RoundContext& ctx, Rng& rng, UniformBranch branch) {
    const Instance& inst = *ctx.inst;
    const SdpSolution& sol = *ctx.sol;
    Assignment a;
    a.values.assign(static_cast<std::size_t>(inst.n), 1);

    bool use_argmax;
    switch (branch) {
        case UniformBranch::ArgmaxOnly: use_argmax = true; break;
        case UniformBranch::UniformOnly: use_argmax = false; break;
        default: use_argmax = rng.coin(); break;
    }

    if (use_argmax) {
        const std::vector<double> g = sample_gaussian_vector(sol.dim, rng);
        const std::vector<int> values = all_values(inst.d);
        for (int v = 0; v < inst.n; ++v) {
            auto it = sol.u.find(v);
            if (it == sol.u.end())
                a.values[static_cast<std::size_t>(v)] =
                    1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(inst.d)));
            else
                a.values[static_cast<std::size_t>(v)] = argmax_abs_projection(it->second, values, g);
        }
    } else {
        for (int v = 0; v < inst.n; ++v)
            a.values[static_cast<std::size_t>(v)] =
                1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(inst.d)));
    }
    return a;
}

SurvivalStep survival_partial_step(const RoundContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    SurvivalStep step;
    step.partial.assign(static_cast<std::size_t>(inst.n), 0);

    // One draw per variable: an index below |L_u| assigns that element of
    // L_u, anything else leaves the variable unassigned.  This realizes the
    // |L_u|/d x uniform-on-L_u law exactly.
    for (int v = 0; v < inst.n; ++v) {
        const auto& l = ctx.part.L[static_cast<std::size_t>(v)];
        const auto idx = rng.uniform_int(static_cast<std::uint64_t>(inst.d));
        if (idx < l.size()) step.partial[static_cast<std::size_t>(v)] = l[idx];
    }

    for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
        bool survives = true;
        for (const auto& [var, val] : inst.clauses[c].pairs) {
            const int assigned = step.partial[static_cast<std::size_t>(var)];
            if (assigned != 0) {
                if (assigned != val) {
                    survives = false;
                    break;
                }
            } else {
                const auto& s = ctx.part.S[static_cast<std::size_t>(var)];
                if (!std::binary_search(s.begin(), s.end(), val)) {
                    survives = false;
                    break;
                }
            }
        }
        if (survives) step.survived.push_back(static_cast<int>(c));
    }
    return step;
}

Assignment round_survival(const RoundContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const SdpSolution& sol = *ctx.sol;
    const SurvivalStep step = survival_partial_step(ctx, rng);

    // Sub-variables: unassigned variables inside a surviving clause's
    // non-empty restriction, in increasing variable order.
    std::vector<bool> in_sub(static_cast<std::size_t>(inst.n), false);
    for (int c : step.survived)
        for (const auto& [var, val] : inst.clauses[static_cast<std::size_t>(c)].pairs)
            if (step.partial[static_cast<std::size_t>(var)] == 0)
                in_sub[static_cast<std::size_t>(var)] = true;

    Assignment a;
    a.values.assign(static_cast<std::size_t>(inst.n), 1);
    for (int v = 0; v < inst.n; ++v)
        if (step.partial[static_cast<std::size_t>(v)] != 0)
            a.values[static_cast<std::size_t>(v)] = step.partial[static_cast<std::size_t>(v)];

    // Uniform-scheme round of the sub-instance over the S_u domains, realized
    // against the parent vectors (sub vector j is exactly u_{S_u[j]}).
    bool any_sub_vectors = false;
    for (int v = 0; v < inst.n && !any_sub_vectors; ++v)
        any_sub_vectors = in_sub[static_cast<std::size_t>(v)] && sol.u.count(v) > 0;

    const bool use_argmax = rng.coin();
    if (use_argmax) {
        std::vector<double> g;
        if (any_sub_vectors) g = sample_gaussian_vector(sol.dim, rng);
        for (int v = 0; v < inst.n; ++v) {
            if (!in_sub[static_cast<std::size_t>(v)]) continue;
            const auto& s = ctx.part.S[static_cast<std::size_t>(v)];
            auto it = sol.u.find(v);
            if (it == sol.u.end())
                a.values[static_cast<std::size_t>(v)] =
                    s[rng.uniform_int(static_cast<std::uint64_t>(s.size()))];
            else
                a.values[static_cast<std::size_t>(v)] = argmax_abs_projection(it->second, s, g);
        }
    } else {
        for (int v = 0; v < inst.n; ++v) {
            if (!in_sub[static_cast<std::size_t>(v)]) continue;
            const auto& s = ctx.part.S[static_cast<std::size_t>(v)];
            a.values[static_cast<std::size_t>(v)] =
                s[rng.uniform_int(static_cast<std::uint64_t>(s.size()))];
        }
    }

    // Unassigned variables outside every surviving clause: uniform over S_u.
    for (int v = 0; v < inst.n; ++v) {
        if (step.partial[static_cast<std::size_t>(v)] != 0 || in_sub[static_cast<std::size_t>(v)])
            continue;
        const auto& s = ctx.part.S[static_cast<std::size_t>(v)];
        a.values[static_cast<std::size_t>(v)] =
            s[rng.uniform_int(static_cast<std::uint64_t>(s.size()))];
    }
    return a;
}

Assignment round_smallr(const RoundContext& ctx, Rng& rng) {
    const Instance& inst = *ctx.inst;
    Assignment a;
    a.values.assign(static_cast<std::size_t>(inst.n), 1);
    for (int v = 0; v < inst.n; ++v) {
        const bool take_long = rng.uniform() < 0.75;
        const auto& side =
            take_long ? ctx.part.L[static_cast<std::size_t>(v)] : ctx.part.S[static_cast<std::size_t>(v)];
        a.values[static_cast<std::size_t>(v)] =
            side[rng.uniform_int(static_cast<std::uint64_t>(side.size()))];
    }
    return a;
}

Assignment round_general(const RoundContext& ctx, Rng& rng) {
    return rng.coin() ? round_survival(ctx, rng) : round_smallr(ctx, rng);
}

Assignment round_uniform(const Instance& inst, const SdpSolution& sol, Rng& rng) {
    RoundContext ctx(inst, sol);
    return round_uniform(ctx, rng);
}
Assignment round_survival(const Instance& inst, const SdpSolution& sol, Rng& rng) {
    RoundContext ctx(inst, sol);
    return round_survival(ctx, rng);
}
Assignment round_smallr(const Instance& inst, const SdpSolution& sol, Rng& rng) {
    RoundContext ctx(inst, sol);
    return round_smallr(ctx, rng);
}
Assignment round_general(const Instance& inst, const SdpSolution& sol, Rng& rng) {
    RoundContext ctx(inst, sol);
    return round_general(ctx, rng);
}

SurvivalSubInstance build_survival_subinstance(const RoundContext& ctx, const SurvivalStep& step) {
    const Instance& inst = *ctx.inst;
    const SdpSolution& sol = *ctx.sol;

    SurvivalSubInstance sub;
    sub.inst.d = (inst.d + 1) / 2;

    std::vector<int> sub_index(static_cast<std::size_t>(inst.n), -1);
    for (int c : step.survived) {
        Clause restricted;
        for (const auto& [var, val] : inst.clauses[static_cast<std::size_t>(c)].pairs) {
            if (step.partial[static_cast<std::size_t>(var)] != 0) continue;
            if (sub_index[static_cast<std::size_t>(var)] < 0) {
                sub_index[static_cast<std::size_t>(var)] = static_cast<int>(sub.parent_var.size());
                sub.parent_var.push_back(var);
            }
            const auto& s = ctx.part.S[static_cast<std::size_t>(var)];
            const int pos = static_cast<int>(std::lower_bound(s.begin(), s.end(), val) - s.begin());
            restricted.pairs.emplace_back(sub_index[static_cast<std::size_t>(var)], pos + 1);
        }
        if (restricted.pairs.empty()) continue;  // satisfied outright by the partial step
        std::sort(restricted.pairs.begin(), restricted.pairs.end());
        sub.inst.clauses.push_back(std::move(restricted));
        sub.parent_clause.push_back(c);
    }
    sub.inst.n = std::max<int>(1, static_cast<int>(sub.parent_var.size()));
    sub.inst.recompute_k();

    sub.sol.dim = sol.dim;
    sub.value_map.resize(sub.parent_var.size());
    for (std::size_t sv = 0; sv < sub.parent_var.size(); ++sv) {
        const int var = sub.parent_var[sv];
        const auto& s = ctx.part.S[static_cast<std::size_t>(var)];
        sub.value_map[sv].assign(s.begin(), s.end());
        auto it = sol.u.find(var);
        if (it == sol.u.end()) continue;
        std::vector<std::vector<double>> vecs;
        vecs.reserve(s.size());
        for (int val : s)
            vecs.push_back(static_cast<std::size_t>(val) <= it->second.size()
                               ? it->second[static_cast<std::size_t>(val - 1)]
                               : std::vector<double>(static_cast<std::size_t>(sol.dim), 0.0));
        sub.sol.u.emplace(static_cast<int>(sv), std::move(vecs));
    }
    sub.sol.z.reserve(sub.parent_clause.size());
    for (int pc : sub.parent_clause)
        sub.sol.z.push_back(pc < static_cast<int>(sol.z.size())
                                ? sol.z[static_cast<std::size_t>(pc)]
                                : std::vector<double>(static_cast<std::size_t>(sol.dim), 0.0));
    return sub;
}

}  // namespace kcsp

#include "kcsp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "kcsp/boolean.hpp"
#include "kcsp/linalg.hpp"
#include "kcsp/stats.hpp"

namespace kcsp {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Uniform: return "uniform";
        case Scheme::Survival: return "survival";
        case Scheme::SmallR: return "smallr";
        case Scheme::General: return "general";
        case Scheme::Boolean: return "boolean";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "uniform") return Scheme::Uniform;
    if (name == "survival") return Scheme::Survival;
    if (name == "smallr") return Scheme::SmallR;
    if (name == "general") return Scheme::General;
    if (name == "boolean") return Scheme::Boolean;
    throw std::invalid_argument("unknown scheme: " + name);
}

double bound_for_clause(Scheme scheme, const ClauseStats& stats, int d, bool* claimed_out) {
    const int len = stats.length;
    const double z2 = stats.z_norm_sq;
    const double dlen = std::pow(static_cast<double>(d), len);
    bool claimed = false;
    double bound = 0.0;
    switch (scheme) {
        case Scheme::Uniform:
            claimed = d >= 57;
            bound = std::min(z2 * len * d / 8.0, std::exp(static_cast<double>(len))) / (2.0 * dlen);
            break;
        case Scheme::Survival:
            claimed = d >= 113 && 4 * stats.r >= len;
            bound = std::min(z2 * len * d / 64.0, std::exp(len / 4.0)) / (2.0 * dlen);
            break;
        case Scheme::SmallR:
            claimed = d >= 113 && 4 * stats.r <= len;
            bound = std::exp(len / 8.0) / dlen;
            break;
        case Scheme::General:
            claimed = d >= 113;
            bound = std::min(z2 * len * d / 64.0, 2.0 * std::exp(len / 8.0)) / (4.0 * dlen);
            break;
        case Scheme::Boolean:
            claimed = d == 2;
            bound = clause_bound_integral(len, std::sqrt(static_cast<double>(len) * z2));
            break;
    }
    if (!claimed) bound = 0.0;
    if (claimed_out) *claimed_out = claimed;
    return bound;
}

int thread_count() {
    if (const char* env = std::getenv("KCSP_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

ProbeResult estimate_clause_probability(const Instance& inst, const SdpSolution& sol,
                                        Scheme scheme, int clause_idx, long long trials,
                                        std::uint64_t seed, double p_mix) {
    if (clause_idx < 0 || clause_idx >= static_cast<int>(inst.clauses.size()))
        throw std::invalid_argument("estimate_clause_probability: clause index out of range");
    if (trials < 1) throw std::invalid_argument("estimate_clause_probability: trials must be >= 1");

    const RoundContext ctx(inst, sol);
    const Clause& clause = inst.clauses[static_cast<std::size_t>(clause_idx)];
    const Rng root(seed);

    auto run_range = [&](long long lo, long long hi) -> long long {
        long long hits = 0;
        for (long long t = lo; t < hi; ++t) {
            Rng rng = root.substream(0xE57, static_cast<std::uint64_t>(t));
            Assignment a;
            switch (scheme) {
                case Scheme::Uniform: a = round_uniform(ctx, rng); break;
                case Scheme::Survival: a = round_survival(ctx, rng); break;
                case Scheme::SmallR: a = round_smallr(ctx, rng); break;
                case Scheme::General: a = round_general(ctx, rng); break;
                case Scheme::Boolean: a = round_boolean(ctx, p_mix, rng); break;
            }
            if (clause_satisfied(clause, a)) ++hits;
        }
        return hits;
    };

    const int workers = std::min<long long>(thread_count(), trials) > 0
                            ? static_cast<int>(std::min<long long>(thread_count(), trials))
                            : 1;
    long long successes = 0;
    if (workers <= 1) {
        successes = run_range(0, trials);
    } else {
        std::vector<long long> partial(static_cast<std::size_t>(workers), 0);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const long long chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long long lo = w * chunk;
            const long long hi = std::min(trials, lo + chunk);
            pool.emplace_back([&, w, lo, hi] { partial[static_cast<std::size_t>(w)] = run_range(lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (long long p : partial) successes += p;
    }

    ProbeResult res;
    res.clause_id = clause_idx;
    res.trials = trials;
    res.successes = successes;
    res.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
    res.std_err = binomial_std_err(res.p_hat, trials);
    res.bound = bound_for_clause(scheme, ctx.stats[static_cast<std::size_t>(clause_idx)], inst.d,
                                 &res.bound_claimed);
    res.pass = res.p_hat >= res.bound - 3.0 * res.std_err;
    return res;
}

std::vector<ProbeResult> probe_all_clauses(const Instance& inst, const SdpSolution& sol,
                                           Scheme scheme, long long trials, std::uint64_t seed,
                                           double p_mix) {
    std::vector<ProbeResult> out;
    out.reserve(inst.clauses.size());
    for (int c = 0; c < static_cast<int>(inst.clauses.size()); ++c)
        out.push_back(estimate_clause_probability(inst, sol, scheme, c, trials,
                                                  mix64(seed ^ static_cast<std::uint64_t>(c)),
                                                  p_mix));
    return out;
}

}  // namespace kcsp

#include "kcsp/boolean.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kcsp/gauss.hpp"
#include "kcsp/linalg.hpp"
#include "kcsp/quadrature.hpp"

namespace kcsp {

Instance pad_clauses(const Instance& inst, int k) {
    if (inst.d != 2) throw std::invalid_argument("pad_clauses: requires d = 2");
    if (k < inst.k)
        throw std::invalid_argument("pad_clauses: instance has clauses longer than k");
    Instance out = inst;
    int next_var = out.n;
    for (Clause& c : out.clauses)
        while (c.length() < k) c.pairs.emplace_back(next_var++, 1);
    out.n = std::max(out.n, next_var);
    out.recompute_k();
    out.validate();
    return out;
}

double h_beta(double beta, double t) {
    if (!(beta >= 0.0)) throw std::domain_error("h_beta: beta must be >= 0");
    const double x = beta * t;
    if (x <= 0.0) return 0.0;
    return 2.0 * phi(x) * std::exp(-0.5 * t * t);
}

double g_of_beta(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("g_of_beta: beta must be > 0");
    // h_beta is unimodal on t > 0 with its peak below 10 for every beta
    // (h <= 2 e^{-t^2/2} collapses long before that).
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 10.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = h_beta(beta, x1), f2 = h_beta(beta, x2);
    for (int it = 0; it < 140 && hi - lo > 1e-11; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = h_beta(beta, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = h_beta(beta, x1);
        }
    }
    return h_beta(beta, 0.5 * (lo + hi));
}

BooleanConstants find_beta0() {
    BooleanConstants bc;
    double lo = 0.5, hi = 3.0;  // g(0.5) < 1 < g(3)
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g_of_beta(mid) < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    bc.beta0 = 0.5 * (lo + hi);
    bc.alpha0 = 1.0 / (bc.beta0 * bc.beta0);
    const int samples = 200;
    bc.g_samples.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double beta = 0.5 + (3.0 - 0.5) * i / (samples - 1);
        bc.g_samples.emplace_back(beta, g_of_beta(beta));
    }
    return bc;
}

double clause_bound_integral(int k, double beta) {
    if (k < 1) throw std::invalid_argument("clause_bound_integral: k must be >= 1");
    if (!(beta > 0.0)) return 0.0;

    // Locate the peak of h^k, then truncate where the integrand falls below
    // 1e-20 of it; the integrand is log-concave past the peak so the dropped
    // tail is negligible.
    const double peak = g_of_beta(beta);
    const double threshold = std::pow(10.0, -20.0 / k) * peak;  // h < this => h^k < 1e-20 peak^k
    double t_hi = 1.0;
    while (h_beta(beta, t_hi) > threshold && t_hi < 60.0) t_hi += 0.5;

    const auto integrand = [&](double t) { return std::pow(h_beta(beta, t), k); };
    const double integral = integrate_gk(integrand, 0.0, t_hi, 1e-9);
    return integral / (std::pow(2.0, k) * std::sqrt(2.0 * std::numbers::pi * k));
}

Assignment round_boolean(const RoundContext& ctx, double p_mix, Rng& rng) {
    const Instance& inst = *ctx.inst;
    const SdpSolution& sol = *ctx.sol;
    if (inst.d != 2) throw std::invalid_argument("round_boolean: requires d = 2");

    Assignment a;
    a.values.assign(static_cast<std::size_t>(inst.n), 1);
    const bool sdp_branch = rng.uniform() < p_mix;
    if (sdp_branch) {
        const std::vector<double> g = sample_gaussian_vector(sol.dim, rng);
        for (int v = 0; v < inst.n; ++v) {
            auto it = sol.u.find(v);
            if (it == sol.u.end() || it->second.size() < 2) {
                a.values[static_cast<std::size_t>(v)] = 1 + static_cast<int>(rng.uniform_int(2));
                continue;
            }
            const double s1 = dot(it->second[0], g);
            const double s2 = dot(it->second[1], g);
            if (s1 > s2)
                a.values[static_cast<std::size_t>(v)] = 1;
            else if (s2 > s1)
                a.values[static_cast<std::size_t>(v)] = 2;
            else
                a.values[static_cast<std::size_t>(v)] = 1 + static_cast<int>(rng.uniform_int(2));
        }
    } else {
        for (int v = 0; v < inst.n; ++v)
            a.values[static_cast<std::size_t>(v)] = 1 + static_cast<int>(rng.uniform_int(2));
    }
    return a;
}

Assignment round_boolean(const Instance& inst, const SdpSolution& sol, double p_mix, Rng& rng) {
    RoundContext ctx(inst, sol);
    return round_boolean(ctx, p_mix, rng);
}

SolveReport boolean_solve(const Instance& inst, const DriverConfig& cfg) {
    if (inst.d != 2) throw std::invalid_argument("boolean_solve: requires d = 2");
    if (inst.clauses.empty())
        throw std::invalid_argument("boolean_solve: instance has no clauses");

    const int k = inst.k;
    const Instance padded = pad_clauses(inst, k);

    SolverConfig sdp_cfg = cfg.sdp;
    if (sdp_cfg.seed == SolverConfig{}.seed) sdp_cfg.seed = mix64(cfg.seed ^ 0xB001);
    const SolveSdpResult sdp = solve_sdp(padded, sdp_cfg);

    const BooleanConstants bc = find_beta0();
    SolveReport rep;
    rep.beta0 = bc.beta0;
    rep.alpha0 = bc.alpha0;
    rep.alpha = bc.alpha0 * k / std::pow(2.0, k);  // asymptotic constant, reported only
    rep.alpha_claimed = false;
    rep.sdp_objective = sdp.solution.objective();
    rep.solver_converged = sdp.converged;
    rep.max_residual = sdp.report.max_residual();

    const double want = std::ceil(10.0 / rep.alpha);
    long long trials = std::max<long long>(
        {static_cast<long long>(std::min(std::pow(2.0, k), 1e6)),
         want > 1e6 ? 1'000'000 : static_cast<long long>(want), 100});
    if (cfg.max_rounds > 0) trials = std::min(trials, cfg.max_rounds);

    const double p_mix = 1.0 / k;
    const RoundContext ctx(padded, sdp.solution);
    const Rng root(cfg.seed);
    rep.best_value = -1;
    rep.per_iteration_values.reserve(static_cast<std::size_t>(trials));
    for (long long t = 0; t < trials; ++t) {
        Rng rng = root.substream(0xB007, static_cast<std::uint64_t>(t));
        Assignment a = round_boolean(ctx, p_mix, rng);
        const long long v = assignment_value(padded, a);
        rep.per_iteration_values.push_back(v);
        if (v > rep.best_value) {
            rep.best_value = v;
            rep.best_assignment = std::move(a);
        }
    }
    rep.iterations_run = trials;
    return rep;
}

}  // namespace kcsp

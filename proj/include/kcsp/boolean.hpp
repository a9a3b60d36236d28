#pragma once

#include <utility>
#include <vector>

#include "kcsp/driver.hpp"
#include "kcsp/instance.hpp"
#include "kcsp/rng.hpp"
#include "kcsp/rounding.hpp"
#include "kcsp/sdp.hpp"

namespace kcsp {

// Constants behind the boolean rounding guarantee: the root beta0 of
// g(beta) = 1, alpha0 = 1/beta0^2, and a plot-ready sampling of g.
struct BooleanConstants {
    double beta0 = 0.0;
    double alpha0 = 0.0;
    std::vector<std::pair<double, double>> g_samples;  // (beta, g(beta))
};

// Appends fresh variables (with value 1) to every clause shorter than k so
// all clauses have length exactly k.  Fresh variables are used once each, so
// the optimum value is unchanged.  Requires d = 2 and clause lengths <= k.
Instance pad_clauses(const Instance& inst, int k);

// h_beta(t) = 2 Phi(beta t) e^{-t^2/2}, with Phi the two-sided normal CDF
// (taken as 0 for negative arguments, so h vanishes for t < 0).
double h_beta(double beta, double t);

// g(beta) = max over t of h_beta(t); golden-section on the unimodal bracket.
double g_of_beta(double beta);

// Bisection root of g(beta) = 1 plus the g sampling over beta in [0.5, 3].
BooleanConstants find_beta0();

// (1/(2^k sqrt(2 pi k))) * integral_0^inf h_beta(t)^k dt
double clause_bound_integral(int k, double beta);

// Signed-argmax rounding for d = 2: with probability p_mix project on one
// shared Gaussian and take x_u = argmax_i <u_i, g> (exact ties: fair coin per
// variable); otherwise a uniform random assignment.
Assignment round_boolean(const RoundContext& ctx, double p_mix, Rng& rng);
Assignment round_boolean(const Instance& inst, const SdpSolution& sol, double p_mix, Rng& rng);

// Boolean pipeline: pad to k, solve the SDP, run round_boolean with
// p_mix = 1/k, best-of aggregation.  Values are measured on the padded
// instance; the first inst.n assignment entries are the original variables.
SolveReport boolean_solve(const Instance& inst, const DriverConfig& cfg = {});

}  // namespace kcsp

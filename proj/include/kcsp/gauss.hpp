#pragma once

#include <vector>

#include "kcsp/rng.hpp"

namespace kcsp {

// Two-sided standard normal CDF and tail:
//
//   phi(t)     = P{|xi| <= t}   for xi ~ N(0,1), t >= 0
//   phi_bar(t) = P{|xi| >  t} = 1 - phi(t)
//
// phi_bar is evaluated through the complementary error function rather than
// as 1 - phi, so relative accuracy survives deep into the tail (t up to ~37).

// P{|xi| <= t}; throws std::domain_error for t < 0 or non-finite t.
double phi(double t);

// P{|xi| > t}; same domain as phi.
double phi_bar(double t);

// Inverse tail: returns t > 0 with phi_bar(t) = p, |phi_bar(t) - p| <= 1e-10*p.
// Bisection bracket followed by Newton refinement.  p must lie in (0, 1).
double phi_bar_inverse(double p);

// Scaling inequality: phi_bar(beta*t) <= phi_bar(t)^(beta^2), for t > 0 and
// beta in (0, 1].  Returns true iff the inequality holds with additive slack
// 1e-12 (the inequality is exact in R; the slack absorbs rounding).
bool check_scaling_inequality(double t, double beta);

// Tail sandwich for t > 0, checked with 1e-13 slack:
//   2t/(sqrt(2 pi)(t^2+1)) e^{-t^2/2} < phi_bar(t) < 2/(sqrt(2 pi) t) e^{-t^2/2}
bool check_tail_sandwich(double t);

// dim independent standard normal components, fully determined by rng's state.
std::vector<double> sample_gaussian_vector(int dim, Rng& rng);

// Sampled tail table, mostly for the constants CLI and diagnostics.
struct TailGrid {
    struct Point {
        double t;
        double tail;  // phi_bar(t)
    };
    std::vector<Point> points;  // strictly increasing in t
    double resolution = 0.0;    // grid step
};

// count points spanning [t_min, t_max]; requires 0 < t_min < t_max, count >= 2.
TailGrid make_tail_grid(double t_min, double t_max, int count);

// Invariants: tail strictly decreasing, every value in (0, 1).
bool tail_grid_valid(const TailGrid& grid);

}  // namespace kcsp

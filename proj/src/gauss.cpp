#include "kcsp/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcsp {

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSqrt2Pi = 2.5066282746310005024;

void require_nonnegative(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::domain_error(std::string(who) + ": t must be finite and >= 0");
}
}  // namespace

double phi(double t) {
    require_nonnegative(t, "phi");
    // P{|xi| <= t} = erf(t / sqrt(2))
    return std::erf(t / kSqrt2);
}

double phi_bar(double t) {
    require_nonnegative(t, "phi_bar");
    return std::erfc(t / kSqrt2);
}

double phi_bar_inverse(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("phi_bar_inverse: p must lie strictly inside (0,1)");

    // Bracket: phi_bar(0) = 1 > p; phi_bar decays to 0 well before t = 40
    // for any p representable above DBL_MIN.
    double lo = 0.0, hi = 1.0;
    while (phi_bar(hi) > p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 64.0) break;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (phi_bar(mid) > p)
            lo = mid;
        else
            hi = mid;
    }

    // Newton refinement; phi_bar'(t) = -2 pdf(t) = -sqrt(2/pi) e^{-t^2/2}.
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double f = phi_bar(t) - p;
        const double df = -2.0 / kSqrt2Pi * std::exp(-0.5 * t * t);
        if (df == 0.0) break;
        const double step = f / df;
        const double next = t - step;
        if (next >= lo && next <= hi) t = next;
        if (std::abs(f) <= 1e-12 * p) break;
    }
    return std::max(t, 0.0);
}

bool check_scaling_inequality(double t, double beta) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::domain_error("check_scaling_inequality: t must be finite and > 0");
    if (!(beta > 0.0) || !(beta <= 1.0))
        throw std::domain_error("check_scaling_inequality: beta must lie in (0,1]");
    const double lhs = phi_bar(beta * t);
    const double rhs = std::pow(phi_bar(t), beta * beta);
    return lhs <= rhs + 1e-12;
}

bool check_tail_sandwich(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::domain_error("check_tail_sandwich: t must be finite and > 0");
    const double e = std::exp(-0.5 * t * t);
    const double lower = 2.0 * t / (kSqrt2Pi * (t * t + 1.0)) * e;
    const double upper = 2.0 / (kSqrt2Pi * t) * e;
    const double v = phi_bar(t);
    return lower < v + 1e-13 && v < upper + 1e-13;
}

std::vector<double> sample_gaussian_vector(int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("sample_gaussian_vector: dim must be >= 1");
    std::vector<double> g(static_cast<std::size_t>(dim));
    for (double& x : g) x = rng.gaussian();
    return g;
}

TailGrid make_tail_grid(double t_min, double t_max, int count) {
    if (!(t_min > 0.0) || !(t_max > t_min) || count < 2)
        throw std::invalid_argument("make_tail_grid: need 0 < t_min < t_max and count >= 2");
    TailGrid grid;
    grid.resolution = (t_max - t_min) / (count - 1);
    grid.points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = t_min + grid.resolution * i;
        grid.points.push_back({t, phi_bar(t)});
    }
    return grid;
}

bool tail_grid_valid(const TailGrid& grid) {
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const auto& p = grid.points[i];
        if (!(p.tail > 0.0) || !(p.tail < 1.0)) return false;
        if (i > 0 && !(p.tail < grid.points[i - 1].tail)) return false;
        if (i > 0 && !(p.t > grid.points[i - 1].t)) return false;
    }
    return true;
}

}  // namespace kcsp

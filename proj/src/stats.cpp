#include "kcsp/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace kcsp {

namespace {

// series expansion of P(a,x), valid for x < a + 1
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double lower_reg_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("lower_reg_gamma: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double upper_reg_gamma(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::domain_error("upper_reg_gamma: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, int df) {
    if (df < 1) throw std::domain_error("chi2_sf: df must be >= 1");
    if (x <= 0.0) return 1.0;
    return upper_reg_gamma(0.5 * df, 0.5 * x);
}

ChiSquareResult chi_square_gof(const std::vector<long long>& counts,
                               const std::vector<double>& probs) {
    if (counts.size() != probs.size() || counts.size() < 2)
        throw std::invalid_argument("chi_square_gof: need matching cell lists with >= 2 cells");
    long long n = 0;
    for (long long c : counts) n += c;
    if (n <= 0) throw std::invalid_argument("chi_square_gof: empty sample");

    ChiSquareResult res;
    res.df = static_cast<int>(counts.size()) - 1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(n);
        if (expected <= 0.0) throw std::invalid_argument("chi_square_gof: zero expected cell");
        const double diff = static_cast<double>(counts[i]) - expected;
        res.statistic += diff * diff / expected;
    }
    res.p_value = chi2_sf(res.statistic, res.df);
    return res;
}

double binomial_std_err(double p_hat, long long n) {
    if (n <= 0) throw std::invalid_argument("binomial_std_err: n must be positive");
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

}  // namespace kcsp

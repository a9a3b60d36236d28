#pragma once

#include <vector>

namespace kcsp {

// Regularized incomplete gamma functions: P(a,x) + Q(a,x) = 1.
double lower_reg_gamma(double a, double x);
double upper_reg_gamma(double a, double x);

// Chi-square survival function P{X >= x} for X ~ chi2(df).
double chi2_sf(double x, int df);

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Goodness-of-fit chi-square against the given cell probabilities.
ChiSquareResult chi_square_gof(const std::vector<long long>& counts,
                               const std::vector<double>& probs);

// Binomial standard error sqrt(p_hat (1 - p_hat) / n).
double binomial_std_err(double p_hat, long long n);

}  // namespace kcsp

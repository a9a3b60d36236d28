#include <doctest.h>

#include <cmath>

#include "kcsp/gauss.hpp"
#include "kcsp/stats.hpp"
#include "oracles.hpp"

using namespace kcsp;

TEST_CASE("phi basics and frozen values") {
    CHECK(phi(0.0) == 0.0);
    CHECK(phi(40.0) == doctest::Approx(1.0).epsilon(1e-12));
    // frozen from the quadrature oracle
    CHECK(phi(1.0) == doctest::Approx(0.6826894921).epsilon(1e-9));
    CHECK(phi(1.0) == doctest::Approx(oracle::phi_quadrature(1.0)).epsilon(1e-11));
    CHECK(phi(2.5) == doctest::Approx(oracle::phi_quadrature(2.5)).epsilon(1e-11));
    CHECK_THROWS_AS(phi(-0.1), std::domain_error);
    CHECK_THROWS_AS(phi(std::nan("")), std::domain_error);
}

TEST_CASE("phi_bar basics, deep tail against quadrature") {
    CHECK(phi_bar(0.0) == 1.0);
    CHECK(phi_bar(1.0) == doctest::Approx(0.3173105079).epsilon(1e-9));
    const double deep = phi_bar(6.0);
    CHECK(deep > 1e-10);
    CHECK(deep < 1e-8);
    CHECK(deep == doctest::Approx(oracle::phi_bar_quadrature(6.0)).epsilon(1e-6));
    CHECK_THROWS_AS(phi_bar(-1.0), std::domain_error);
}

TEST_CASE("phi/phi_bar complementarity and monotonicity") {
    double prev_phi = -1.0, prev_bar = 2.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = 40.0 * i / 400.0;
        const double p = phi(t), q = phi_bar(t);
        CHECK(std::abs(p + q - 1.0) <= 1e-12);
        if (i > 0 && t < 8.0) {  // strictly monotone where doubles can resolve it
            CHECK(p > prev_phi);
            CHECK(q < prev_bar);
        }
        prev_phi = p;
        prev_bar = q;
    }
}

TEST_CASE("phi_bar_inverse round trips and frozen values") {
    CHECK(phi_bar_inverse(phi_bar(2.5)) == doctest::Approx(2.5).epsilon(1e-8));
    CHECK(phi_bar_inverse(0.3173105079) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(phi_bar_inverse(1.0 - 1e-15) <= 1e-6);
    for (int i = 0; i <= 79; ++i) {
        const double t = 0.1 + (8.0 - 0.1) * i / 79.0;
        CHECK(phi_bar_inverse(phi_bar(t)) == doctest::Approx(t).epsilon(1e-6));
    }
    // relative accuracy at the tiny tail probabilities the threshold M needs
    const double p = std::pow(113.0, -10);
    const double t = phi_bar_inverse(p);
    CHECK(std::abs(phi_bar(t) - p) <= 1e-10 * p);
    CHECK_THROWS_AS(phi_bar_inverse(0.0), std::domain_error);
    CHECK_THROWS_AS(phi_bar_inverse(1.0), std::domain_error);
}

TEST_CASE("scaling inequality: examples and full grid") {
    CHECK(check_scaling_inequality(1.7, 1.0));
    CHECK(check_scaling_inequality(3.0, 0.5));
    int violations = 0;
    for (int i = 0; i < 400; ++i) {
        const double t = 0.01 + (20.0 - 0.01) * i / 399.0;
        for (int j = 0; j < 20; ++j) {
            const double beta = 0.05 + (1.0 - 0.05) * j / 19.0;
            if (!check_scaling_inequality(t, beta)) ++violations;
        }
    }
    CHECK(violations == 0);
    CHECK_THROWS_AS(check_scaling_inequality(0.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(check_scaling_inequality(1.0, 1.5), std::domain_error);
}

TEST_CASE("tail sandwich: examples and grid") {
    CHECK(check_tail_sandwich(1.0));
    CHECK(check_tail_sandwich(0.05));
    CHECK(check_tail_sandwich(10.0));
    int violations = 0;
    for (int i = 1; i <= 400; ++i)
        if (!check_tail_sandwich(20.0 * i / 400.0)) ++violations;
    CHECK(violations == 0);
    CHECK_THROWS_AS(check_tail_sandwich(0.0), std::domain_error);
}

TEST_CASE("gaussian sampling: determinism, shape, law of large numbers") {
    Rng a(42), b(42);
    const auto va = sample_gaussian_vector(4, a);
    const auto vb = sample_gaussian_vector(4, b);
    CHECK(va == vb);
    CHECK(va.size() == 4);
    CHECK_THROWS_AS(sample_gaussian_vector(0, a), std::invalid_argument);

    Rng rng(2024);
    const int n = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gaussian();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("joint absolute-value probabilities dominate the product of marginals") {
    // 50 random covariance structures, r <= 6 correlated zero-mean Gaussians
    Rng master(7771);
    for (int rep = 0; rep < 50; ++rep) {
        Rng rng = master.substream(100, static_cast<std::uint64_t>(rep));
        const int r = 2 + static_cast<int>(rng.uniform_int(5));  // 2..6
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(r));
        std::vector<double> sd(static_cast<std::size_t>(r));
        for (int i = 0; i < r; ++i) {
            rows[static_cast<std::size_t>(i)] = sample_gaussian_vector(r, rng);
            double s2 = 0.0;
            for (double x : rows[static_cast<std::size_t>(i)]) s2 += x * x;
            sd[static_cast<std::size_t>(i)] = std::sqrt(s2);
        }
        std::vector<double> thresholds(static_cast<std::size_t>(r));
        double product = 1.0;
        for (int i = 0; i < r; ++i) {
            const double c = 0.3 + 2.2 * rng.uniform();
            thresholds[static_cast<std::size_t>(i)] = c * sd[static_cast<std::size_t>(i)];
            product *= phi(c);
        }
        const int trials = 20000;
        long long joint = 0;
        for (int t = 0; t < trials; ++t) {
            const auto g = sample_gaussian_vector(r, rng);
            bool all = true;
            for (int i = 0; i < r && all; ++i) {
                double xi = 0.0;
                for (int j = 0; j < r; ++j)
                    xi += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                          g[static_cast<std::size_t>(j)];
                all = std::abs(xi) <= thresholds[static_cast<std::size_t>(i)];
            }
            if (all) ++joint;
        }
        const double p_hat = static_cast<double>(joint) / trials;
        const double se = binomial_std_err(p_hat, trials);
        CHECK(p_hat >= product - 5.0 * se);
    }
}

TEST_CASE("tail grid construction and invariants") {
    const TailGrid grid = make_tail_grid(0.1, 8.0, 64);
    CHECK(grid.points.size() == 64);
    CHECK(tail_grid_valid(grid));
    CHECK(grid.resolution == doctest::Approx((8.0 - 0.1) / 63));
    CHECK_THROWS_AS(make_tail_grid(0.0, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_tail_grid(1.0, 0.5, 8), std::invalid_argument);

    TailGrid broken = grid;
    std::swap(broken.points[2], broken.points[3]);
    CHECK(!tail_grid_valid(broken));
}

#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "constructions.hpp"
#include "kcsp/stats.hpp"
#include "kcsp/verify.hpp"
#include "oracles.hpp"

using namespace kcsp;

TEST_CASE("scheme names round trip") {
    for (Scheme s : {Scheme::Uniform, Scheme::Survival, Scheme::SmallR, Scheme::General,
                     Scheme::Boolean})
        CHECK(scheme_from_name(scheme_name(s)) == s);
    CHECK_THROWS_AS(scheme_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("bound_for_clause: closed forms and claim flags") {
    {
        // small-r closed form: |C| = 8, d = 113, r = 2 <= |C|/4
        ClauseStats cs{8, 2, 0.5};
        bool claimed = false;
        const double b = bound_for_clause(Scheme::SmallR, cs, 113, &claimed);
        CHECK(claimed);
        const long double expect = std::exp(1.0L) / std::pow(113.0L, 8.0L);
        CHECK(b == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));
    }
    {
        // uniform-scheme floor at z = 0
        ClauseStats cs{2, 2, 0.0};
        bool claimed = false;
        CHECK(bound_for_clause(Scheme::Uniform, cs, 57, &claimed) == 0.0);
        CHECK(claimed);
    }
    {
        // general bound, z^2 = 1, |C| = 2, d = 113: the exponential term wins
        ClauseStats cs{2, 1, 1.0};
        bool claimed = false;
        const double b = bound_for_clause(Scheme::General, cs, 113, &claimed);
        CHECK(claimed);
        const long double expect =
            std::min<long double>(2.0L * 113.0L / 64.0L, 2.0L * std::exp(0.25L)) /
            (4.0L * 113.0L * 113.0L);
        CHECK(b == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));
    }
    // below the alphabet thresholds nothing is claimed
    bool claimed = true;
    CHECK(bound_for_clause(Scheme::Uniform, ClauseStats{2, 2, 0.5}, 56, &claimed) == 0.0);
    CHECK(!claimed);
    CHECK(bound_for_clause(Scheme::General, ClauseStats{2, 2, 0.5}, 112, &claimed) == 0.0);
    CHECK(!claimed);
    // regime mismatches
    CHECK(bound_for_clause(Scheme::Survival, ClauseStats{8, 1, 0.5}, 113, &claimed) == 0.0);
    CHECK(!claimed);
    CHECK(bound_for_clause(Scheme::SmallR, ClauseStats{8, 3, 0.5}, 113, &claimed) == 0.0);
    CHECK(!claimed);
}

TEST_CASE("estimator: uniform fallback law when no vectors exist") {
    // both branches of the uniform scheme draw uniform values for variables
    // without vectors, so P{clause satisfied} = 1/9 exactly
    Instance inst = parse_instance("kcsp 3 2\nnvars 2\nc 0=2 1=3\n");
    SdpSolution sol;
    sol.dim = 1;
    sol.z = {{0.0}};
    const ProbeResult probe =
        estimate_clause_probability(inst, sol, Scheme::Uniform, 0, 200000, 11);
    CHECK(std::abs(probe.p_hat - 1.0 / 9.0) <= 3.0 * probe.std_err);
    CHECK(probe.trials == 200000);
    CHECK(probe.successes ==
          static_cast<long long>(std::llround(probe.p_hat * probe.trials)));
}

TEST_CASE("estimator: reproducible and thread-count independent") {
    const auto con = testcons::uniform_single_clause(5, 2, 0.15, false);
    const ProbeResult a = estimate_clause_probability(con.inst, con.sol, Scheme::General, 0,
                                                      30000, 77);
    const ProbeResult b = estimate_clause_probability(con.inst, con.sol, Scheme::General, 0,
                                                      30000, 77);
    CHECK(a.successes == b.successes);

    setenv("KCSP_THREADS", "1", 1);
    const ProbeResult one = estimate_clause_probability(con.inst, con.sol, Scheme::General, 0,
                                                        30000, 77);
    setenv("KCSP_THREADS", "3", 1);
    const ProbeResult three = estimate_clause_probability(con.inst, con.sol, Scheme::General, 0,
                                                          30000, 77);
    unsetenv("KCSP_THREADS");
    CHECK(one.successes == a.successes);
    CHECK(three.successes == a.successes);
}

TEST_CASE("estimator rejects bad arguments") {
    const auto con = testcons::uniform_single_clause(5, 1, 0.1, false);
    CHECK_THROWS_AS(
        estimate_clause_probability(con.inst, con.sol, Scheme::General, 5, 1000, 1),
        std::invalid_argument);
    CHECK_THROWS_AS(
        estimate_clause_probability(con.inst, con.sol, Scheme::General, 0, 0, 1),
        std::invalid_argument);
}

TEST_CASE("general scheme clears its bound on intended solutions at d = 113") {
    const Instance inst = parse_instance("kcsp 113 2\nnvars 3\nc 0=1\nc 1=2 2=7\n");
    const SdpSolution sol = intended_solution(inst, Assignment{{1, 2, 7}});
    const auto probes = probe_all_clauses(inst, sol, Scheme::General, 200000, 61);
    for (const auto& p : probes) {
        CHECK(p.bound_claimed);
        CHECK(p.bound > 0.0);
        CHECK(p.pass);
    }
}

TEST_CASE("probe_all_clauses covers every clause") {
    Rng gen(5);
    const Instance inst = generate_random_instance(4, 3, 2, 5, gen);
    const Assignment a{{1, 2, 3, 1}};
    const SdpSolution sol = intended_solution(inst, a);
    const auto probes = probe_all_clauses(inst, sol, Scheme::SmallR, 5000, 31);
    CHECK(probes.size() == inst.clauses.size());
    for (std::size_t c = 0; c < probes.size(); ++c)
        CHECK(probes[c].clause_id == static_cast<int>(c));
}

TEST_CASE("chi-square survival function against density quadrature") {
    for (const int df : {1, 4, 112}) {
        for (const double x : {0.5 * df, 1.0 * df, 1.8 * df}) {
            const auto pdf = [df](double t) {
                if (t <= 0.0) return 0.0;
                const double a = 0.5 * df;
                return std::exp((a - 1.0) * std::log(t) - 0.5 * t - a * std::log(2.0) -
                                std::lgamma(a));
            };
            const double upper = df + 60.0 * std::sqrt(2.0 * df) + 40.0;
            const double expected = oracle::integrate(pdf, x, upper, 1e-14);
            CHECK(chi2_sf(x, df) == doctest::Approx(expected).epsilon(1e-6));
        }
    }
}

TEST_CASE("chi-square goodness of fit accepts fair and rejects skewed samples") {
    const std::vector<double> probs{0.25, 0.25, 0.25, 0.25};
    Rng rng(2);
    std::vector<long long> fair(4, 0);
    for (int t = 0; t < 40000; ++t) ++fair[rng.uniform_int(4)];
    CHECK(chi_square_gof(fair, probs).p_value >= 1e-3);

    const std::vector<long long> skewed{12000, 9000, 10000, 9000};
    CHECK(chi_square_gof(skewed, probs).p_value < 1e-6);
}

TEST_CASE("incomplete gamma sanity") {
    CHECK(lower_reg_gamma(1.0, 0.0) == 0.0);
    CHECK(upper_reg_gamma(1.0, 0.0) == 1.0);
    // P(1, x) = 1 - e^{-x}
    CHECK(lower_reg_gamma(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
    for (double a : {0.5, 3.0, 56.0})
        for (double x : {0.2, 2.0, 60.0})
            CHECK(lower_reg_gamma(a, x) + upper_reg_gamma(a, x) ==
                  doctest::Approx(1.0).epsilon(1e-12));
}

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kcsp/instance.hpp"
#include "kcsp/linalg.hpp"
#include "kcsp/sdp.hpp"

using namespace kcsp;

TEST_CASE("intended solution: satisfied and unsatisfied clauses") {
    const Instance inst = parse_instance("kcsp 3 2\nnvars 2\nc 0=1 1=2\nc 0=2\n");
    const Assignment a{{1, 2}};
    const SdpSolution sol = intended_solution(inst, a);
    CHECK(sol.dim == 1);
    CHECK(norm_sq(sol.z[0]) == 1.0);  // satisfied clause carries the unit vector
    CHECK(norm_sq(sol.z[1]) == 0.0);  // unsatisfied clause vector is zero
    CHECK(sol.objective() == 1.0);

    const FeasibilityReport rep = check_feasibility(inst, sol, 0.0);
    CHECK(rep.pass);
    CHECK(rep.max_residual() == 0.0);
    CHECK(rep.objective == 1.0);
}

TEST_CASE("intended solution objective equals assignment value") {
    Rng rng(12);
    const Instance inst = generate_random_instance(4, 3, 2, 10, rng);
    for (int rep = 0; rep < 100; ++rep) {
        Assignment a;
        for (int v = 0; v < 4; ++v)
            a.values.push_back(1 + static_cast<int>(rng.uniform_int(3)));
        const SdpSolution sol = intended_solution(inst, a);
        CHECK(sol.objective() == static_cast<double>(assignment_value(inst, a)));
        CHECK(check_feasibility(inst, sol, 0.0).pass);
    }
}

TEST_CASE("check_feasibility flags a constructed violation") {
    const Instance inst = parse_instance("kcsp 2 1\nnvars 1\nc 0=1\n");
    SdpSolution sol = intended_solution(inst, Assignment{{1}});
    sol.u[0][0][0] = 2.0;  // double the chosen indicator
    const FeasibilityReport rep = check_feasibility(inst, sol, 1e-9);
    CHECK(!rep.pass);
    CHECK(rep.norm_cap == doctest::Approx(3.0));  // 4 - 1
    CHECK(rep.match == doctest::Approx(1.0));     // <2e, e> - 1

    SdpSolution missing = intended_solution(inst, Assignment{{1}});
    missing.u.erase(0);
    CHECK_THROWS_AS(check_feasibility(inst, missing, 1e-9), std::invalid_argument);
}

TEST_CASE("is_uniform boundary cases") {
    const Instance inst = parse_instance("kcsp 2 1\nnvars 1\nc 0=1\n");
    SdpSolution zero;
    zero.dim = 1;
    zero.u[0] = {{0.0}, {0.0}};
    zero.z = {{0.0}};
    CHECK(is_uniform(zero, 2));

    const SdpSolution intended = intended_solution(inst, Assignment{{1}});
    CHECK(!is_uniform(intended, 2));  // some ||u_i||^2 = 1 > 1/d

    SdpSolution boundary;
    boundary.dim = 2;
    const double v = 1.0 / std::sqrt(2.0);
    boundary.u[0] = {{v, 0.0}, {0.0, v}};
    boundary.z = {{0.0, 0.0}};
    CHECK(is_uniform(boundary, 2));  // exactly 1/d included
}

TEST_CASE("solution file round trip is bit-faithful") {
    const Instance inst = parse_instance("kcsp 3 2\nnvars 2\nc 0=1 1=2\n");
    SdpSolution sol;
    sol.dim = 3;
    sol.u[0] = {{0.12345678901234567, -1.0 / 3.0, 1e-17},
                {0.0, 0.5, -0.25},
                {1.0 / 7.0, 0.0, 0.0}};
    sol.u[1] = {{0.0, 0.0, 0.0}, {0.99999999999999989, 1e-300, -0.125}, {0.0, 0.0, 0.0}};
    sol.z = {{0.3333333333333333, -0.1, 0.7071067811865476}};

    std::stringstream buf;
    write_solution(buf, sol);
    const SdpSolution back = read_solution(buf);
    CHECK(back.dim == sol.dim);
    REQUIRE(back.u.size() == sol.u.size());
    for (const auto& [var, vecs] : sol.u) {
        REQUIRE(back.u.count(var) == 1);
        CHECK(back.u.at(var) == vecs);
    }
    CHECK(back.z == sol.z);
}

TEST_CASE("solver: satisfiable instance reaches the clause count") {
    const Instance inst = parse_instance("kcsp 3 2\nnvars 3\nc 0=1 1=2\nc 1=2 2=3\nc 0=1 2=3\n");
    SolverConfig cfg;
    cfg.seed = 3;
    const SolveSdpResult res = solve_sdp(inst, cfg);
    CHECK(res.report.pass);
    CHECK(res.report.max_residual() <= cfg.tol);
    CHECK(res.solution.objective() >= 3.0 - 1e-4);
    CHECK(res.solution.objective() <= 3.0 + 1e-4);
}

TEST_CASE("solver: contradictory unit clauses give objective 1") {
    const Instance inst = parse_instance("kcsp 3 1\nnvars 1\nc 0=1\nc 0=2\n");
    const SolveSdpResult res = solve_sdp(inst, SolverConfig{});
    CHECK(res.report.pass);
    CHECK(res.solution.objective() >= 1.0 - 1e-4);
    CHECK(res.solution.objective() <= 1.0 + 1e-4);
}

TEST_CASE("solver: objective dominates the brute-force optimum") {
    Rng rng(2718);
    for (int rep = 0; rep < 3; ++rep) {
        const Instance inst = generate_random_instance(3, 3, 2, 8, rng);
        const long long opt = brute_force_opt(inst).value;
        SolverConfig cfg;
        cfg.seed = 100 + static_cast<std::uint64_t>(rep);
        const SolveSdpResult res = solve_sdp(inst, cfg);
        CHECK(res.report.pass);
        CHECK(res.solution.objective() >= static_cast<double>(opt) - 1e-4);
        CHECK(res.solution.objective() <=
              static_cast<double>(inst.clauses.size()) + 1e-4);
    }
}

TEST_CASE("solver determinism: same seed, same objective") {
    Rng rng(5150);
    const Instance inst = generate_random_instance(3, 3, 2, 6, rng);
    SolverConfig cfg;
    cfg.seed = 77;
    const double obj1 = solve_sdp(inst, cfg).solution.objective();
    const double obj2 = solve_sdp(inst, cfg).solution.objective();
    CHECK(std::abs(obj1 - obj2) <= 1e-10);
}

TEST_CASE("solver rejects empty instances") {
    Instance inst;
    inst.d = 3;
    inst.n = 2;
    CHECK_THROWS_AS(solve_sdp(inst, SolverConfig{}), std::invalid_argument);
}

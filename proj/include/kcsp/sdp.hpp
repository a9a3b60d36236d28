#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kcsp/instance.hpp"

namespace kcsp {

// Vector-program solution: one vector per (variable, value) pair and one per
// clause.  Only variables appearing in some clause support carry vectors; a
// present variable always carries all d of them (values 1..d at indices 0..d-1).
struct SdpSolution {
    int dim = 1;
    std::map<int, std::vector<std::vector<double>>> u;  // var -> d vectors
    std::vector<std::vector<double>> z;                 // aligned with instance clauses

    bool has_var(int var) const { return u.find(var) != u.end(); }
    const std::vector<double>& uvec(int var, int value) const;
    double objective() const;
};

// Residuals per constraint family:
//   norm_cap:      sum_i ||u_i||^2 <= 1            per variable
//   orthogonality: <u_i, u_j> = 0, i != j          per variable
//   match:         <u_i, z_C> = ||z_C||^2          per clause, (u,i) in C
//   zero:          <u_j, z_C> = 0                  per clause, (u,i) in C, j != i
struct FeasibilityReport {
    double norm_cap = 0.0;
    double orthogonality = 0.0;
    double match = 0.0;
    double zero = 0.0;
    double objective = 0.0;
    bool pass = false;

    double max_residual() const;
};

struct SolverConfig {
    double tol = 1e-6;      // feasibility residual target
    double gap = 1e-4;      // objective slack allowed against oracle values
    int restarts = 5;
    int rank_cap = 30;      // factor rank r = min(total vector count, rank_cap)
    int max_outer = 46;     // augmented-Lagrangian outer iterations
    int inner_iters = 320;  // gradient steps per outer iteration
    std::uint64_t seed = 1;
};

struct SolveSdpResult {
    SdpSolution solution;
    FeasibilityReport report;
    bool converged = false;
    int outer_iterations = 0;
};

// dim-1 solution encoding a concrete assignment: u_i = e iff x_u = i,
// z_C = e iff C is satisfied.  Residuals are exactly zero and the objective
// equals assignment_value(inst, a).
SdpSolution intended_solution(const Instance& inst, const Assignment& a);

// Exact residuals; pass iff all are <= tol.  Throws on missing vectors.
FeasibilityReport check_feasibility(const Instance& inst, const SdpSolution& sol, double tol);

// Low-rank factorized solver: augmented Lagrangian on the equality
// constraints, projection for the per-variable norm cap, random restarts,
// and a final orthogonalize/rescale/refit repair.
SolveSdpResult solve_sdp(const Instance& inst, const SolverConfig& cfg = {});

// max over (u, i) of ||u_i||^2 <= 1/d + 1e-12.
bool is_uniform(const SdpSolution& sol, int d);

// Text round-trip good to 17 significant digits:
//   sdp <dim>
//   u <var> <val> <dim floats>
//   z <clause-index> <dim floats>
void write_solution(std::ostream& out, const SdpSolution& sol);
SdpSolution read_solution(std::istream& in);
void write_solution_file(const std::string& path, const SdpSolution& sol);
SdpSolution read_solution_file(const std::string& path);

}  // namespace kcsp

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kcsp/rng.hpp"

namespace kcsp {

// A clause is a conjunction of equalities x_var = value.  Pairs are kept
// sorted by variable index with one value per variable.
struct Clause {
    std::vector<std::pair<int, int>> pairs;  // (var, value), var ascending

    int length() const { return static_cast<int>(pairs.size()); }
    std::vector<int> support() const;
    // Value this clause requires for var, or 0 if var is not in the support.
    int value_of(int var) const;
};

// CSP instance over domain [1, d] with n variables indexed 0..n-1.
// k is the maximum clause length (0 when there are no clauses).
struct Instance {
    int d = 2;
    int n = 0;
    std::vector<Clause> clauses;
    int k = 0;

    void recompute_k();
    // Throws std::invalid_argument when an invariant is broken (out-of-range
    // d/value/index, conflicting pairs, empty clause).
    void validate() const;
};

// A k-ary predicate given by its accepted tuples.
struct Predicate {
    std::vector<int> vars;                    // distinct variable indices
    std::vector<std::vector<int>> accepted;   // tuples over [1, d], same arity
};

// Total map variable -> value in [1, d].
struct Assignment {
    std::vector<int> values;  // length n
};

struct parse_error : std::runtime_error {
    int line;
    parse_error(int line_no, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct budget_exceeded : std::runtime_error {
    long long required;
    explicit budget_exceeded(long long req)
        : std::runtime_error("brute force would enumerate " + std::to_string(req) +
                             " assignments, over budget"),
          required(req) {}
};

// Text format (one item per line, '#' starts a comment):
//   kcsp <d> <k>
//   nvars <n>
//   c <var>=<val> <var>=<val> ...
//   p <v1> ... <vk> : <val>,...,<val>;<val>,...,<val>;...
// Predicate lines are expanded into their clause families in place.
// Predicates with no accepted tuples are dropped with a warning.
Instance parse_instance(std::istream& in, std::vector<std::string>* warnings = nullptr);
Instance parse_instance(const std::string& text, std::vector<std::string>* warnings = nullptr);
Instance parse_instance_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

std::string serialize_instance(const Instance& inst);

// Clause family {x_v1 = i1 && ... && x_vk = ik : P(i1..ik) accepted} per
// predicate.  An assignment satisfies exactly one clause of a predicate's
// family iff it satisfies the predicate.
Instance reduce_predicates(const std::vector<Predicate>& predicates, int d, int n,
                           std::vector<std::string>* warnings = nullptr);

bool clause_satisfied(const Clause& c, const Assignment& a);

long long assignment_value(const Instance& inst, const Assignment& a);

struct BruteForceResult {
    Assignment best;
    long long value = 0;
};

// Exact optimum by exhaustive enumeration; ties resolved to the
// lexicographically smallest assignment.  Throws budget_exceeded when
// d^n > budget.
BruteForceResult brute_force_opt(const Instance& inst, long long budget = 20'000'000);

// m clauses, each over k distinct uniformly chosen variables with uniform
// values; deterministic under the rng seed.
Instance generate_random_instance(int n, int d, int k, int m, Rng& rng);

}  // namespace kcsp

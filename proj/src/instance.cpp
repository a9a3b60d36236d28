#include "kcsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace kcsp {

std::vector<int> Clause::support() const {
    std::vector<int> s;
    s.reserve(pairs.size());
    for (const auto& [var, val] : pairs) s.push_back(var);
    return s;
}

int Clause::value_of(int var) const {
    for (const auto& [v, val] : pairs)
        if (v == var) return val;
    return 0;
}

void Instance::recompute_k() {
    k = 0;
    for (const Clause& c : clauses) k = std::max(k, c.length());
}

void Instance::validate() const {
    if (d < 2) throw std::invalid_argument("instance: d must be >= 2");
    if (n < 1) throw std::invalid_argument("instance: n must be >= 1");
    for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
        const Clause& c = clauses[ci];
        if (c.pairs.empty())
            throw std::invalid_argument("clause " + std::to_string(ci) + " is empty");
        int prev_var = -1;
        for (const auto& [var, val] : c.pairs) {
            if (var < 0 || var >= n)
                throw std::invalid_argument("clause " + std::to_string(ci) +
                                            ": variable " + std::to_string(var) + " out of range");
            if (val < 1 || val > d)
                throw std::invalid_argument("clause " + std::to_string(ci) +
                                            ": value " + std::to_string(val) + " out of range");
            if (var == prev_var)
                throw std::invalid_argument("clause " + std::to_string(ci) +
                                            ": conflicting pairs for variable " + std::to_string(var));
            if (var < prev_var)
                throw std::invalid_argument("clause " + std::to_string(ci) + ": pairs not sorted");
            prev_var = var;
        }
        if (c.length() > k)
            throw std::invalid_argument("clause " + std::to_string(ci) + " longer than k");
    }
}

namespace {

// Builds a clause from unsorted pairs; collapses duplicate identical pairs,
// rejects conflicting ones.  on_error receives a message and must throw.
template <typename Fail>
Clause make_clause(std::vector<std::pair<int, int>> pairs, Fail&& fail) {
    std::sort(pairs.begin(), pairs.end());
    Clause c;
    for (const auto& p : pairs) {
        if (!c.pairs.empty() && c.pairs.back().first == p.first) {
            if (c.pairs.back().second != p.second)
                fail("conflicting pairs for variable " + std::to_string(p.first));
            continue;  // identical duplicate; set semantics
        }
        c.pairs.push_back(p);
    }
    if (c.pairs.empty()) fail(std::string("empty clause"));
    return c;
}

}  // namespace

Instance parse_instance(std::istream& in, std::vector<std::string>* warnings) {
    Instance inst;
    int declared_k = -1;
    bool have_header = false, have_nvars = false;
    std::vector<Predicate> predicates;
    std::string raw;
    int line_no = 0;

    auto fail = [&](const std::string& msg) -> void { throw parse_error(line_no, msg); };

    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;  // blank or comment-only

        if (tag == "kcsp") {
            if (have_header) fail("duplicate kcsp header");
            if (!(ls >> inst.d >> declared_k)) fail("malformed header, expected: kcsp <d> <k>");
            if (inst.d < 2) fail("d must be >= 2");
            if (declared_k < 0) fail("k must be >= 0");
            have_header = true;
        } else if (tag == "nvars") {
            if (!have_header) fail("nvars before kcsp header");
            if (have_nvars) fail("duplicate nvars line");
            if (!(ls >> inst.n) || inst.n < 1) fail("malformed nvars line");
            have_nvars = true;
        } else if (tag == "c") {
            if (!have_nvars) fail("clause before nvars line");
            std::vector<std::pair<int, int>> pairs;
            std::string tok;
            while (ls >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) fail("expected <var>=<val>, got '" + tok + "'");
                int var, val;
                try {
                    std::size_t used;
                    var = std::stoi(tok.substr(0, eq), &used);
                    if (used != eq) throw std::invalid_argument("");
                    const std::string vs = tok.substr(eq + 1);
                    val = std::stoi(vs, &used);
                    if (used != vs.size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    fail("cannot parse pair '" + tok + "'");
                    return inst;  // unreachable
                }
                if (var < 0 || var >= inst.n) fail("variable " + std::to_string(var) + " out of range");
                if (val < 1 || val > inst.d) fail("value " + std::to_string(val) + " out of range");
                pairs.emplace_back(var, val);
            }
            Clause c = make_clause(std::move(pairs), [&](const std::string& m) { fail(m); });
            if (c.length() > declared_k)
                fail("clause length " + std::to_string(c.length()) + " exceeds declared k = " +
                     std::to_string(declared_k));
            inst.clauses.push_back(std::move(c));
        } else if (tag == "p") {
            if (!have_nvars) fail("predicate before nvars line");
            // grammar: p v1 v2 ... vk : t1;t2;...  with ti = c1,c2,...,ck
            Predicate pred;
            std::string tok;
            bool saw_colon = false;
            while (ls >> tok) {
                if (tok == ":") {
                    saw_colon = true;
                    break;
                }
                try {
                    pred.vars.push_back(std::stoi(tok));
                } catch (const std::exception&) {
                    fail("cannot parse variable '" + tok + "'");
                }
            }
            if (!saw_colon) fail("predicate line missing ':'");
            for (int v : pred.vars)
                if (v < 0 || v >= inst.n) fail("variable " + std::to_string(v) + " out of range");
            {
                auto sorted = pred.vars;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                    fail("predicate variables must be distinct");
            }
            std::string rest;
            std::getline(ls, rest);
            std::istringstream tuples(rest);
            std::string tuple_tok;
            while (std::getline(tuples, tuple_tok, ';')) {
                if (tuple_tok.find_first_not_of(" \t") == std::string::npos) continue;
                std::vector<int> tuple;
                std::istringstream ts(tuple_tok);
                std::string num;
                while (std::getline(ts, num, ',')) {
                    try {
                        tuple.push_back(std::stoi(num));
                    } catch (const std::exception&) {
                        fail("cannot parse tuple entry '" + num + "'");
                    }
                }
                if (tuple.size() != pred.vars.size())
                    fail("tuple arity " + std::to_string(tuple.size()) + " != predicate arity " +
                         std::to_string(pred.vars.size()));
                for (int val : tuple)
                    if (val < 1 || val > inst.d) fail("tuple value " + std::to_string(val) + " out of range");
                pred.accepted.push_back(std::move(tuple));
            }
            if (pred.accepted.empty()) {
                if (warnings)
                    warnings->push_back("line " + std::to_string(line_no) +
                                        ": predicate with empty accepted set dropped");
                continue;
            }
            if (static_cast<int>(pred.vars.size()) > declared_k)
                fail("predicate arity exceeds declared k");
            predicates.push_back(std::move(pred));
        } else {
            fail("unknown directive '" + tag + "'");
        }
    }
    if (!have_header) throw parse_error(line_no, "missing kcsp header");
    if (!have_nvars) throw parse_error(line_no, "missing nvars line");

    if (!predicates.empty()) {
        Instance reduced = reduce_predicates(predicates, inst.d, inst.n, warnings);
        for (Clause& c : reduced.clauses) inst.clauses.push_back(std::move(c));
    }
    inst.recompute_k();
    inst.validate();
    return inst;
}

Instance parse_instance(const std::string& text, std::vector<std::string>* warnings) {
    std::istringstream in(text);
    return parse_instance(in, warnings);
}

Instance parse_instance_file(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in, warnings);
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "kcsp " << inst.d << ' ' << inst.k << "\n";
    out << "nvars " << inst.n << "\n";
    for (const Clause& c : inst.clauses) {
        out << 'c';
        for (const auto& [var, val] : c.pairs) out << ' ' << var << '=' << val;
        out << "\n";
    }
    return out.str();
}

Instance reduce_predicates(const std::vector<Predicate>& predicates, int d, int n,
                           std::vector<std::string>* warnings) {
    Instance inst;
    inst.d = d;
    inst.n = n;
    for (std::size_t pi = 0; pi < predicates.size(); ++pi) {
        const Predicate& p = predicates[pi];
        if (p.accepted.empty()) {
            if (warnings)
                warnings->push_back("predicate " + std::to_string(pi) +
                                    " with empty accepted set dropped");
            continue;
        }
        for (const auto& tuple : p.accepted) {
            if (tuple.size() != p.vars.size())
                throw std::invalid_argument("predicate tuple arity mismatch");
            std::vector<std::pair<int, int>> pairs;
            pairs.reserve(p.vars.size());
            for (std::size_t i = 0; i < p.vars.size(); ++i)
                pairs.emplace_back(p.vars[i], tuple[i]);
            inst.clauses.push_back(make_clause(std::move(pairs), [](const std::string& m) {
                throw std::invalid_argument("predicate reduction: " + m);
            }));
        }
    }
    inst.recompute_k();
    inst.validate();
    return inst;
}

bool clause_satisfied(const Clause& c, const Assignment& a) {
    for (const auto& [var, val] : c.pairs) {
        if (var < 0 || var >= static_cast<int>(a.values.size()))
            throw std::invalid_argument("clause_satisfied: assignment not total");
        if (a.values[var] != val) return false;
    }
    return true;
}

long long assignment_value(const Instance& inst, const Assignment& a) {
    long long count = 0;
    for (const Clause& c : inst.clauses)
        if (clause_satisfied(c, a)) ++count;
    return count;
}

BruteForceResult brute_force_opt(const Instance& inst, long long budget) {
    // d^n with overflow care
    long double total_ld = 1.0L;
    for (int i = 0; i < inst.n; ++i) total_ld *= inst.d;
    if (total_ld > static_cast<long double>(budget))
        throw budget_exceeded(total_ld > 9e18L ? 9'000'000'000'000'000'000LL
                                               : static_cast<long long>(total_ld));

    BruteForceResult res;
    res.best.values.assign(inst.n, 1);
    res.value = assignment_value(inst, res.best);

    // Lexicographic enumeration; strict improvement keeps the lexicographically
    // smallest maximizer.
    Assignment a;
    a.values.assign(inst.n, 1);
    const long long total = static_cast<long long>(total_ld);
    for (long long step = 1; step < total; ++step) {
        int pos = inst.n - 1;
        while (pos >= 0 && a.values[pos] == inst.d) {
            a.values[pos] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++a.values[pos];
        const long long v = assignment_value(inst, a);
        if (v > res.value) {
            res.value = v;
            res.best = a;
        }
    }
    return res;
}

Instance generate_random_instance(int n, int d, int k, int m, Rng& rng) {
    if (n < 1 || d < 2 || k < 1 || m < 0)
        throw std::invalid_argument("generate_random_instance: invalid counts");
    if (k > n) throw std::invalid_argument("generate_random_instance: k must be <= n");
    Instance inst;
    inst.d = d;
    inst.n = n;
    inst.clauses.reserve(static_cast<std::size_t>(m));
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = i;
    for (int c = 0; c < m; ++c) {
        // partial Fisher-Yates for k distinct variables
        for (int i = 0; i < k; ++i) {
            const int j = i + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - i)));
            std::swap(vars[static_cast<std::size_t>(i)], vars[static_cast<std::size_t>(j)]);
        }
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            pairs.emplace_back(vars[static_cast<std::size_t>(i)],
                               1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d))));
        inst.clauses.push_back(make_clause(std::move(pairs), [](const std::string& m2) {
            throw std::invalid_argument("generate_random_instance: " + m2);
        }));
    }
    inst.recompute_k();
    inst.validate();
    return inst;
}

}  // namespace kcsp

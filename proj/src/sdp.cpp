#include "kcsp/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "kcsp/linalg.hpp"

namespace kcsp {

const std::vector<double>& SdpSolution::uvec(int var, int value) const {
    auto it = u.find(var);
    if (it == u.end())
        throw std::invalid_argument("SdpSolution: no vectors for variable " + std::to_string(var));
    const auto& vecs = it->second;
    if (value < 1 || value > static_cast<int>(vecs.size()))
        throw std::invalid_argument("SdpSolution: value out of range");
    return vecs[static_cast<std::size_t>(value - 1)];
}

double SdpSolution::objective() const {
    double s = 0.0;
    for (const auto& zc : z) s += norm_sq(zc);
    return s;
}

double FeasibilityReport::max_residual() const {
    return std::max(std::max(norm_cap, orthogonality), std::max(match, zero));
}

SdpSolution intended_solution(const Instance& inst, const Assignment& a) {
    if (static_cast<int>(a.values.size()) != inst.n)
        throw std::invalid_argument("intended_solution: assignment not total");
    SdpSolution sol;
    sol.dim = 1;

    std::set<int> constrained;
    for (const Clause& c : inst.clauses)
        for (const auto& [var, val] : c.pairs) constrained.insert(var);

    for (int var : constrained) {
        std::vector<std::vector<double>> vecs(static_cast<std::size_t>(inst.d),
                                              std::vector<double>{0.0});
        const int chosen = a.values[static_cast<std::size_t>(var)];
        vecs[static_cast<std::size_t>(chosen - 1)][0] = 1.0;
        sol.u.emplace(var, std::move(vecs));
    }
    sol.z.reserve(inst.clauses.size());
    for (const Clause& c : inst.clauses)
        sol.z.push_back({clause_satisfied(c, a) ? 1.0 : 0.0});
    return sol;
}

FeasibilityReport check_feasibility(const Instance& inst, const SdpSolution& sol, double tol) {
    FeasibilityReport rep;
    for (const auto& [var, vecs] : sol.u) {
        if (static_cast<int>(vecs.size()) != inst.d)
            throw std::invalid_argument("check_feasibility: variable " + std::to_string(var) +
                                        " does not carry d vectors");
        double total = 0.0;
        for (int i = 0; i < inst.d; ++i) {
            total += norm_sq(vecs[static_cast<std::size_t>(i)]);
            for (int j = i + 1; j < inst.d; ++j)
                rep.orthogonality =
                    std::max(rep.orthogonality,
                             std::abs(dot(vecs[static_cast<std::size_t>(i)],
                                          vecs[static_cast<std::size_t>(j)])));
        }
        rep.norm_cap = std::max(rep.norm_cap, total - 1.0);
    }
    rep.norm_cap = std::max(rep.norm_cap, 0.0);

    if (sol.z.size() != inst.clauses.size())
        throw std::invalid_argument("check_feasibility: clause vector count mismatch");
    for (std::size_t ci = 0; ci < inst.clauses.size(); ++ci) {
        const Clause& c = inst.clauses[ci];
        const auto& zc = sol.z[ci];
        const double zn = norm_sq(zc);
        rep.objective += zn;
        for (const auto& [var, val] : c.pairs) {
            auto it = sol.u.find(var);
            if (it == sol.u.end())
                throw std::invalid_argument("check_feasibility: missing vectors for variable " +
                                            std::to_string(var));
            const auto& vecs = it->second;
            for (int j = 1; j <= inst.d; ++j) {
                const double ip = dot(vecs[static_cast<std::size_t>(j - 1)], zc);
                if (j == val)
                    rep.match = std::max(rep.match, std::abs(ip - zn));
                else
                    rep.zero = std::max(rep.zero, std::abs(ip));
            }
        }
    }
    rep.pass = rep.max_residual() <= tol;
    return rep;
}

bool is_uniform(const SdpSolution& sol, int d) {
    const double cap = 1.0 / d + 1e-12;
    for (const auto& [var, vecs] : sol.u)
        for (const auto& vec : vecs)
            if (norm_sq(vec) > cap) return false;
    return true;
}

void write_solution(std::ostream& out, const SdpSolution& sol) {
    char buf[64];
    out << "sdp " << sol.dim << "\n";
    for (const auto& [var, vecs] : sol.u) {
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            out << "u " << var << ' ' << (i + 1);
            for (double x : vecs[i]) {
                std::snprintf(buf, sizeof buf, " %.17g", x);
                out << buf;
            }
            out << "\n";
        }
    }
    for (std::size_t c = 0; c < sol.z.size(); ++c) {
        out << "z " << c;
        for (double x : sol.z[c]) {
            std::snprintf(buf, sizeof buf, " %.17g", x);
            out << buf;
        }
        out << "\n";
    }
}

SdpSolution read_solution(std::istream& in) {
    SdpSolution sol;
    std::string tag;
    if (!(in >> tag) || tag != "sdp" || !(in >> sol.dim) || sol.dim < 1)
        throw std::runtime_error("solution file: bad header");
    auto read_vec = [&](std::vector<double>& v) {
        v.resize(static_cast<std::size_t>(sol.dim));
        for (double& x : v)
            if (!(in >> x)) throw std::runtime_error("solution file: truncated vector");
    };
    while (in >> tag) {
        if (tag == "u") {
            int var, val;
            if (!(in >> var >> val)) throw std::runtime_error("solution file: bad u line");
            auto& vecs = sol.u[var];
            if (static_cast<int>(vecs.size()) < val) vecs.resize(static_cast<std::size_t>(val));
            read_vec(vecs[static_cast<std::size_t>(val - 1)]);
        } else if (tag == "z") {
            std::size_t idx;
            if (!(in >> idx)) throw std::runtime_error("solution file: bad z line");
            if (sol.z.size() <= idx) sol.z.resize(idx + 1);
            read_vec(sol.z[idx]);
        } else {
            throw std::runtime_error("solution file: unknown tag '" + tag + "'");
        }
    }
    for (auto& [var, vecs] : sol.u)
        for (auto& vec : vecs)
            if (vec.empty()) vec.assign(static_cast<std::size_t>(sol.dim), 0.0);
    for (auto& zc : sol.z)
        if (zc.empty()) zc.assign(static_cast<std::size_t>(sol.dim), 0.0);
    return sol;
}

void write_solution_file(const std::string& path, const SdpSolution& sol) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open solution file for writing: " + path);
    write_solution(out, sol);
}

SdpSolution read_solution_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open solution file: " + path);
    return read_solution(in);
}

}  // namespace kcsp

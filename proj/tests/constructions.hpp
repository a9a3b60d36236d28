#pragma once

// Hand-built feasible solutions with controlled geometry: uniform solutions
// with a chosen ||z_C||^2, norm-shaped solutions that steer each clause value
// into S_u or L_u, boolean clauses with a chosen z mass, and a ramp of
// distinct norms for marginal tests.  All of them satisfy the SDP constraints
// exactly (residual 0), which the tests assert.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kcsp/instance.hpp"
#include "kcsp/sdp.hpp"

namespace testcons {

struct Construction {
    kcsp::Instance inst;
    kcsp::SdpSolution sol;
};

inline std::vector<double> unit_axis(int dim, int axis, double length) {
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    v[static_cast<std::size_t>(axis)] = length;
    return v;
}

// Single clause over `len` variables, value 1 each, every u-vector of norm
// sqrt(1/d): the solution is uniform with equality.  z = sqrt(z_sq) * e0;
// value-1 vectors carry the z component plus a filler on a shared axis.
// With shared_axes the non-clause values of all variables reuse one axis set.
inline Construction uniform_single_clause(int d, int len, double z_sq, bool shared_axes) {
    const double u2 = 1.0 / d;
    if (z_sq < 0.0 || z_sq > u2 + 1e-15)
        throw std::invalid_argument("uniform_single_clause: need 0 <= z_sq <= 1/d");

    Construction c;
    c.inst.d = d;
    c.inst.n = len;
    kcsp::Clause cl;
    for (int v = 0; v < len; ++v) cl.pairs.emplace_back(v, 1);
    c.inst.clauses.push_back(cl);
    c.inst.recompute_k();
    c.inst.validate();

    const int per_var_axes = d - 1;
    const int dim = 1 + (shared_axes ? per_var_axes : len * per_var_axes) + 1;
    const int w_axis = dim - 1;
    c.sol.dim = dim;

    const double filler = std::sqrt(std::max(0.0, u2 - z_sq));
    for (int v = 0; v < len; ++v) {
        std::vector<std::vector<double>> vecs;
        vecs.reserve(static_cast<std::size_t>(d));
        std::vector<double> u1(static_cast<std::size_t>(dim), 0.0);
        u1[0] = std::sqrt(z_sq);
        u1[static_cast<std::size_t>(w_axis)] = filler;
        vecs.push_back(std::move(u1));
        for (int j = 2; j <= d; ++j) {
            const int axis = 1 + (shared_axes ? 0 : v * per_var_axes) + (j - 2);
            vecs.push_back(unit_axis(dim, axis, std::sqrt(u2)));
        }
        c.sol.u.emplace(v, std::move(vecs));
    }
    c.sol.z.push_back(unit_axis(dim, 0, std::sqrt(z_sq)));
    return c;
}

// Single clause over |in_S| variables, value 1 each, with per-variable norm
// shaping: in_S[v] keeps all of v's vectors at one norm (value 1 lands in S_u
// by the index tie-break); otherwise value 1 is inflated into L_u.
inline Construction shaped_single_clause(int d, const std::vector<bool>& in_S, double z_sq) {
    const int len = static_cast<int>(in_S.size());
    if (len < 1) throw std::invalid_argument("shaped_single_clause: empty shape list");
    if (!(z_sq > 0.0)) throw std::invalid_argument("shaped_single_clause: need z_sq > 0");

    Construction c;
    c.inst.d = d;
    c.inst.n = len;
    kcsp::Clause cl;
    for (int v = 0; v < len; ++v) cl.pairs.emplace_back(v, 1);
    c.inst.clauses.push_back(cl);
    c.inst.recompute_k();
    c.inst.validate();

    const int dim = 1 + len * (d - 1) + len;
    c.sol.dim = dim;

    for (int v = 0; v < len; ++v) {
        const int w_axis = 1 + len * (d - 1) + v;
        std::vector<std::vector<double>> vecs;
        vecs.reserve(static_cast<std::size_t>(d));
        double other_sq;
        std::vector<double> u1(static_cast<std::size_t>(dim), 0.0);
        u1[0] = std::sqrt(z_sq);
        if (in_S[static_cast<std::size_t>(v)]) {
            other_sq = z_sq;  // equal norms, tie-break puts value 1 in S_u
            if (d * other_sq > 1.0 + 1e-12)
                throw std::invalid_argument("shaped_single_clause: z_sq too large for a short value");
        } else {
            // value 1 gets twice the mass of the z component; the rest share
            // what stays within the unit budget
            u1[static_cast<std::size_t>(w_axis)] = std::sqrt(z_sq);
            other_sq = std::min(z_sq, (1.0 - 2.0 * z_sq) / (d - 1));
            if (!(other_sq < 2.0 * z_sq))
                throw std::invalid_argument("shaped_single_clause: cannot make value 1 long");
        }
        vecs.push_back(std::move(u1));
        for (int j = 2; j <= d; ++j) {
            const int axis = 1 + v * (d - 1) + (j - 2);
            vecs.push_back(unit_axis(dim, axis, std::sqrt(other_sq)));
        }
        c.sol.u.emplace(v, std::move(vecs));
    }
    c.sol.z.push_back(unit_axis(dim, 0, std::sqrt(z_sq)));
    return c;
}

// Boolean (d = 2) clause of length k, value 1 each, ||z||^2 = z_sq; the
// leftover mass is split evenly between the two values of each variable.
inline Construction boolean_single_clause(int k, double z_sq) {
    if (!(z_sq >= 0.0) || !(z_sq <= 1.0))
        throw std::invalid_argument("boolean_single_clause: need z_sq in [0,1]");
    Construction c;
    c.inst.d = 2;
    c.inst.n = k;
    kcsp::Clause cl;
    for (int v = 0; v < k; ++v) cl.pairs.emplace_back(v, 1);
    c.inst.clauses.push_back(cl);
    c.inst.recompute_k();
    c.inst.validate();

    const int dim = 1 + 2 * k;
    c.sol.dim = dim;
    const double fill = std::sqrt((1.0 - z_sq) / 2.0);
    for (int v = 0; v < k; ++v) {
        std::vector<double> u1(static_cast<std::size_t>(dim), 0.0);
        u1[0] = std::sqrt(z_sq);
        u1[static_cast<std::size_t>(1 + 2 * v)] = fill;
        std::vector<double> u2 = unit_axis(dim, 2 + 2 * v, fill);
        c.sol.u.emplace(v, std::vector<std::vector<double>>{std::move(u1), std::move(u2)});
    }
    c.sol.z.push_back(unit_axis(dim, 0, std::sqrt(z_sq)));
    return c;
}

// One variable, no clauses, strictly increasing vector norms, so
// S = {1..ceil(d/2)} and L = the rest without ties.
inline Construction ramp_solution(int d) {
    Construction c;
    c.inst.d = d;
    c.inst.n = 1;
    c.inst.recompute_k();

    const double scale = 2.0 / (static_cast<double>(d) * (d + 1)) * 0.999;
    c.sol.dim = d;
    std::vector<std::vector<double>> vecs;
    vecs.reserve(static_cast<std::size_t>(d));
    for (int val = 1; val <= d; ++val)
        vecs.push_back(unit_axis(d, val - 1, std::sqrt(scale * val)));
    c.sol.u.emplace(0, std::move(vecs));
    return c;
}

}  // namespace testcons

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "kcsp/linalg.hpp"
#include "kcsp/rng.hpp"
#include "kcsp/sdp.hpp"

// Low-rank factorized solver for the clause SDP relaxation.  Every vector
// (one per (variable, value) pair, one per clause) is a row of a V x r
// factor.  Equality constraints (within-variable orthogonality, clause
// match/zero products) are handled by an augmented Lagrangian; the
// per-variable norm cap by projection onto the unit ball.  Feasible
// candidates are extracted along the way by an orthogonalize/rescale repair
// of the u-rows followed by an exact refit of every clause vector, and the
// best exact-feasible candidate wins across restarts.

namespace kcsp {
namespace {

using Span = std::span<double>;
using CSpan = std::span<const double>;

struct PairCon {
    int a = 0;       // u row
    int b = 0;       // u row (orth) or z row (match/zero)
    double lambda = 0.0;
};

struct Candidate {
    SdpSolution sol;
    double objective = -1.0;
    bool valid = false;
};

struct Layout {
    std::vector<int> cvars;      // sorted variables appearing in clauses
    std::map<int, int> slot;     // var -> slot
    int d = 0, m = 0, r = 0, nu = 0, V = 0;

    int urow(int s, int val) const { return s * d + (val - 1); }
    int zrow(int c) const { return nu + c; }
};

CSpan row(const std::vector<double>& X, const Layout& L, int i) {
    return CSpan(&X[static_cast<std::size_t>(i) * L.r], static_cast<std::size_t>(L.r));
}
Span row(std::vector<double>& X, const Layout& L, int i) {
    return Span(&X[static_cast<std::size_t>(i) * L.r], static_cast<std::size_t>(L.r));
}

// Exact refit of clause c's vector against the current u rows.  Returns the
// objective-optimal z satisfying the clause's match/zero constraints, or the
// zero vector when the system forces it.
std::vector<double> refit_z(const std::vector<double>& X, const Layout& L, const Instance& inst,
                            int c) {
    const Clause& cl = inst.clauses[static_cast<std::size_t>(c)];
    std::vector<double> zv(static_cast<std::size_t>(L.r), 0.0);

    std::vector<int> rows;
    std::vector<double> rhs;
    for (const auto& [var, val] : cl.pairs) {
        const int s = L.slot.at(var);
        for (int j = 1; j <= L.d; ++j) {
            const int rr = L.urow(s, j);
            const double nn = norm_sq(row(X, L, rr));
            if (j == val) {
                if (nn <= 1e-26) return zv;  // <u_i, z> = ||z||^2 with u_i ~ 0 forces z = 0
                rows.push_back(rr);
                rhs.push_back(1.0);
            } else {
                if (nn <= 1e-28) continue;  // zero vector satisfies <u_j, z> = 0 trivially
                rows.push_back(rr);
                rhs.push_back(0.0);
            }
        }
    }
    const int nc = static_cast<int>(rows.size());
    if (nc == 0) return zv;

    std::vector<double> gram(static_cast<std::size_t>(nc) * nc);
    for (int p = 0; p < nc; ++p)
        for (int q = p; q < nc; ++q) {
            const double g = dot(row(X, L, rows[static_cast<std::size_t>(p)]),
                                 row(X, L, rows[static_cast<std::size_t>(q)]));
            gram[static_cast<std::size_t>(p) * nc + q] = g;
            gram[static_cast<std::size_t>(q) * nc + p] = g;
        }

    std::vector<double> alpha;
    if (nc <= 48) {
        alpha = solve_psd_minnorm(gram, nc, rhs, 1e-12);
    } else {
        double tr = 0.0;
        for (int p = 0; p < nc; ++p) tr += gram[static_cast<std::size_t>(p) * nc + p];
        alpha = solve_psd_ridge(gram, nc, rhs, 1e-13 * std::max(tr / nc, 1e-30));
        if (alpha.empty()) alpha = solve_psd_minnorm(gram, nc, rhs, 1e-12);
    }

    std::vector<double> v(static_cast<std::size_t>(L.r), 0.0);
    for (int p = 0; p < nc; ++p)
        axpy(alpha[static_cast<std::size_t>(p)], row(X, L, rows[static_cast<std::size_t>(p)]), v);
    const double nv = norm_sq(v);
    if (nv <= 1e-12) return zv;

    for (std::size_t i = 0; i < v.size(); ++i) zv[i] = v[i] / nv;  // ||z||^2 = 1/nv
    const double zn = norm_sq(zv);
    double res = 0.0;
    for (int p = 0; p < nc; ++p)
        res = std::max(res, std::abs(dot(row(X, L, rows[static_cast<std::size_t>(p)]), zv) -
                                     rhs[static_cast<std::size_t>(p)] * zn));
    if (res > 1e-9 * std::max(1.0, zn)) return std::vector<double>(static_cast<std::size_t>(L.r), 0.0);
    return zv;
}

// Per-variable orthogonalization preserving vector norms, then a rescale to
// the unit budget, then exact z refits.  Output is feasible to float noise.
Candidate make_candidate(const std::vector<double>& X, const Layout& L, const Instance& inst) {
    std::vector<double> R = X;

    for (std::size_t s = 0; s < L.cvars.size(); ++s) {
        std::vector<int> nz;
        std::vector<double> norms;
        for (int i = 1; i <= L.d; ++i) {
            const int rr = L.urow(static_cast<int>(s), i);
            const double nn = norm_sq(row(R, L, rr));
            if (nn > 1e-26) {
                nz.push_back(rr);
                norms.push_back(std::sqrt(nn));
            } else {
                std::fill(row(R, L, rr).begin(), row(R, L, rr).end(), 0.0);
            }
        }
        const int q = static_cast<int>(nz.size());
        if (q >= 2) {
            std::vector<double> dirs(static_cast<std::size_t>(q) * L.r);
            for (int p = 0; p < q; ++p) {
                CSpan src = row(R, L, nz[static_cast<std::size_t>(p)]);
                for (int t = 0; t < L.r; ++t)
                    dirs[static_cast<std::size_t>(p) * L.r + t] =
                        src[static_cast<std::size_t>(t)] / norms[static_cast<std::size_t>(p)];
            }
            auto dir = [&](int p) {
                return CSpan(&dirs[static_cast<std::size_t>(p) * L.r], static_cast<std::size_t>(L.r));
            };
            std::vector<double> gram(static_cast<std::size_t>(q) * q);
            for (int p = 0; p < q; ++p)
                for (int t = p; t < q; ++t) {
                    const double g = dot(dir(p), dir(t));
                    gram[static_cast<std::size_t>(p) * q + t] = g;
                    gram[static_cast<std::size_t>(t) * q + p] = g;
                }
            const SymEig eig = jacobi_eigensymm(gram, q);
            const bool well_conditioned = q <= L.r && eig.values.front() > 1e-8;
            if (well_conditioned) {
                // symmetric orthogonalization of the directions: Q' = G^{-1/2} Q
                std::vector<double> smat(static_cast<std::size_t>(q) * q, 0.0);
                for (int p = 0; p < q; ++p)
                    for (int t = 0; t < q; ++t) {
                        double acc = 0.0;
                        for (int j = 0; j < q; ++j)
                            acc += eig.vectors[static_cast<std::size_t>(p) * q + j] *
                                   eig.vectors[static_cast<std::size_t>(t) * q + j] /
                                   std::sqrt(eig.values[static_cast<std::size_t>(j)]);
                        smat[static_cast<std::size_t>(p) * q + t] = acc;
                    }
                std::vector<double> fresh(static_cast<std::size_t>(q) * L.r, 0.0);
                for (int p = 0; p < q; ++p)
                    for (int t = 0; t < q; ++t)
                        axpy(smat[static_cast<std::size_t>(p) * q + t], dir(t),
                             Span(&fresh[static_cast<std::size_t>(p) * L.r],
                                  static_cast<std::size_t>(L.r)));
                for (int p = 0; p < q; ++p) {
                    Span dst = row(R, L, nz[static_cast<std::size_t>(p)]);
                    const double nn = std::sqrt(
                        norm_sq(CSpan(&fresh[static_cast<std::size_t>(p) * L.r],
                                      static_cast<std::size_t>(L.r))));
                    for (int t = 0; t < L.r; ++t)
                        dst[static_cast<std::size_t>(t)] =
                            norms[static_cast<std::size_t>(p)] *
                            fresh[static_cast<std::size_t>(p) * L.r + t] / nn;
                }
            } else {
                // Gram-Schmidt fallback in descending norm order
                std::vector<int> order(static_cast<std::size_t>(q));
                for (int p = 0; p < q; ++p) order[static_cast<std::size_t>(p)] = p;
                std::sort(order.begin(), order.end(), [&](int x, int y) {
                    if (norms[static_cast<std::size_t>(x)] != norms[static_cast<std::size_t>(y)])
                        return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)];
                    return x < y;
                });
                std::vector<double> basis;
                int accepted = 0;
                for (int oi = 0; oi < q; ++oi) {
                    const int p = order[static_cast<std::size_t>(oi)];
                    std::vector<double> w(dir(p).begin(), dir(p).end());
                    for (int bset = 0; bset < accepted; ++bset) {
                        CSpan bq(&basis[static_cast<std::size_t>(bset) * L.r],
                                 static_cast<std::size_t>(L.r));
                        axpy(-dot(CSpan(w), bq), bq, Span(w));
                    }
                    const double wn = std::sqrt(norm_sq(CSpan(w)));
                    Span dst = row(R, L, nz[static_cast<std::size_t>(p)]);
                    if (wn < 1e-8 || accepted >= L.r) {
                        std::fill(dst.begin(), dst.end(), 0.0);
                        continue;
                    }
                    for (double& x : w) x /= wn;
                    basis.insert(basis.end(), w.begin(), w.end());
                    ++accepted;
                    for (int t = 0; t < L.r; ++t)
                        dst[static_cast<std::size_t>(t)] =
                            norms[static_cast<std::size_t>(p)] * w[static_cast<std::size_t>(t)];
                }
            }
        }
        double total = 0.0;
        for (int i = 1; i <= L.d; ++i)
            total += norm_sq(row(R, L, L.urow(static_cast<int>(s), i)));
        if (total > 1.0) {
            const double f = 1.0 / std::sqrt(total);
            for (int i = 1; i <= L.d; ++i) scale(row(R, L, L.urow(static_cast<int>(s), i)), f);
        }
    }

    Candidate cand;
    cand.sol.dim = L.r;
    for (std::size_t s = 0; s < L.cvars.size(); ++s) {
        std::vector<std::vector<double>> vecs(static_cast<std::size_t>(L.d));
        for (int i = 1; i <= L.d; ++i) {
            CSpan src = row(R, L, L.urow(static_cast<int>(s), i));
            vecs[static_cast<std::size_t>(i - 1)].assign(src.begin(), src.end());
        }
        cand.sol.u.emplace(L.cvars[s], std::move(vecs));
    }
    cand.sol.z.resize(static_cast<std::size_t>(L.m));
    cand.objective = 0.0;
    for (int c = 0; c < L.m; ++c) {
        cand.sol.z[static_cast<std::size_t>(c)] = refit_z(R, L, inst, c);
        cand.objective += norm_sq(cand.sol.z[static_cast<std::size_t>(c)]);
    }
    cand.valid = true;
    return cand;
}

// Hill climbing with single-variable and, on small domains, pair moves.
Assignment local_search(const Instance& inst, Assignment a) {
    long long value = assignment_value(inst, a);
    const bool pair_moves =
        static_cast<long long>(inst.n) * inst.n * inst.d * inst.d <= 20000;
    bool improved = true;
    while (improved) {
        improved = false;
        for (int v = 0; v < inst.n; ++v) {
            const int orig = a.values[static_cast<std::size_t>(v)];
            int best_val = orig;
            for (int val = 1; val <= inst.d; ++val) {
                if (val == orig) continue;
                a.values[static_cast<std::size_t>(v)] = val;
                const long long vv = assignment_value(inst, a);
                if (vv > value) {
                    value = vv;
                    best_val = val;
                    improved = true;
                }
            }
            a.values[static_cast<std::size_t>(v)] = best_val;
        }
        if (improved || !pair_moves) continue;
        for (int v = 0; v < inst.n && !improved; ++v) {
            for (int w = v + 1; w < inst.n && !improved; ++w) {
                const int ov = a.values[static_cast<std::size_t>(v)];
                const int ow = a.values[static_cast<std::size_t>(w)];
                for (int val_v = 1; val_v <= inst.d && !improved; ++val_v)
                    for (int val_w = 1; val_w <= inst.d && !improved; ++val_w) {
                        a.values[static_cast<std::size_t>(v)] = val_v;
                        a.values[static_cast<std::size_t>(w)] = val_w;
                        const long long vv = assignment_value(inst, a);
                        if (vv > value) {
                            value = vv;
                            improved = true;
                        }
                    }
                if (!improved) {
                    a.values[static_cast<std::size_t>(v)] = ov;
                    a.values[static_cast<std::size_t>(w)] = ow;
                }
            }
        }
    }
    return a;
}

Candidate assignment_candidate(const Instance& inst, const Assignment& a) {
    Candidate cand;
    cand.sol = intended_solution(inst, a);
    cand.objective = static_cast<double>(assignment_value(inst, a));
    cand.valid = true;
    return cand;
}

// Dim-1 candidate from the assignment that picks each variable's longest
// vector, polished by local search.  Feasible by construction with objective
// equal to its value.
Candidate extraction_candidate(const std::vector<double>& X, const Layout& L,
                               const Instance& inst) {
    Assignment a;
    a.values.assign(static_cast<std::size_t>(inst.n), 1);
    for (std::size_t s = 0; s < L.cvars.size(); ++s) {
        double best = -1.0;
        int arg = 1;
        for (int i = 1; i <= L.d; ++i) {
            const double nn = norm_sq(row(X, L, L.urow(static_cast<int>(s), i)));
            if (nn > best + 1e-15) {
                best = nn;
                arg = i;
            }
        }
        a.values[static_cast<std::size_t>(L.cvars[s])] = arg;
    }
    return assignment_candidate(inst, local_search(inst, a));
}

}  // namespace

SolveSdpResult solve_sdp(const Instance& inst, const SolverConfig& cfg) {
    if (inst.clauses.empty()) throw std::invalid_argument("solve_sdp: instance has no clauses");
    inst.validate();

    Layout L;
    {
        std::set<int> cv;
        for (const Clause& c : inst.clauses)
            for (const auto& [var, val] : c.pairs) cv.insert(var);
        L.cvars.assign(cv.begin(), cv.end());
        for (std::size_t i = 0; i < L.cvars.size(); ++i) L.slot[L.cvars[i]] = static_cast<int>(i);
        L.d = inst.d;
        L.m = static_cast<int>(inst.clauses.size());
        L.nu = static_cast<int>(L.cvars.size()) * L.d;
        L.V = L.nu + L.m;
        L.r = std::min(L.V, cfg.rank_cap);
    }
    const int ncv = static_cast<int>(L.cvars.size());
    const std::size_t total = static_cast<std::size_t>(L.V) * L.r;

    std::vector<PairCon> orth;
    std::vector<PairCon> match;
    std::vector<PairCon> zero;
    for (int s = 0; s < ncv; ++s)
        for (int i = 1; i <= L.d; ++i)
            for (int j = i + 1; j <= L.d; ++j) orth.push_back({L.urow(s, i), L.urow(s, j), 0.0});
    for (int c = 0; c < L.m; ++c)
        for (const auto& [var, val] : inst.clauses[static_cast<std::size_t>(c)].pairs) {
            const int s = L.slot.at(var);
            match.push_back({L.urow(s, val), L.zrow(c), 0.0});
            for (int j = 1; j <= L.d; ++j)
                if (j != val) zero.push_back({L.urow(s, j), L.zrow(c), 0.0});
        }

    const bool small_problem = L.V <= 72;
    Candidate best;
    int best_outer = 0;
    const Rng root(cfg.seed);

    // Combinatorial baseline: local-search optima from a few random starts.
    // These are feasible solutions (intended vectors of their assignments),
    // so the returned objective never falls below the best of them.
    Assignment warm;
    {
        Rng rng = root.substream(0xA55, 0);
        long long warm_value = -1;
        for (int s = 0; s < 8; ++s) {
            Assignment a;
            a.values.reserve(static_cast<std::size_t>(inst.n));
            for (int v = 0; v < inst.n; ++v)
                a.values.push_back(1 + static_cast<int>(rng.uniform_int(
                                           static_cast<std::uint64_t>(inst.d))));
            a = local_search(inst, a);
            const long long value = assignment_value(inst, a);
            if (value > warm_value) {
                warm_value = value;
                warm = a;
            }
        }
        Candidate cand = assignment_candidate(inst, warm);
        if (!best.valid || cand.objective > best.objective + 1e-12) best = std::move(cand);
    }

    for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
        Rng rng = root.substream(0x5D9, static_cast<std::uint64_t>(restart));

        std::vector<double> X(total, 0.0);
        const double sigma = std::sqrt(0.9 / (L.d * L.r));
        for (int s = 0; s < ncv; ++s)
            for (int i = 1; i <= L.d; ++i) {
                Span ur = row(X, L, L.urow(s, i));
                for (double& x : ur) x = sigma * rng.gaussian();
            }
        if (restart == 0) {
            // warm start near the combinatorial baseline's vertex
            for (int s = 0; s < ncv; ++s) {
                const int chosen = warm.values[static_cast<std::size_t>(L.cvars[s])];
                for (int i = 1; i <= L.d; ++i) {
                    Span ur = row(X, L, L.urow(s, i));
                    for (double& x : ur) x *= 0.05;
                    if (i == chosen) ur[0] += 0.9;
                }
            }
        }
        for (int c = 0; c < L.m; ++c) {
            const std::vector<double> zf = refit_z(X, L, inst, c);
            std::copy(zf.begin(), zf.end(), row(X, L, L.zrow(c)).begin());
        }
        for (auto& con : orth) con.lambda = 0.0;
        for (auto& con : match) con.lambda = 0.0;
        for (auto& con : zero) con.lambda = 0.0;

        std::vector<double> grad(total), mom(total, 0.0), vel(total, 0.0);
        std::vector<int> active_orth;
        double mu = 4.0;
        long long tstep = 0;
        double prev_best_obj = -1.0;
        int stagnant = 0;

        for (int outer = 0; outer < cfg.max_outer; ++outer) {
            // orthogonality pairs that can still produce a meaningful residual
            active_orth.clear();
            {
                std::vector<double> rn(static_cast<std::size_t>(L.nu));
                for (int i = 0; i < L.nu; ++i) rn[static_cast<std::size_t>(i)] = norm_sq(row(X, L, i));
                for (std::size_t e = 0; e < orth.size(); ++e) {
                    const PairCon& con = orth[e];
                    if (rn[static_cast<std::size_t>(con.a)] * rn[static_cast<std::size_t>(con.b)] >
                            1e-20 ||
                        std::abs(con.lambda) > 1e-8)
                        active_orth.push_back(static_cast<int>(e));
                }
            }

            const double lr = 0.03 / (1.0 + 0.10 * outer);
            const int inner = cfg.inner_iters + (outer >= cfg.max_outer - 3 ? cfg.inner_iters : 0);
            for (int it = 0; it < inner; ++it) {
                ++tstep;
                std::fill(grad.begin(), grad.end(), 0.0);
                for (int c = 0; c < L.m; ++c) {
                    Span zr = row(X, L, L.zrow(c));
                    Span gz(&grad[static_cast<std::size_t>(L.zrow(c)) * L.r],
                            static_cast<std::size_t>(L.r));
                    axpy(-2.0, zr, gz);
                }
                for (int e : active_orth) {
                    const PairCon& con = orth[static_cast<std::size_t>(e)];
                    CSpan a = row(X, L, con.a), b = row(X, L, con.b);
                    const double y = con.lambda + mu * dot(a, b);
                    axpy(y, b, Span(&grad[static_cast<std::size_t>(con.a) * L.r],
                                    static_cast<std::size_t>(L.r)));
                    axpy(y, a, Span(&grad[static_cast<std::size_t>(con.b) * L.r],
                                    static_cast<std::size_t>(L.r)));
                }
                for (const PairCon& con : match) {
                    CSpan ur = row(X, L, con.a), zr = row(X, L, con.b);
                    const double c = dot(ur, zr) - norm_sq(zr);
                    const double y = con.lambda + mu * c;
                    Span gu(&grad[static_cast<std::size_t>(con.a) * L.r],
                            static_cast<std::size_t>(L.r));
                    Span gz(&grad[static_cast<std::size_t>(con.b) * L.r],
                            static_cast<std::size_t>(L.r));
                    axpy(y, zr, gu);
                    axpy(y, ur, gz);
                    axpy(-2.0 * y, zr, gz);
                }
                for (const PairCon& con : zero) {
                    CSpan ur = row(X, L, con.a), zr = row(X, L, con.b);
                    const double y = con.lambda + mu * dot(ur, zr);
                    axpy(y, zr, Span(&grad[static_cast<std::size_t>(con.a) * L.r],
                                     static_cast<std::size_t>(L.r)));
                    axpy(y, ur, Span(&grad[static_cast<std::size_t>(con.b) * L.r],
                                     static_cast<std::size_t>(L.r)));
                }

                const double bc1 = 1.0 - std::pow(0.9, static_cast<double>(tstep));
                const double bc2 = 1.0 - std::pow(0.999, static_cast<double>(tstep));
                for (std::size_t i = 0; i < total; ++i) {
                    mom[i] = 0.9 * mom[i] + 0.1 * grad[i];
                    vel[i] = 0.999 * vel[i] + 0.001 * grad[i] * grad[i];
                    X[i] -= lr * (mom[i] / bc1) / (std::sqrt(vel[i] / bc2) + 1e-12);
                }
                for (int s = 0; s < ncv; ++s) {
                    double t2 = 0.0;
                    for (int i = 1; i <= L.d; ++i) t2 += norm_sq(row(X, L, L.urow(s, i)));
                    if (t2 > 1.0) {
                        const double f = 1.0 / std::sqrt(t2);
                        for (int i = 1; i <= L.d; ++i) scale(row(X, L, L.urow(s, i)), f);
                    }
                }
            }

            double max_c = 0.0;
            for (auto& con : orth) {
                const double c = dot(row(X, L, con.a), row(X, L, con.b));
                con.lambda = std::clamp(con.lambda + mu * c, -1e6, 1e6);
                max_c = std::max(max_c, std::abs(c));
            }
            for (auto& con : match) {
                const double c =
                    dot(row(X, L, con.a), row(X, L, con.b)) - norm_sq(row(X, L, con.b));
                con.lambda = std::clamp(con.lambda + mu * c, -1e6, 1e6);
                max_c = std::max(max_c, std::abs(c));
            }
            for (auto& con : zero) {
                const double c = dot(row(X, L, con.a), row(X, L, con.b));
                con.lambda = std::clamp(con.lambda + mu * c, -1e6, 1e6);
                max_c = std::max(max_c, std::abs(c));
            }
            mu = std::min(mu * 1.5, 2e5);

            const bool do_snapshot = small_problem || outer % 4 == 3 || outer >= cfg.max_outer - 2;
            if (do_snapshot) {
                Candidate cand = make_candidate(X, L, inst);
                if (!best.valid || cand.objective > best.objective + 1e-12) {
                    best = std::move(cand);
                    best_outer = outer + 1;
                }
            }
            if (best.valid) {
                if (best.objective <= prev_best_obj + 1e-10)
                    ++stagnant;
                else
                    stagnant = 0;
                prev_best_obj = best.objective;
                if (max_c < 0.2 * cfg.tol && stagnant >= 5 && outer >= 10) break;
            }
        }

        Candidate tail = make_candidate(X, L, inst);
        if (!best.valid || tail.objective > best.objective + 1e-12) {
            best = std::move(tail);
            best_outer = cfg.max_outer;
        }
        Candidate extracted = extraction_candidate(X, L, inst);
        if (!best.valid || extracted.objective > best.objective + 1e-12) {
            best = std::move(extracted);
            best_outer = cfg.max_outer;
        }
    }

    SolveSdpResult result;
    result.solution = std::move(best.sol);
    result.report = check_feasibility(inst, result.solution, cfg.tol);
    result.converged = result.report.pass;
    result.outer_iterations = best_outer;
    return result;
}

}  // namespace kcsp

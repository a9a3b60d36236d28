#include "kcsp/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace kcsp {

SymEig jacobi_eigensymm(std::vector<double> a, int n, int max_sweeps) {
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-30) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = A(p, p), aqq = A(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (int j = 0; j < n; ++j) {
                    const double apj = A(p, j), aqj = A(q, j);
                    A(p, j) = c * apj - s * aqj;
                    A(q, j) = s * apj + c * aqj;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    SymEig eig;
    eig.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig.values[static_cast<std::size_t>(i)] = A(i, i);

    // sort ascending, permuting columns
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return eig.values[static_cast<std::size_t>(x)] <
                                         eig.values[static_cast<std::size_t>(y)]; });
    SymEig out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        out.values[static_cast<std::size_t>(j)] = eig.values[static_cast<std::size_t>(order[j])];
        for (int i = 0; i < n; ++i)
            out.vectors[static_cast<std::size_t>(i) * n + j] =
                v[static_cast<std::size_t>(i) * n + order[static_cast<std::size_t>(j)]];
    }
    return out;
}

std::vector<double> solve_psd_minnorm(const std::vector<double>& gram, int n,
                                      const std::vector<double>& rhs, double rel_cutoff) {
    SymEig eig = jacobi_eigensymm(gram, n);
    const double lmax = n > 0 ? std::max(0.0, eig.values.back()) : 0.0;
    const double cutoff = lmax * rel_cutoff;
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const double lam = eig.values[static_cast<std::size_t>(j)];
        if (lam <= cutoff) continue;
        double proj = 0.0;
        for (int i = 0; i < n; ++i)
            proj += eig.vectors[static_cast<std::size_t>(i) * n + j] * rhs[static_cast<std::size_t>(i)];
        const double coef = proj / lam;
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] += coef * eig.vectors[static_cast<std::size_t>(i) * n + j];
    }
    return x;
}

std::vector<double> solve_psd_ridge(std::vector<double> gram, int n, std::vector<double> rhs,
                                    double ridge) {
    auto G = [&](int i, int j) -> double& { return gram[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) G(i, i) += ridge;
    // in-place Cholesky G = L L^T
    for (int j = 0; j < n; ++j) {
        double diag = G(j, j);
        for (int k = 0; k < j; ++k) diag -= G(j, k) * G(j, k);
        if (diag <= 0.0) return {};
        const double ljj = std::sqrt(diag);
        G(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = G(i, j);
            for (int k = 0; k < j; ++k) s -= G(i, k) * G(j, k);
            G(i, j) = s / ljj;
        }
    }
    // forward then backward substitution
    for (int i = 0; i < n; ++i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= G(i, k) * rhs[static_cast<std::size_t>(k)];
        rhs[static_cast<std::size_t>(i)] = s / G(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= G(k, i) * rhs[static_cast<std::size_t>(k)];
        rhs[static_cast<std::size_t>(i)] = s / G(i, i);
    }
    return rhs;
}

}  // namespace kcsp

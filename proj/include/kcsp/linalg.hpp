#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace kcsp {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

// y += c * x
inline void axpy(double c, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline void scale(std::span<double> x, double c) {
    for (double& v : x) v *= c;
}

// Symmetric n x n dense matrix in row-major storage.
struct SymEig {
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // column j (row-major: vectors[i*n + j]) for values[j]
};

// Cyclic Jacobi eigendecomposition; adequate for the small Gram matrices used
// by the solver (n up to a few hundred).
SymEig jacobi_eigensymm(std::vector<double> a, int n, int max_sweeps = 30);

// Minimum-norm least-squares solve of G x = b for symmetric PSD G via
// eigendecomposition pseudo-inverse with relative cutoff.
std::vector<double> solve_psd_minnorm(const std::vector<double>& gram, int n,
                                      const std::vector<double>& rhs,
                                      double rel_cutoff = 1e-12);

// Cholesky solve of (G + ridge*I) x = b; returns empty vector when the
// factorization breaks down.
std::vector<double> solve_psd_ridge(std::vector<double> gram, int n,
                                    std::vector<double> rhs, double ridge);

}  // namespace kcsp

#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

namespace kcsp {

// Adaptive Gauss-Kronrod (G7, K15) integration on [a, b].
// Splits intervals until the local error estimate drops below
// rel_tol * |segment| + abs_tol.
template <class Func>
double integrate_gk(const Func& f, double a, double b, double rel_tol = 1e-10,
                    double abs_tol = 1e-300, int max_intervals = 4000) {
    // nodes, Gauss-7 weights, Kronrod-15 weights
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529},
    };

    auto segment = [&f](double lo, double hi, double& err) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        const double y0 = f(mid);
        double g7 = nw[0][1] * y0;
        double k15 = nw[0][2] * y0;
        for (int i = 1; i < 8; ++i) {
            const double dx = half * nw[i][0];
            const double yy = f(mid + dx) + f(mid - dx);
            g7 += nw[i][1] * yy;
            k15 += nw[i][2] * yy;
        }
        g7 *= half;
        k15 *= half;
        err = std::pow(200.0 * std::abs(g7 - k15), 1.5);
        return k15;
    };

    std::vector<std::pair<double, double>> stack{{a, b}};
    double sum = 0.0;
    int used = 1;
    while (!stack.empty()) {
        const auto [lo, hi] = stack.back();
        stack.pop_back();
        double err;
        const double s = segment(lo, hi, err);
        if (err <= rel_tol * std::abs(s) + abs_tol || hi - lo < 1e-14 * (std::abs(b - a) + 1.0) ||
            used >= max_intervals) {
            sum += s;
            continue;
        }
        const double mid = 0.5 * (lo + hi);
        stack.emplace_back(lo, mid);
        stack.emplace_back(mid, hi);
        used += 2;
    }
    return sum;
}

}  // namespace kcsp

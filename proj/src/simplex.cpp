#include "hslab/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hslab {

namespace {
constexpr double kEps = 1e-11;
}

SimplexResult simplex_max(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b,
                          const std::vector<double>& c,
                          long max_iterations) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < m; ++i)
        if (b[i] < 0.0) throw std::invalid_argument("simplex_max requires b >= 0");

    const int cols = n + m + 1; // variables, slacks, rhs
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1.0;
        t[i][cols - 1] = b[i];
    }
    for (int j = 0; j < n; ++j) t[m][j] = -c[j];

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    SimplexResult res;
    const long bland_after = 4L * (m + n) + 1000;
    while (res.iterations < max_iterations) {
        // entering column
        int enter = -1;
        if (res.iterations < bland_after) {
            double best = -kEps;
            for (int j = 0; j < cols - 1; ++j)
                if (t[m][j] < best) {
                    best = t[m][j];
                    enter = j;
                }
        } else {
            for (int j = 0; j < cols - 1; ++j)
                if (t[m][j] < -kEps) {
                    enter = j;
                    break;
                }
        }
        if (enter < 0) {
            res.optimal = true;
            break;
        }
        // ratio test; Bland ties by smallest basis index
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (t[i][enter] > kEps) {
                const double ratio = t[i][cols - 1] / t[i][enter];
                if (ratio < best_ratio - kEps ||
                    (ratio < best_ratio + kEps && (leave < 0 || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            res.unbounded = true;
            break;
        }
        // pivot
        const double piv = t[leave][enter];
        for (int j = 0; j < cols; ++j) t[leave][j] /= piv;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
        ++res.iterations;
    }

    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
    res.duals.assign(m, 0.0);
    for (int i = 0; i < m; ++i) res.duals[i] = t[m][n + i];
    res.objective = t[m][cols - 1];
    return res;
}

} // namespace hslab

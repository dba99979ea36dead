#include "hslab/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hslab/simplex.hpp"

namespace hslab {

namespace {

PointSet whole(const MetricMeasureSpace& space) {
    PointSet d(space.size());
    std::iota(d.begin(), d.end(), 0);
    return d;
}

struct PairSystem {
    PointSet pts;                       // global indices, sorted
    std::vector<std::pair<int, int>> e; // local index pairs a < b
    std::vector<double> c;              // required sums |u_a - u_b| / d
    std::vector<double> w;              // weights per local point
    double c_max = 0.0;
};

PairSystem build_pairs(const MetricMeasureSpace& space, const std::vector<double>& u,
                       const PointSet& domain) {
    PairSystem s;
    s.pts = domain;
    const int m = static_cast<int>(domain.size());
    s.w.resize(m);
    for (int a = 0; a < m; ++a) s.w[a] = space.weight(domain[a]);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            const double need = std::abs(u[domain[a]] - u[domain[b]]) / space.dist(domain[a], domain[b]);
            s.e.emplace_back(a, b);
            s.c.push_back(need);
            s.c_max = std::max(s.c_max, need);
        }
    return s;
}

/// Lifts g on local points to the worst-feasible envelope: simultaneously
/// g_a <- max(g_a, 0, max_e (c_e - g_b)). The result is feasible because
/// every coordinate only moves up.
std::vector<double> repair(const PairSystem& s, const std::vector<double>& g) {
    std::vector<double> out(g.size());
    for (size_t a = 0; a < g.size(); ++a) out[a] = std::max(g[a], 0.0);
    for (size_t k = 0; k < s.e.size(); ++k) {
        const auto [a, b] = s.e[k];
        out[a] = std::max(out[a], s.c[k] - g[b]);
        out[b] = std::max(out[b], s.c[k] - g[a]);
    }
    return out;
}

double worst_violation(const PairSystem& s, const std::vector<double>& g) {
    double v = 0.0;
    for (size_t k = 0; k < s.e.size(); ++k) {
        const auto [a, b] = s.e[k];
        v = std::max(v, s.c[k] - g[a] - g[b]);
    }
    for (double x : g) v = std::max(v, -x);
    return v;
}

std::vector<double> scatter(const MetricMeasureSpace& space, const PairSystem& s,
                            const std::vector<double>& local) {
    std::vector<double> g(space.size(), 0.0);
    for (size_t a = 0; a < s.pts.size(); ++a) g[s.pts[a]] = local[a];
    return g;
}

double weighted_p_sum(const PairSystem& s, const std::vector<double>& g, double p) {
    double v = 0.0;
    for (size_t a = 0; a < g.size(); ++a) v += s.w[a] * std::pow(g[a], p);
    return v;
}

SolverReport solve_lp(const MetricMeasureSpace& space, const PairSystem& s) {
    SolverReport rep;
    rep.method = SolveMethod::exact_lp;
    const int m = static_cast<int>(s.pts.size());
    const int ne = static_cast<int>(s.e.size());
    // Dual of (min w.g : g_a + g_b >= c_e, g >= 0):
    //   max c.y  s.t.  sum_{e at a} y_e <= w_a,  y >= 0,
    // which starts feasible at y = 0. The primal solution is the vector of
    // optimal dual prices of the point rows.
    std::vector<std::vector<double>> a(m, std::vector<double>(ne, 0.0));
    std::vector<double> c_scaled(ne);
    for (int k = 0; k < ne; ++k) {
        a[s.e[k].first][k] = 1.0;
        a[s.e[k].second][k] = 1.0;
        c_scaled[k] = s.c[k] / s.c_max;
    }
    const auto lp = simplex_max(a, s.w, c_scaled);
    rep.iterations = lp.iterations;
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i) g[i] = std::max(0.0, lp.duals[i]) * s.c_max;
    rep.feasibility_violation = worst_violation(s, g);
    g = repair(s, g);
    const double primal = weighted_p_sum(s, g, 1.0);
    const double dual = lp.objective * s.c_max;
    rep.duality_gap = std::abs(primal - dual);
    rep.certified = lp.optimal && rep.duality_gap <= 1e-9 * std::max(1.0, primal);
    rep.g = scatter(space, s, g);
    rep.value = primal;
    return rep;
}

SolverReport solve_convex(const MetricMeasureSpace& space, const PairSystem& s, double p) {
    SolverReport rep;
    rep.method = SolveMethod::convex_descent;
    const int m = static_cast<int>(s.pts.size());
    const int ne = static_cast<int>(s.e.size());

    // Work on the normalized instance c' = c / c_max (the solution scales
    // linearly). Dual variables y >= 0 per pair; the Lagrangian minimum in g
    // is closed-form: g_a = (S_a / (p w_a))^{1/(p-1)} with S_a = sum y_e.
    PairSystem sn = s;
    for (auto& v : sn.c) v /= s.c_max;
    sn.c_max = 1.0;
    const auto& c = sn.c;
    std::vector<double> y(ne, 0.0);
    std::vector<double> sums(m, 0.0), g(m, 0.0);
    const double inv_pm1 = 1.0 / (p - 1.0);
    auto g_of = [&](int a, double sum) { return std::pow(sum / (p * s.w[a]), inv_pm1); };

    // Exact cyclic coordinate ascent: for one pair multiplier the dual
    // derivative c_e - g_a(S_a) - g_b(S_b) is strictly decreasing in y_e,
    // so the coordinate maximizer is the (projected) root. Closed form at
    // p = 2, monotone bisection otherwise.
    auto coordinate_root = [&](int a, int b, double ce, double sa0, double sb0) {
        if (p == 2.0) {
            const double alpha = 1.0 / (2.0 * s.w[a]) + 1.0 / (2.0 * s.w[b]);
            return std::max(0.0, (ce - sa0 / (2.0 * s.w[a]) - sb0 / (2.0 * s.w[b])) / alpha);
        }
        auto deriv = [&](double t) { return ce - g_of(a, sa0 + t) - g_of(b, sb0 + t); };
        if (deriv(0.0) <= 0.0) return 0.0;
        double hi = std::max({1.0, p * s.w[a] * std::pow(ce, p - 1.0) - sa0,
                              p * s.w[b] * std::pow(ce, p - 1.0) - sb0});
        while (deriv(hi) > 0.0) hi *= 2.0;
        double lo = 0.0;
        for (int it2 = 0; it2 < 200 && hi - lo > 1e-16 * hi; ++it2) {
            const double mid = 0.5 * (lo + hi);
            (deriv(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    auto dual_value = [&]() {
        double q = 0.0;
        for (int a = 0; a < m; ++a) q += s.w[a] * std::pow(g[a], p) - sums[a] * g[a];
        for (int k = 0; k < ne; ++k) q += y[k] * c[k];
        return q;
    };

    const long max_sweeps = 20000;
    double gap = std::numeric_limits<double>::infinity();
    double viol = worst_violation(sn, g);
    long sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        double moved = 0.0;
        for (int k = 0; k < ne; ++k) {
            const auto [a, b] = s.e[k];
            const double base_a = sums[a] - y[k];
            const double base_b = sums[b] - y[k];
            const double t = coordinate_root(a, b, c[k], base_a, base_b);
            moved += std::abs(t - y[k]);
            sums[a] = base_a + t;
            sums[b] = base_b + t;
            y[k] = t;
        }
        for (int a = 0; a < m; ++a) g[a] = g_of(a, sums[a]);
        // certified sandwich: F(repair(g)) - Q(y) with the raw iterate
        // nearly feasible
        const auto gr = repair(sn, g);
        const double primal = weighted_p_sum(s, gr, p);
        gap = primal - dual_value();
        viol = worst_violation(sn, g);
        if ((gap <= 1e-12 * std::max(1.0, primal) && viol <= 1e-11) || moved == 0.0) break;
    }
    rep.iterations = sweeps;
    rep.feasibility_violation = viol;
    double comp = 0.0;
    for (int k = 0; k < ne; ++k)
        comp += y[k] * std::abs(c[k] - g[s.e[k].first] - g[s.e[k].second]);
    rep.kkt_residual = std::max(viol, comp);
    const auto g_feas = repair(sn, g);
    std::vector<double> g_scaled(m);
    for (int a = 0; a < m; ++a) g_scaled[a] = g_feas[a] * s.c_max;
    rep.g = scatter(space, s, g_scaled);
    rep.value = std::pow(weighted_p_sum(s, g_scaled, p), 1.0 / p);
    rep.duality_gap = gap * std::pow(s.c_max, p);
    rep.certified = gap <= 1e-9 * std::max(1.0, weighted_p_sum(sn, g_feas, p)) && viol <= 1e-8;
    return rep;
}

// Depth-first enumeration of candidate bases: choose |pts| tight rows among
// the pair rows (g_a + g_b = c_e) and sign rows (g_a = 0), keeping only
// independent prefixes, solve, test feasibility, and keep the best
// objective. Exact for every p since the minimum of the (linear or
// concave) objective over the polyhedron is attained at a vertex.
struct VertexEnum {
    const PairSystem& s;
    double p;
    int m;
    std::vector<std::vector<double>> rows; // coefficient rows
    std::vector<double> rhs;
    std::vector<double> best_g;
    double best = std::numeric_limits<double>::infinity();
    long visited = 0;

    std::vector<std::vector<double>> echelon; // eliminated chosen rows
    std::vector<double> echelon_rhs;
    std::vector<int> chosen;

    explicit VertexEnum(const PairSystem& sys, double pp) : s(sys), p(pp) {
        m = static_cast<int>(s.pts.size());
        for (size_t k = 0; k < s.e.size(); ++k) {
            std::vector<double> r(m, 0.0);
            r[s.e[k].first] = 1.0;
            r[s.e[k].second] = 1.0;
            rows.push_back(std::move(r));
            rhs.push_back(s.c[k]);
        }
        for (int a = 0; a < m; ++a) {
            std::vector<double> r(m, 0.0);
            r[a] = 1.0;
            rows.push_back(std::move(r));
            rhs.push_back(0.0);
        }
    }

    bool reduce(std::vector<double>& r, double& b) const {
        for (size_t i = 0; i < echelon.size(); ++i) {
            int piv = -1;
            for (int j = 0; j < m; ++j)
                if (std::abs(echelon[i][j]) > 1e-12) {
                    piv = j;
                    break;
                }
            const double f = r[piv] / echelon[i][piv];
            if (f != 0.0) {
                for (int j = 0; j < m; ++j) r[j] -= f * echelon[i][j];
                b -= f * echelon_rhs[i];
            }
        }
        for (int j = 0; j < m; ++j)
            if (std::abs(r[j]) > 1e-10) return true;
        return false; // dependent row
    }

    void finish() {
        ++visited;
        // Back-substitute the echelon system.
        std::vector<double> g(m, 0.0);
        // Solve via dense elimination of the chosen rows (small systems).
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        for (size_t i = 0; i < chosen.size(); ++i) {
            a.push_back(rows[chosen[i]]);
            b.push_back(rhs[chosen[i]]);
        }
        for (int col = 0; col < m; ++col) {
            int piv = -1;
            double bestv = 1e-10;
            for (size_t r = col; r < a.size(); ++r)
                if (std::abs(a[r][col]) > bestv) {
                    bestv = std::abs(a[r][col]);
                    piv = static_cast<int>(r);
                }
            if (piv < 0) return; // singular (should be filtered by reduce)
            std::swap(a[col], a[piv]);
            std::swap(b[col], b[piv]);
            for (size_t r = 0; r < a.size(); ++r) {
                if (static_cast<int>(r) == col) continue;
                const double f = a[r][col] / a[col][col];
                if (f == 0.0) continue;
                for (int j = col; j < m; ++j) a[r][j] -= f * a[col][j];
                b[r] -= f * b[col];
            }
        }
        for (int i = 0; i < m; ++i) g[i] = b[i] / a[i][i];
        for (int i = 0; i < m; ++i)
            if (g[i] < -1e-10) return;
        for (size_t k = 0; k < s.e.size(); ++k)
            if (g[s.e[k].first] + g[s.e[k].second] < s.c[k] - 1e-9 * std::max(1.0, s.c[k])) return;
        double v = 0.0;
        for (int i = 0; i < m; ++i) v += s.w[i] * std::pow(std::max(g[i], 0.0), p);
        if (v < best) {
            best = v;
            best_g = g;
        }
    }

    void dfs(int from) {
        if (static_cast<int>(chosen.size()) == m) {
            finish();
            return;
        }
        const int need = m - static_cast<int>(chosen.size());
        for (int r = from; r + need <= static_cast<int>(rows.size()); ++r) {
            std::vector<double> red = rows[r];
            double rb = rhs[r];
            if (!reduce(red, rb)) continue;
            echelon.push_back(red);
            echelon_rhs.push_back(rb);
            chosen.push_back(r);
            dfs(r + 1);
            echelon.pop_back();
            echelon_rhs.pop_back();
            chosen.pop_back();
        }
    }
};

SolverReport solve_heuristic(const MetricMeasureSpace& space, const PairSystem& s, double p) {
    // Non-certified: start from the exact p = 1 vertex solution and relax
    // each coordinate to its feasibility floor (the objective increases in
    // every coordinate) until the sweep is stationary.
    SolverReport rep = solve_lp(space, s);
    std::vector<double> g(s.pts.size());
    for (size_t a = 0; a < s.pts.size(); ++a) g[a] = rep.g[s.pts[a]];
    for (int sweep = 0; sweep < 1000; ++sweep) {
        double moved = 0.0;
        for (size_t a = 0; a < g.size(); ++a) {
            double floor_a = 0.0;
            for (size_t k = 0; k < s.e.size(); ++k) {
                if (s.e[k].first == static_cast<int>(a)) floor_a = std::max(floor_a, s.c[k] - g[s.e[k].second]);
                if (s.e[k].second == static_cast<int>(a)) floor_a = std::max(floor_a, s.c[k] - g[s.e[k].first]);
            }
            moved += std::abs(g[a] - floor_a);
            g[a] = floor_a;
        }
        if (moved <= 1e-14) break;
    }
    rep.method = SolveMethod::heuristic;
    rep.certified = false;
    rep.g = scatter(space, s, g);
    rep.value = std::pow(weighted_p_sum(s, g, p), 1.0 / p);
    rep.feasibility_violation = worst_violation(s, g);
    return rep;
}

} // namespace

const char* method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::exact_lp: return "exact-lp";
        case SolveMethod::convex_descent: return "convex-descent";
        case SolveMethod::vertex_enumeration: return "vertex-enumeration";
        case SolveMethod::heuristic: return "heuristic";
    }
    return "unknown";
}

double lp_norm(const MetricMeasureSpace& space, const std::vector<double>& values, double p) {
    return lp_norm(space, values, p, whole(space));
}

double lp_norm(const MetricMeasureSpace& space, const std::vector<double>& values, double p,
               const PointSet& domain) {
    if (!(p > 0.0)) throw Error(Errc::bad_exponents, "lp_norm needs p > 0");
    double s = 0.0;
    for (int i : domain) s += space.weight(i) * std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

GradientCheck is_generalized_gradient(const MetricMeasureSpace& space, const std::vector<double>& u,
                                      const std::vector<double>& g) {
    return is_generalized_gradient(space, u, g, whole(space));
}

GradientCheck is_generalized_gradient(const MetricMeasureSpace& space, const std::vector<double>& u,
                                      const std::vector<double>& g, const PointSet& domain) {
    for (int i : domain)
        if (g[i] < 0.0) return {false, i, i, g[i]};
    GradientCheck out;
    out.slack = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (size_t a = 0; a < domain.size(); ++a)
        for (size_t b = a + 1; b < domain.size(); ++b) {
            const int i = domain[a], j = domain[b];
            const double gap = std::abs(u[i] - u[j]);
            const double slack = space.dist(i, j) * (g[i] + g[j]) - gap;
            if (slack < out.slack) {
                out.slack = slack;
                out.i = i;
                out.j = j;
                scale = std::max(1.0, gap);
            }
        }
    if (!std::isfinite(out.slack)) out.slack = 0.0; // fewer than two points
    out.ok = out.slack >= -1e-12 * scale;
    return out;
}

SolverReport minimal_gradient(const MetricMeasureSpace& space, const std::vector<double>& u, double p) {
    return minimal_gradient(space, u, p, whole(space));
}

SolverReport minimal_gradient(const MetricMeasureSpace& space, const std::vector<double>& u, double p,
                              const PointSet& domain) {
    if (!(p > 0.0)) throw Error(Errc::bad_exponents, "minimal_gradient needs p > 0");
    if (domain.size() < 2) throw Error(Errc::degenerate_domain, "domain needs at least two points");
    const PairSystem s = build_pairs(space, u, domain);
    if (s.c_max == 0.0) {
        SolverReport rep;
        rep.method = p == 1.0 ? SolveMethod::exact_lp
                              : (p > 1.0 ? SolveMethod::convex_descent : SolveMethod::vertex_enumeration);
        rep.g.assign(space.size(), 0.0);
        rep.value = 0.0;
        rep.certified = true;
        return rep;
    }
    if (p == 1.0) return solve_lp(space, s);
    if (p > 1.0) return solve_convex(space, s, p);
    if (domain.size() <= 8) return minimal_gradient_by_enumeration(space, u, p, domain);
    return solve_heuristic(space, s, p);
}

SolverReport minimal_gradient_by_enumeration(const MetricMeasureSpace& space,
                                             const std::vector<double>& u, double p,
                                             const PointSet& domain) {
    if (domain.size() < 2) throw Error(Errc::degenerate_domain, "domain needs at least two points");
    const PairSystem s = build_pairs(space, u, domain);
    SolverReport rep;
    rep.method = SolveMethod::vertex_enumeration;
    if (s.c_max == 0.0) {
        rep.g.assign(space.size(), 0.0);
        rep.certified = true;
        return rep;
    }
    VertexEnum ve(s, p);
    ve.dfs(0);
    rep.enumerated = ve.visited;
    rep.certified = ve.best_g.size() == s.pts.size();
    if (!rep.certified) throw Error(Errc::bad_params, "vertex enumeration found no feasible vertex");
    auto g = repair(s, ve.best_g);
    rep.g = scatter(space, s, g);
    rep.value = std::pow(weighted_p_sum(s, g, p), 1.0 / p);
    rep.feasibility_violation = worst_violation(s, ve.best_g);
    return rep;
}

double m_norm(const MetricMeasureSpace& space, const std::vector<double>& u, double p) {
    return lp_norm(space, u, p) + minimal_gradient(space, u, p).value;
}

double ball_mean(const MetricMeasureSpace& space, const std::vector<double>& u, const PointSet& set) {
    if (set.empty()) throw Error(Errc::empty_set, "mean over empty set");
    // anchored at the first member so a constant function returns the
    // constant bit for bit
    const double anchor = u[set.front()];
    double num = 0.0, den = 0.0;
    for (int i : set) {
        num += space.weight(i) * (u[i] - anchor);
        den += space.weight(i);
    }
    return anchor + num / den;
}

ShiftResult best_constant_shift_values(const std::vector<double>& values,
                                       const std::vector<double>& weights, double q) {
    if (values.empty()) throw Error(Errc::empty_set, "shift over empty set");
    if (!(q > 0.0)) throw Error(Errc::bad_exponents, "best_constant_shift needs q > 0");
    double total = 0.0;
    for (double w : weights) total += w;
    auto objective = [&](double gamma) {
        double sum = 0.0;
        for (size_t i = 0; i < values.size(); ++i)
            sum += weights[i] * std::pow(std::abs(values[i] - gamma), q);
        return std::pow(sum / total, 1.0 / q);
    };
    const double lo0 = *std::min_element(values.begin(), values.end());
    const double hi0 = *std::max_element(values.begin(), values.end());
    ShiftResult out;
    if (lo0 == hi0) return {lo0, 0.0, true};

    if (q >= 1.0) {
        // convex in gamma: golden-section to 1e-10 over the data range
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = lo0, hi = hi0;
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = objective(x1), f2 = objective(x2);
        const double tol = 1e-10 * std::max(1.0, hi0 - lo0);
        while (hi - lo > tol) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = objective(x2);
            }
        }
        out.gamma = 0.5 * (lo + hi);
        out.value = objective(out.gamma);
        for (double v : values) { // breakpoints can beat the midpoint at kinks
            const double f = objective(v);
            if (f < out.value) {
                out.value = f;
                out.gamma = v;
            }
        }
        out.certified = true;
        return out;
    }

    // q < 1: between consecutive data values the map is concave, so the
    // minimum is at a data value; the uniform grid is scanned as well and
    // the result is flagged approximate.
    out.certified = false;
    out.value = std::numeric_limits<double>::infinity();
    for (double v : values) {
        const double f = objective(v);
        if (f < out.value) {
            out.value = f;
            out.gamma = v;
        }
    }
    for (int k = 0; k <= 1000; ++k) {
        const double gamma = lo0 + (hi0 - lo0) * k / 1000.0;
        const double f = objective(gamma);
        if (f < out.value) {
            out.value = f;
            out.gamma = gamma;
        }
    }
    return out;
}

ShiftResult best_constant_shift(const MetricMeasureSpace& space, const std::vector<double>& u,
                                double q, const PointSet& set) {
    if (set.empty()) throw Error(Errc::empty_set, "shift over empty set");
    std::vector<double> vals, wts;
    vals.reserve(set.size());
    wts.reserve(set.size());
    for (int i : set) {
        vals.push_back(u[i]);
        wts.push_back(space.weight(i));
    }
    return best_constant_shift_values(vals, wts, q);
}

} // namespace hslab

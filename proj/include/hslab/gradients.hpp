#pragma once

#include <string>

#include "hslab/space.hpp"

namespace hslab {

/// A function together with a candidate generalized gradient: g >= 0 with
/// |u(x) - u(y)| <= d(x,y) (g(x) + g(y)) on the intended domain.
struct HajlaszPair {
    std::vector<double> u;
    std::vector<double> g;
    std::string label;
};

/// Weighted p-norm (sum_i w_i |v_i|^p)^{1/p} over the domain; a quasi-norm
/// for p < 1.
double lp_norm(const MetricMeasureSpace& space, const std::vector<double>& values, double p);
double lp_norm(const MetricMeasureSpace& space, const std::vector<double>& values, double p,
               const PointSet& domain);

struct GradientCheck {
    bool ok = true;
    int i = -1, j = -1;    // pair minimizing the slack
    double slack = 0.0;    // d(i,j)(g_i+g_j) - |u_i-u_j| at that pair
};

/// Checks the pointwise gradient inequality over all pairs in the domain.
/// A tiny relative tolerance absorbs roundoff in constructed pairs.
GradientCheck is_generalized_gradient(const MetricMeasureSpace& space, const std::vector<double>& u,
                                      const std::vector<double>& g);
GradientCheck is_generalized_gradient(const MetricMeasureSpace& space, const std::vector<double>& u,
                                      const std::vector<double>& g, const PointSet& domain);

enum class SolveMethod { exact_lp, convex_descent, vertex_enumeration, heuristic };
const char* method_name(SolveMethod m);

struct SolverReport {
    std::vector<double> g; // full-length vector, zero outside the domain
    double value = 0.0;    // weighted p-norm over the domain
    SolveMethod method = SolveMethod::exact_lp;
    bool certified = false;
    double duality_gap = 0.0;            // objective vs dual bound (exact-lp, convex-descent)
    double kkt_residual = 0.0;           // convex-descent stopping residual
    double feasibility_violation = 0.0;  // worst pre-repair constraint violation
    long iterations = 0;
    long enumerated = 0;                 // vertices visited (vertex-enumeration)
};

/// Minimizes the weighted p-norm of g subject to g >= 0 and
/// g_i + g_j >= |u_i - u_j| / d(i,j) over all pairs in the domain.
///
///   p = 1      exact linear program (tableau simplex on the dual, which
///              starts feasible); the primal solution is read off the
///              optimal dual prices and the duality gap is reported.
///   p > 1      projected gradient ascent on the Lagrange dual of the
///              smooth p-th power objective; the inner minimization is
///              closed-form, so stationarity is exact and the duality gap
///              plus the constraint residual certify the result.
///   0 < p < 1  the objective is concave, so the minimum sits at a vertex:
///              exact vertex enumeration for domains of at most 8 points,
///              otherwise a non-certified descent from the p = 1 solution.
SolverReport minimal_gradient(const MetricMeasureSpace& space, const std::vector<double>& u, double p);
SolverReport minimal_gradient(const MetricMeasureSpace& space, const std::vector<double>& u, double p,
                              const PointSet& domain);

/// Brute-force vertex enumeration over the constraint polyhedron (tight
/// sets of pair constraints and sign constraints). Exact for any p; cost
/// grows combinatorially, intended for domains of at most ~8 points.
SolverReport minimal_gradient_by_enumeration(const MetricMeasureSpace& space,
                                             const std::vector<double>& u, double p,
                                             const PointSet& domain);

/// ||u||_{L^p} + inf_{g} ||g||_{L^p} over the whole space.
double m_norm(const MetricMeasureSpace& space, const std::vector<double>& u, double p);

/// Weighted mean of u over a nonempty point set.
double ball_mean(const MetricMeasureSpace& space, const std::vector<double>& u, const PointSet& set);

struct ShiftResult {
    double gamma = 0.0;
    double value = 0.0;
    bool certified = true; // false for q < 1 (grid search)
};

/// Minimizes gamma -> (mean_E |u - gamma|^q)^{1/q}. Convex for q >= 1
/// (golden-section to 1e-10 over [min u, max u], refined against the data
/// values); for q < 1 the per-interval concavity puts the minimum at a data
/// value, and a 1000-point grid is scanned as well.
ShiftResult best_constant_shift(const MetricMeasureSpace& space, const std::vector<double>& u,
                                double q, const PointSet& set);

/// Same minimization over explicit (value, weight) pairs.
ShiftResult best_constant_shift_values(const std::vector<double>& values,
                                       const std::vector<double>& weights, double q);

} // namespace hslab

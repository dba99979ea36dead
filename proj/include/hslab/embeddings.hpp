#pragma once

#include <limits>
#include <optional>
#include <string>

#include "hslab/constructions.hpp"
#include "hslab/gradients.hpp"
#include "hslab/space.hpp"

namespace hslab {

enum class IneqKind {
    sobolev,              // (mean_B0 |u|^{p*})^{1/p*} vs (mu(sB0)/R0^s)^{1/p} [R0 (mean g^p)^{1/p} + (mean |u|^p)^{1/p}]
    poincare,             // inf_gamma oscillation vs (mu(sB0)/R0^s)^{1/p} R0 (mean g^p)^{1/p}
    sobolev_doubling,     // same lhs vs R0 (mean g^p)^{1/p} + (mean |u|^p)^{1/p}
    poincare_doubling,    // inf_gamma oscillation vs R0 (mean g^p)^{1/p}
    exponential,          // mean_B0 exp((C1 |u-u_B0| / ||g||_{L^s(sB0)})^gamma) <= C2
    exponential_doubling, // exponent carries mu(sB0)^{1/s} / R0
    holder_global,        // |u(x)-u(y)| <= C d(x,y)^{1-s/p} ||g||_{L^p(X)}
    holder_local,         // pairs in B0, normalization R0^{s/p} (mean_{sB0} g^p)^{1/p}
    global_sobolev,       // whole-space integrals, no ball normalization
    global_poincare,
};

const char* kind_name(IneqKind k);
std::optional<IneqKind> kind_from_name(const std::string& name);

struct InequalityCase {
    IneqKind kind = IneqKind::sobolev;
    double s = 1.0;
    double p = 0.5;
    double sigma = 2.0;
    double c1 = 1.0;    // exponential kinds
    double gamma = 1.0; // exponential kinds

    double p_star() const; // sp/(s-p), requires p < s
    void validate() const; // p<s for sobolev/poincare kinds, p=s exponential, p>s holder
};

struct IneqValue {
    double lhs = 0.0;
    double rhs_core = 0.0; // right side with the universal constant stripped
    bool degenerate = false;
    /// The constant this pair demands: lhs / rhs_core, +inf on degenerate
    /// rows (rhs_core = 0 with lhs > 0), 0 when lhs = 0.
    double ratio() const;
};

/// Evaluates both sides of the mean-type inequalities (sobolev / poincare /
/// their doubling and global forms) for one pair on one ball. Exponential
/// and Hoelder kinds are handled by exp_integral / holder_constant.
/// Throws not_a_gradient when g fails the pointwise inequality on the
/// dilated ball (skippable for pre-verified families).
IneqValue eval_inequality(const MetricMeasureSpace& space, const InequalityCase& cse, const Ball& b0,
                          const std::vector<double>& u, const std::vector<double>& g,
                          bool check_gradient = true);

/// mean_{B0} exp((c1 |u - u_{B0}| / ||g||_{L^s(sigma B0)})^gamma) dmu.
/// Requires a positive gradient norm on the dilated ball.
double exp_integral(const MetricMeasureSpace& space, const Ball& b0, double sigma, double s,
                    double c1, double gamma, const std::vector<double>& u,
                    const std::vector<double>& g);

/// Variant with the doubling normalization mu(sigma B0)^{1/s} / R0 in the
/// exponent.
double exp_integral_doubling(const MetricMeasureSpace& space, const Ball& b0, double sigma, double s,
                             double c1, double gamma, const std::vector<double>& u,
                             const std::vector<double>& g);

/// Largest Hoelder ratio demanded by the pair: global kind runs over all
/// pairs of the space against ||g||_{L^p(X)}; local kind over pairs inside
/// b0 against R0^{s/p} (mean_{sigma B0} g^p)^{1/p}.
double holder_constant(const MetricMeasureSpace& space, const InequalityCase& cse,
                       const std::vector<double>& u, const std::vector<double>& g,
                       std::optional<Ball> b0 = std::nullopt);

struct RatioRow {
    Ball ball;
    int member = -1; // corpus index of the best pair for this ball
    double lhs = 0.0;
    double rhs_core = 0.0;
    double ratio = 0.0;
};

struct EmbeddingReport {
    InequalityCase cse;
    std::vector<RatioRow> rows; // one per ball: the best pair on that ball
    double constant = 0.0;      // sup of ratios; a lower bound for the universal constant
    int witness_row = -1;
};

/// Empirical constant over a declared corpus of pairs and a list of balls:
/// the sup of demanded ratios (mean-type kinds), the minimal admissible C2
/// (exponential kinds, given c1 and gamma), or the largest Hoelder ratio.
/// The result is a lower bound on the universal constant of the inequality.
EmbeddingReport estimate_constant(const MetricMeasureSpace& space, const InequalityCase& cse,
                                  const std::vector<HajlaszPair>& corpus,
                                  const std::vector<Ball>& balls);

// ---------------------------------------------------------------------------
// Chaining tracer: executes the level-set/chaining proof of the ball
// embedding theorem on one input, logging every inequality it relies on.
// ---------------------------------------------------------------------------

struct ChainCheck {
    std::string what;
    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = true;
};

struct ChainStep {
    int from = -1;
    int to = -1;
    double radius = 0.0;          // r_{k-i}
    double distance = 0.0;        // d(from, to), must be < radius
    double ball_mass = 0.0;       // mu(B(from, radius))
    double required_mass = 0.0;   // b * radius^s
    double complement_mass = 0.0; // mu(sigma B0 minus E_{level})
};

struct ChainRecord {
    int k = 0;
    int start = -1;          // chosen x_k in E_k intersect B0
    double a_k = 0.0;        // sup over E_k intersect B0 of |u - gamma|
    std::vector<ChainStep> steps;
    double telescoped = 0.0;      // sum of 2^{k-i+1} d(x_{k-i}, x_{k-i-1})
    double geometric_bound = 0.0; // 4 * 2^{1/s} b^{-1/s} G^{1/s} sum 2^{j(1-p/s)}
};

struct LevelSet {
    int j = 0;
    double threshold = 0.0; // 2^j
    double mass = 0.0;
    PointSet members;
};

struct ChainCertificate {
    Ball b0;
    double sigma = 2.0, s = 1.0, p = 0.5, b = 0.0;
    bool trivial = false; // zero gradient integral: u constant, nothing to chain
    std::vector<double> g_shifted;
    double gp_integral = 0.0; // integral of shifted g^p over sigma B0
    int k0 = 0;
    int j_lo = 0, j_hi = 0;
    std::vector<LevelSet> levels;
    double gamma = 0.0;
    int gamma_point = -1;
    std::vector<ChainRecord> chains;
    std::vector<ChainCheck> checks;
    bool all_ok = false;
};

/// Requires sigma > 1, the V(sigma B0, s, b) condition (verified, else
/// v_condition_fails), and g in D(u) on sigma B0. Applies the gradient
/// shift g + (mean g^p)^{1/p} itself, builds the level sets E_j, computes
/// k0, verifies the half-mass lemma for E_{k0}, and runs a chain from every
/// populated level above k0 down to E_{k0}, checking the Chebyshev bounds,
/// each half-mass application, every step distance, and the telescoped
/// geometric bound to 1e-9. A required nonempty intersection that turns out
/// empty raises chain_stuck.
ChainCertificate chaining_trace(const MetricMeasureSpace& space, const Ball& b0, double sigma,
                                double s, double p, double b, const std::vector<double>& u,
                                const std::vector<double>& g);

} // namespace hslab

#pragma once

#include <limits>
#include <optional>
#include <string>

#include "hslab/embeddings.hpp"
#include "hslab/space.hpp"

namespace hslab {

/// A finite run of the self-improvement scheme: terms a_j in [lower, upper]
/// with exponents 0 < p < q and factors rho, tau. The hypothesis
/// a_{j+1}^{1/q} <= rho tau^j a_j^{1/p} (for an infinite bounded sequence)
/// forces a_1^{1-p/q} rho^p tau^{pq/(q-p)} >= 1.
struct IterationInstance {
    std::vector<double> a;
    double lower = 0.0, upper = 0.0;
    double p = 0.0, q = 0.0;
    double rho = 0.0, tau = 0.0;
};

struct IterationVerdict {
    bool hypothesis = false;         // all listed steps satisfy the inequality
    bool conclusion = false;         // a_1^{1-p/q} rho^p tau^{pq/(q-p)} >= 1
    int first_violation = -1;        // 1-based step index, -1 when none
    double implied_lower_bound = 0.0; // a_1 >= [rho^p tau^{pq/(q-p)}]^{-q/(q-p)}
};

IterationVerdict iteration_check(const IterationInstance& inst);

enum class TheoremCase { thm41b, thm41c, thm44b, thm44c, thm51, thm54, thm61, thm62 };

const char* case_name(TheoremCase c);
std::optional<TheoremCase> case_from_name(const std::string& name);
bool case_is_relative(TheoremCase c);  // nested-pair form
bool case_uses_lambda(TheoremCase c);  // needs the uniform-perfectness constant

/// Measured constants feeding the extraction formulas.
struct ConstantsRecord {
    double s = 0.0, p = 0.0;
    double gamma = 1.0, beta = 2.0;
    std::optional<double> c_s, c_p, c_h, c1, c2, lambda;
};

/// The explicit lower-mass constants extracted by the reverse proofs:
///   thm41b: 2^{-s} (8 C_S)^{-p}
///   thm41c: 2^{-s} (24 C_P lambda^{-2})^{-p} lambda^s
///   thm51:  C_1^s lambda^{2s} / (96^s (2s/gamma)^{s/gamma} sqrt(C_2))
///   thm61:  (lambda / C_H)^p
double extract_kappa(TheoremCase tcase, const ConstantsRecord& c);

struct RelativeKappa {
    double kappa = 0.0;
    double exponent = 0.0; // s, or beta s/(beta-1) for the exponential case
};

/// Nested-pair constants:
///   thm44b: (8 C_S)^{-s} 2^{-s^2/p},          exponent s
///   thm44c: (lambda^2/(24 C_P))^s 2^{-s^2/p},  exponent s
///   thm54:  (C_1 lambda^2/(24 (beta s/gamma)^{1/gamma} C_2^{1/(beta s)}))^s
///             * 2^{-beta^2 s/(beta-1)^2},       exponent beta s/(beta-1)
///   thm62:  (lambda / C_H)^p,                  exponent s
RelativeKappa extract_relative_kappa(TheoremCase tcase, const ConstantsRecord& c);

struct PipelineParams {
    double s = 1.0;
    double p = std::numeric_limits<double>::quiet_NaN(); // default: s/2 (p<s cases), 2s (holder)
    double sigma = 2.0;
    double c1 = 1.0;
    double gamma = 1.0;
    double beta = 2.0;
    double resolution = std::numeric_limits<double>::quiet_NaN(); // default: 3 x min gap
    int j_max = 64;
};

enum class BallPath { direct, fat_ball, trivial, skipped };
const char* path_name(BallPath p);

struct BallVerdict {
    Ball inner;
    std::optional<Ball> outer; // relative cases
    BallPath path = BallPath::direct;
    double c_hat = 0.0; // constant demanded by the test family at this ball
    double kappa = 0.0; // extracted bound, path correction included
    double lhs = 0.0;   // mu(B), or mass ratio for relative cases
    double rhs = 0.0;   // kappa r^s, or kappa (r/R)^exponent
    bool pass = false;
    std::string note;
};

struct ExtractionReport {
    TheoremCase tcase = TheoremCase::thm41b;
    PipelineParams params;
    double lambda_eff = std::numeric_limits<double>::quiet_NaN();
    std::vector<BallVerdict> rows;
    int n_pass = 0, n_fail = 0, n_skip = 0, n_trivial = 0;
    bool all_pass = false; // no failures among evaluated rows
    double skip_fraction = 0.0;
};

/// Runs the reverse-direction argument of one theorem case over every
/// candidate ball (radii swept over critical radii in [resolution, diam]):
/// builds the proof's test family on the ball (first-kind cutoffs for the
/// sobolev cases, second-kind for the poincare/exponential cases, a single
/// bump for the Hoelder cases), measures the constant the family demands of
/// the assumed inequality, extracts kappa from it, and asserts the mass
/// bound with relative tolerance 1e-9. Relative cases run over same-center
/// nested pairs B(x,r) inside B(x,R).
///
/// Balls where the second-kind construction needs the fat-ball reduction
/// get the inner family built there and the lambda^exponent correction
/// applied; balls where the discrete space offers no fat ball or no annulus
/// point are skipped and logged (never silently). Any FAIL row is an
/// implementation bug on valid inputs.
ExtractionReport pipeline_verify(const MetricMeasureSpace& space, TheoremCase tcase,
                                 const PipelineParams& params);

} // namespace hslab

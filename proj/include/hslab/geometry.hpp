#pragma once

#include <limits>
#include <optional>

#include "hslab/space.hpp"

namespace hslab::geometry {

/// phi_x(r) = sup{ t in [0,r] : mu(B(x,t)) <= mu(B(x,r))/2 }, the largest
/// radius whose open ball carries at most half the mass of B(x,r). Exact on
/// atomic spaces: mu(B(x,.)) is a left-continuous step function, so the sup
/// is attained at a critical radius (or at r, iff r = 0).
///
/// Satisfies mu(B(x,phi)) <= mu(B(x,r))/2 <= mu(closed B(x,phi)), phi is
/// nondecreasing in r, and phi(r) in [0,r] with equality iff r = 0.
double phi(const MetricMeasureSpace& space, int x, double r);

/// Iterates phi^0(r) = r, phi^j = phi(phi^{j-1}); returns count+1 values.
/// On finite spaces the sequence reaches 0 after finitely many steps
/// (atoms carry positive mass, so the continuum strict-decrease statement
/// does not apply).
std::vector<double> phi_iterates(const MetricMeasureSpace& space, int x, double r, int count);

struct UniformPerfectness {
    /// Largest lambda in (0,1) such that B(x,r) \ B(x,lambda r) is nonempty
    /// for every center x and every r in [resolution, diam] with
    /// X \ B(x,r) nonempty; absent when some admissible ball is a bare
    /// singleton (annulus empty for every positive lambda).
    std::optional<double> lambda;
    /// min(lambda, 0.19): the extraction formulas assume lambda < 1/5.
    double lambda_eff = std::numeric_limits<double>::quiet_NaN();
    int witness_center = -1;
    double witness_radius = std::numeric_limits<double>::quiet_NaN();
};
UniformPerfectness uniform_perfectness(const MetricMeasureSpace& space, double resolution);

struct MassBound {
    double kappa = 0.0;
    Ball witness;
    double witness_ratio = 0.0;
};

/// Exact infimum of mu(B(x,r)) / r^s over all centers and r in
/// [r_min, diam]. The ratio is decreasing in r on each constancy interval,
/// so the infimum sits at right endpoints of the intervals (critical radii)
/// or at r = diam.
MassBound lower_mass_constant(const MetricMeasureSpace& space, double s, double r_min);

struct DoublingBound {
    double constant = 1.0;
    Ball witness; // inner ball B(x,r) attaining the sup of mu(2B)/mu(B)
};

/// Exact sup over centers and radii of mu(B(x,2r)) / mu(B(x,r)), r > 0.
/// Both measures are constant on half-open intervals between breakpoints
/// {d} union {d/2}, so sampling the breakpoints is exact. Always > 1 for
/// spaces with at least two points.
DoublingBound doubling_constant(const MetricMeasureSpace& space);

struct RelativeMassBound {
    double kappa = 0.0;
    Ball inner;
    Ball outer;
};

/// Exact infimum of [mu(B(x,r))/mu(B(y,R))] * (R/r)^s over nested pairs
/// B(x,r) subset of B(y,R), 0 < r <= R. In r the infimum sits at right
/// endpoints; in R it is the limit from above at a critical radius, i.e.
/// the denominator ball is evaluated closed. Nestedness is checked by
/// member containment against that closed ball.
RelativeMassBound relative_lower_bound(const MetricMeasureSpace& space, double s);

struct VConditionResult {
    bool holds = false;
    double required_b = 0.0;
    double worst_ratio = 0.0; // min over admissible balls of mu(B)/r^s
    Ball witness;
};

/// The V(sigma B0, s, b) condition: mu(B(x,r)) >= b r^s for every ball with
/// members inside sigma B0 and r in (0, sigma R0]. Exact via critical radii;
/// returns the minimizing (x, r) either way.
VConditionResult v_condition(const MetricMeasureSpace& space, const Ball& b0, double sigma,
                             double s, double b);

struct FatBall {
    int center = -1;
    double radius = 0.0;
    Ball parent;
    double phi_parent = 0.0; // phi_x(r) of the parent ball
};

/// Inside a ball B(x,r) with r > 3 phi_x(r) / lambda^2 (0 < lambda < 1/5),
/// picks the lowest-index point xt with d(x, xt) in
/// [phi + 2 lambda^2 r, phi/lambda + 2 lambda r) and returns the ball
/// B(xt, rt) with rt = 2 phi / lambda + 2 lambda r. The result satisfies
/// lambda r < rt <= r, closed B(x,phi) inside B(xt,rt) inside B(x,r), the
/// half-mass bound mu(B(xt, lambda rt / 2)) <= mu(B(xt,rt))/2, and hence
/// rt <= 3 phi_xt(rt) / lambda^2.
///
/// Throws precondition_radius when r <= 3 phi / lambda^2 and empty_annulus
/// when the discrete space has no point in the annulus.
FatBall fat_ball(const MetricMeasureSpace& space, int x, double r, double lambda);

struct WitnessedValue {
    double value = 0.0;
    Ball witness;
};

struct GeometrySummary {
    double s = 0.0;
    double resolution = 0.0;
    double kappa = 0.0;
    Ball kappa_witness;
    double doubling = 1.0;
    Ball doubling_witness;
    double relative_kappa = 0.0;
    Ball relative_inner;
    Ball relative_outer;
    std::optional<double> lambda;
    double lambda_eff = std::numeric_limits<double>::quiet_NaN();
};

/// Runs every analyzer at the given exponent and resolution.
GeometrySummary analyze(const MetricMeasureSpace& space, double s, double resolution);

/// Candidate radii for exact sweeps over [r_min, diam] from one center:
/// the critical radii in range plus diam itself.
std::vector<double> sweep_radii(const MetricMeasureSpace& space, int center, double r_min);

} // namespace hslab::geometry

#pragma once

#include <limits>
#include "hslab/gradients.hpp"
#include "hslab/space.hpp"

namespace hslab {

/// The (R-r)^{-1}-Lipschitz cutoff: 1 on the closed ball of radius r
/// around x, a linear ramp (R - d)/(R - r) on B(x,R) \ B(x,r), 0 outside
/// B(x,R). Its gradient is (R-r)^{-1} times the indicator of B(x,R).
struct BumpPair {
    std::vector<double> u;
    std::vector<double> g;
    int center = 0;
    double r = 0.0;
    double R = 0.0;
    double lipschitz = 0.0; // (R - r)^{-1}
};

BumpPair bump(const MetricMeasureSpace& space, int x, double r, double R);

enum class FamilyKind { bump, c1, c2 };

struct FamilyMember {
    int j = 0;
    double r_out = 0.0;    // outer radius r_j (support of u_j)
    double r_in = 0.0;     // inner radius r_{j+1} (u_j = 1 on its closed ball)
    double lipschitz = 0.0;
    std::vector<double> u;
    std::vector<double> g;
    double mass_outer = 0.0; // mu(B(x, r_j)), open
    double mass_inner = 0.0; // mu(B(x, r_{j+1})), open
};

/// An indexed family of cutoff pairs on a base ball, with the analytic
/// metadata the decay arguments need. The first family uses radii
/// r_j = (2^{-j-1} + 1/2) r with gradients 2^{j+2} r^{-1} on B(x, r_j);
/// the second uses the same profile at the half-mass scale phi_x(r), with
/// gradients 2^{j+2} phi_x(r)^{-1}.
struct ConstructionFamily {
    FamilyKind kind = FamilyKind::c1;
    Ball base;
    double lambda = std::numeric_limits<double>::quiet_NaN(); // c2 only
    double phi_r = std::numeric_limits<double>::quiet_NaN();  // c2 only
    int stabilization_index = 0; // first j with B^j equal to the limit set
    std::vector<FamilyMember> members;
};

/// Family on B = B(x, r) for j = 1 .. min(j_max, stabilization + 4). The
/// member point sets shrink monotonically to the closed ball of radius r/2,
/// so the recorded stabilization index always exists.
ConstructionFamily construction1(const MetricMeasureSpace& space, const Ball& b, int j_max = 64);

/// Inner family at scale phi_x(r); requires 0 < lambda < 1/5 and
/// r <= 3 phi_x(r) / lambda^2 (throws precondition_radius otherwise, and
/// zero_phi when phi_x(r) = 0 makes the construction impossible).
ConstructionFamily construction2(const MetricMeasureSpace& space, const Ball& b, double lambda,
                                 int j_max = 64);

/// Checks that |u_j - gamma| >= 1/2 on a subset of the base ball of mass at
/// least mu(B^{j+1}) (the inner open ball of member j). True for every
/// gamma on a valid second-kind family.
bool verify_halfmass(const MetricMeasureSpace& space, const ConstructionFamily& family, int j,
                     double gamma);

/// Largest difference quotient |u_i - u_j| / d(i,j) over the point set.
double measured_lipschitz(const MetricMeasureSpace& space, const std::vector<double>& u);

} // namespace hslab

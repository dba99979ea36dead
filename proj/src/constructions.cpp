#include "hslab/constructions.hpp"

#include <cmath>

#include "hslab/geometry.hpp"

namespace hslab {

BumpPair bump(const MetricMeasureSpace& space, int x, double r, double R) {
    if (!(r >= 0.0) || !(R > r) || !std::isfinite(R))
        throw Error(Errc::bad_radii, "bump needs 0 <= r < R < infinity");
    BumpPair out;
    out.center = x;
    out.r = r;
    out.R = R;
    out.lipschitz = 1.0 / (R - r);
    const int n = space.size();
    out.u.assign(n, 0.0);
    out.g.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double d = space.dist(x, i);
        if (d <= r)
            out.u[i] = 1.0;
        else if (d < R)
            out.u[i] = (R - d) / (R - r);
        if (d < R) out.g[i] = out.lipschitz;
    }
    return out;
}

namespace {

ConstructionFamily build_family(const MetricMeasureSpace& space, const Ball& b, double scale,
                                FamilyKind kind, int j_max) {
    ConstructionFamily fam;
    fam.kind = kind;
    fam.base = b;
    const int x = b.center;
    // Radii (2^{-j-1} + 1/2) * scale decrease strictly to scale/2, so the
    // open balls shrink to the closed ball of radius scale/2. A distance
    // within one rounding error of scale/2 can stall the detection, so the
    // index is capped where the demanded ratios are suppressed by 2^{-40}
    // anyway.
    const int limit_count = space.ball_count(closed_ball(x, 0.5 * scale));
    const int j_cap = std::min(j_max, 40);
    int stab = -1;
    auto radius_at = [&](int j) { return (std::pow(2.0, -j - 1) + 0.5) * scale; };
    for (int j = 1; j <= j_cap; ++j) {
        const double rj = radius_at(j);
        const double rj1 = radius_at(j + 1);
        FamilyMember m;
        m.j = j;
        m.r_out = rj;
        m.r_in = rj1;
        m.lipschitz = std::pow(2.0, j + 2) / scale;
        auto pair = bump(space, x, rj1, rj);
        m.u = std::move(pair.u);
        m.g = std::move(pair.g); // (r_j - r_{j+1})^{-1} indicator of B(x, r_j)
        m.mass_outer = space.ball_mass(open_ball(x, rj));
        m.mass_inner = space.ball_mass(open_ball(x, rj1));
        fam.members.push_back(std::move(m));
        if (stab < 0 && space.ball_count(open_ball(x, rj)) == limit_count) stab = j;
        if (stab > 0 && j >= stab + 4) break;
    }
    fam.stabilization_index = stab > 0 ? stab : j_cap;
    return fam;
}

} // namespace

ConstructionFamily construction1(const MetricMeasureSpace& space, const Ball& b, int j_max) {
    if (!(b.radius > 0.0) || b.radius > space.diameter())
        throw Error(Errc::invalid_ball, "construction needs a ball with radius in (0, diam]");
    return build_family(space, b, b.radius, FamilyKind::c1, j_max);
}

ConstructionFamily construction2(const MetricMeasureSpace& space, const Ball& b, double lambda,
                                 int j_max) {
    if (!(lambda > 0.0 && lambda < 0.2))
        throw Error(Errc::lambda_out_of_range, "construction2 needs lambda in (0, 1/5)");
    if (!(b.radius > 0.0) || b.radius > space.diameter())
        throw Error(Errc::invalid_ball, "construction needs a ball with radius in (0, diam]");
    const double ph = geometry::phi(space, b.center, b.radius);
    if (ph == 0.0)
        throw Error(Errc::zero_phi, "phi_x(r) = 0: no inner half-mass scale at this radius",
                    {b.center});
    if (!(b.radius <= 3.0 * ph / (lambda * lambda)))
        throw Error(Errc::precondition_radius, "construction2 needs r <= 3 phi_x(r)/lambda^2");
    auto fam = build_family(space, b, ph, FamilyKind::c2, j_max);
    fam.lambda = lambda;
    fam.phi_r = ph;
    return fam;
}

bool verify_halfmass(const MetricMeasureSpace& space, const ConstructionFamily& family, int j,
                     double gamma) {
    if (family.kind != FamilyKind::c2)
        throw Error(Errc::bad_params, "half-mass check applies to second-kind families");
    const FamilyMember* mem = nullptr;
    for (const auto& m : family.members)
        if (m.j == j) mem = &m;
    if (!mem) throw Error(Errc::bad_params, "family has no member with this index");
    double qualifying = 0.0;
    for (int i : space.ball_members(family.base))
        if (std::abs(mem->u[i] - gamma) >= 0.5) qualifying += space.weight(i);
    return qualifying >= mem->mass_inner * (1.0 - 1e-12);
}

double measured_lipschitz(const MetricMeasureSpace& space, const std::vector<double>& u) {
    double best = 0.0;
    for (int i = 0; i < space.size(); ++i)
        for (int j = i + 1; j < space.size(); ++j)
            best = std::max(best, std::abs(u[i] - u[j]) / space.dist(i, j));
    return best;
}

} // namespace hslab

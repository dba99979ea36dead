#include "hslab/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hslab::geometry {

double phi(const MetricMeasureSpace& space, int x, double r) {
    if (r < 0.0) throw Error(Errc::invalid_ball, "phi needs r >= 0");
    if (r == 0.0) return 0.0;
    const double half = 0.5 * space.ball_mass(open_ball(x, r));
    // Admissible radii {t : mu(B(x,t)) <= half} form an interval [0, t*]
    // with t* a critical radius (mu(B(x,.)) is left-continuous and
    // nondecreasing). Exact half-mass ties are common on uniform weights,
    // so the comparison absorbs summation roundoff; a genuine exceedance
    // is at least one atom, far above the tolerance.
    double t_star = 0.0;
    for (double d : space.critical_radii(x)) {
        if (space.ball_mass(open_ball(x, d)) <= half * (1.0 + 1e-12))
            t_star = d;
        else
            break;
    }
    return std::min(t_star, r);
}

std::vector<double> phi_iterates(const MetricMeasureSpace& space, int x, double r, int count) {
    std::vector<double> out;
    out.reserve(count + 1);
    out.push_back(r);
    for (int j = 0; j < count; ++j) out.push_back(phi(space, x, out.back()));
    return out;
}

UniformPerfectness uniform_perfectness(const MetricMeasureSpace& space, double resolution) {
    if (!(resolution > 0.0) || resolution > space.diameter())
        throw Error(Errc::bad_params, "resolution must lie in (0, diam]");
    UniformPerfectness out;
    double best = std::numeric_limits<double>::infinity();
    const int n = space.size();
    for (int x = 0; x < n; ++x) {
        const auto& crit = space.critical_radii(x);
        // Constancy intervals of B(x, .) intersecting [resolution, diam]:
        // right endpoint crit[k], largest positive distance inside is
        // crit[k-1] (none for k = 0).
        for (size_t k = 0; k < crit.size(); ++k) {
            const double r = crit[k];
            if (r < resolution) continue;
            const bool proper = space.ball_count(open_ball(x, r)) < n;
            if (!proper) continue; // test applies only when X \ B(x,r) != empty
            if (k == 0) {
                // B(x,r) = {x}: the annulus is empty for every lambda > 0.
                out.lambda.reset();
                out.lambda_eff = std::numeric_limits<double>::quiet_NaN();
                out.witness_center = x;
                out.witness_radius = r;
                return out;
            }
            const double ratio = crit[k - 1] / r;
            if (ratio < best) {
                best = ratio;
                out.witness_center = x;
                out.witness_radius = r;
            }
        }
    }
    if (!std::isfinite(best)) {
        // No admissible proper ball: the annulus test is vacuous, treat as
        // perfect at this resolution with lambda arbitrarily close to 1.
        out.lambda = 1.0 - 1e-12;
    } else {
        out.lambda = best;
    }
    out.lambda_eff = std::min(*out.lambda, 0.19);
    return out;
}

std::vector<double> sweep_radii(const MetricMeasureSpace& space, int center, double r_min) {
    std::vector<double> out;
    const double diam = space.diameter();
    for (double d : space.critical_radii(center))
        if (d >= r_min && d <= diam) out.push_back(d);
    if (out.empty() || out.back() < diam) out.push_back(diam);
    return out;
}

MassBound lower_mass_constant(const MetricMeasureSpace& space, double s, double r_min) {
    if (!(s > 0.0)) throw Error(Errc::bad_params, "exponent s must be positive");
    if (!(r_min > 0.0) || r_min > space.diameter())
        throw Error(Errc::bad_params, "r_min must lie in (0, diam]");
    MassBound best;
    best.kappa = std::numeric_limits<double>::infinity();
    for (int x = 0; x < space.size(); ++x) {
        for (double r : sweep_radii(space, x, r_min)) {
            const double ratio = space.ball_mass(open_ball(x, r)) / std::pow(r, s);
            if (ratio < best.kappa) {
                best.kappa = ratio;
                best.witness = open_ball(x, r);
                best.witness_ratio = ratio;
            }
        }
    }
    return best;
}

DoublingBound doubling_constant(const MetricMeasureSpace& space) {
    DoublingBound best;
    best.constant = 0.0;
    for (int x = 0; x < space.size(); ++x) {
        // Breakpoints of r -> (mu(B(x,2r)), mu(B(x,r))) are d and d/2 over
        // critical distances d; both measures are constant on (b_k, b_{k+1}].
        std::vector<double> events;
        for (double d : space.critical_radii(x)) {
            events.push_back(d);
            events.push_back(0.5 * d);
        }
        std::sort(events.begin(), events.end());
        events.erase(std::unique(events.begin(), events.end()), events.end());
        for (double r : events) {
            const double inner = space.ball_mass(open_ball(x, r));
            if (inner <= 0.0) continue;
            const double ratio = space.ball_mass(open_ball(x, 2.0 * r)) / inner;
            if (ratio > best.constant) {
                best.constant = ratio;
                best.witness = open_ball(x, r);
            }
        }
    }
    return best;
}

RelativeMassBound relative_lower_bound(const MetricMeasureSpace& space, double s) {
    if (!(s > 0.0)) throw Error(Errc::bad_params, "exponent s must be positive");
    const int n = space.size();
    RelativeMassBound best;
    best.kappa = std::numeric_limits<double>::infinity();

    auto consider = [&](int x, double r, double inner_mass, int y, double R, double outer_mass) {
        if (outer_mass <= 0.0 || inner_mass <= 0.0) return;
        const double v = (inner_mass / outer_mass) * std::pow(R / r, s);
        if (v < best.kappa) {
            best.kappa = v;
            best.inner = open_ball(x, r);
            best.outer = closed_ball(y, R);
        }
    };

    for (int x = 0; x < n; ++x) {
        const auto& ordx = space.by_distance(x);
        for (int y = 0; y < n; ++y) {
            // max over the k points nearest to x of their distance to y,
            // for the member-containment test.
            std::vector<double> maxd(n + 1, 0.0);
            for (int k = 0; k < n; ++k)
                maxd[k + 1] = std::max(maxd[k], space.dist(y, ordx[k]));

            const auto& crx = space.critical_radii(x);
            const auto& cry = space.critical_radii(y);
            // Off-diagonal candidates: r at a right endpoint, R at the limit
            // from above of a critical radius of y (closed denominator ball).
            for (double r : crx) {
                const int cnt = space.ball_count(open_ball(x, r));
                const double inner_mass = space.prefix_mass(x, cnt);
                for (double R : cry) {
                    if (R < r) continue;
                    if (maxd[cnt] > R) continue; // not nested in closed B(y,R)
                    consider(x, r, inner_mass, y, R, space.ball_mass(closed_ball(y, R)));
                }
            }
            // Diagonal candidates r = R = t with both balls open; covers the
            // patches the off-diagonal limit cannot reach (r = R interior).
            std::vector<double> merged = crx;
            merged.insert(merged.end(), cry.begin(), cry.end());
            std::sort(merged.begin(), merged.end());
            merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
            for (double t : merged) {
                const int cnt = space.ball_count(open_ball(x, t));
                if (maxd[cnt] >= t) continue; // strict: open target ball
                const double im = space.prefix_mass(x, cnt);
                const double om = space.ball_mass(open_ball(y, t));
                if (om <= 0.0 || im <= 0.0) continue;
                const double v = im / om;
                if (v < best.kappa) {
                    best.kappa = v;
                    best.inner = open_ball(x, t);
                    best.outer = open_ball(y, t);
                }
            }
        }
    }
    return best;
}

VConditionResult v_condition(const MetricMeasureSpace& space, const Ball& b0, double sigma,
                             double s, double b) {
    if (!(sigma >= 1.0)) throw Error(Errc::bad_params, "sigma must be >= 1");
    if (!(s > 0.0)) throw Error(Errc::bad_params, "exponent s must be positive");
    const Ball sb0 = dilate(b0, sigma);
    const double r_cap = sb0.radius;
    const auto inside = space.mask(space.ball_members(sb0));

    VConditionResult out;
    out.required_b = b;
    out.worst_ratio = std::numeric_limits<double>::infinity();
    for (int x = 0; x < space.size(); ++x) {
        if (!inside[x]) continue;
        // Candidate radii: right endpoints of constancy intervals up to the
        // cap, plus the cap itself. Containment in sigma B0 is monotone in
        // the member count, so stop at the first violation.
        std::vector<double> cands;
        for (double d : space.critical_radii(x))
            if (d <= r_cap) cands.push_back(d);
        if (cands.empty() || cands.back() < r_cap) cands.push_back(r_cap);
        for (double r : cands) {
            const int cnt = space.ball_count(open_ball(x, r));
            bool contained = true;
            for (int k = 0; k < cnt && contained; ++k)
                if (!inside[space.by_distance(x)[k]]) contained = false;
            if (!contained) break;
            const double mass = space.prefix_mass(x, cnt);
            if (mass <= 0.0) continue;
            const double ratio = mass / std::pow(r, s);
            if (ratio < out.worst_ratio) {
                out.worst_ratio = ratio;
                out.witness = open_ball(x, r);
            }
        }
    }
    if (!std::isfinite(out.worst_ratio)) out.worst_ratio = 0.0;
    out.holds = out.worst_ratio >= b * (1.0 - 1e-12);
    return out;
}

FatBall fat_ball(const MetricMeasureSpace& space, int x, double r, double lambda) {
    if (!(lambda > 0.0 && lambda < 0.2))
        throw Error(Errc::lambda_out_of_range, "fat_ball needs lambda in (0, 1/5)");
    if (!(r > 0.0) || r > space.diameter())
        throw Error(Errc::invalid_ball, "fat_ball needs r in (0, diam]");
    const double ph = phi(space, x, r);
    if (!(r > 3.0 * ph / (lambda * lambda)))
        throw Error(Errc::precondition_radius,
                    "r <= 3 phi_x(r)/lambda^2 (phi = " + std::to_string(ph) + ")");
    const double lo = ph + 2.0 * lambda * lambda * r;
    const double hi = ph / lambda + 2.0 * lambda * r;
    int chosen = -1;
    for (int i = 0; i < space.size(); ++i) {
        const double d = space.dist(x, i);
        if (d >= lo && d < hi) {
            chosen = i;
            break; // lowest index wins
        }
    }
    if (chosen < 0)
        throw Error(Errc::empty_annulus,
                    "no point with d(x,.) in [" + std::to_string(lo) + ", " + std::to_string(hi) + ")",
                    {x});
    FatBall out;
    out.center = chosen;
    out.radius = 2.0 * ph / lambda + 2.0 * lambda * r;
    out.parent = open_ball(x, r);
    out.phi_parent = ph;

    // The defining inclusions: closed B(x,phi) inside B(xt,rt) inside B(x,r).
    for (int i : space.ball_members(closed_ball(x, ph)))
        if (!space.ball_contains(open_ball(out.center, out.radius), i))
            throw Error(Errc::construction_impossible, "inner inclusion failed", {x, i});
    for (int i : space.ball_members(open_ball(out.center, out.radius)))
        if (!space.ball_contains(open_ball(x, r), i))
            throw Error(Errc::construction_impossible, "outer inclusion failed", {x, i});
    return out;
}

GeometrySummary analyze(const MetricMeasureSpace& space, double s, double resolution) {
    GeometrySummary out;
    out.s = s;
    out.resolution = resolution;
    const auto lm = lower_mass_constant(space, s, resolution);
    out.kappa = lm.kappa;
    out.kappa_witness = lm.witness;
    const auto db = doubling_constant(space);
    out.doubling = db.constant;
    out.doubling_witness = db.witness;
    const auto rel = relative_lower_bound(space, s);
    out.relative_kappa = rel.kappa;
    out.relative_inner = rel.inner;
    out.relative_outer = rel.outer;
    const auto up = uniform_perfectness(space, resolution);
    out.lambda = up.lambda;
    out.lambda_eff = up.lambda_eff;
    return out;
}

} // namespace hslab::geometry

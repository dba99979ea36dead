#include "hslab/embeddings.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/geometry.hpp"

namespace hslab {

namespace {

double mean_pow(const MetricMeasureSpace& space, const PointSet& set, const std::vector<double>& v,
                double q) {
    double num = 0.0, den = 0.0;
    for (int i : set) {
        num += space.weight(i) * std::pow(std::abs(v[i]), q);
        den += space.weight(i);
    }
    return den > 0.0 ? num / den : 0.0;
}

double integral_pow(const MetricMeasureSpace& space, const PointSet& set,
                    const std::vector<double>& v, double q) {
    double num = 0.0;
    for (int i : set) num += space.weight(i) * std::pow(std::abs(v[i]), q);
    return num;
}

double set_mass(const MetricMeasureSpace& space, const PointSet& set) {
    double m = 0.0;
    for (int i : set) m += space.weight(i);
    return m;
}

ShiftResult oscillation_inf(const MetricMeasureSpace& space, const PointSet& set,
                            const std::vector<double>& u, double q) {
    // Compress to distinct values first; the families used by the reverse
    // pipelines take only a handful of values on any ball.
    std::vector<double> vals, wts;
    for (int i : set) {
        const double v = u[i];
        bool found = false;
        for (size_t k = 0; k < vals.size() && !found; ++k)
            if (vals[k] == v) {
                wts[k] += space.weight(i);
                found = true;
            }
        if (!found) {
            vals.push_back(v);
            wts.push_back(space.weight(i));
        }
    }
    return best_constant_shift_values(vals, wts, q);
}

} // namespace

const char* kind_name(IneqKind k) {
    switch (k) {
        case IneqKind::sobolev: return "sobolev";
        case IneqKind::poincare: return "poincare";
        case IneqKind::sobolev_doubling: return "sobolev-doubling";
        case IneqKind::poincare_doubling: return "poincare-doubling";
        case IneqKind::exponential: return "exponential";
        case IneqKind::exponential_doubling: return "exponential-doubling";
        case IneqKind::holder_global: return "holder-global";
        case IneqKind::holder_local: return "holder-local";
        case IneqKind::global_sobolev: return "global-sobolev";
        case IneqKind::global_poincare: return "global-poincare";
    }
    return "unknown";
}

std::optional<IneqKind> kind_from_name(const std::string& name) {
    for (IneqKind k :
         {IneqKind::sobolev, IneqKind::poincare, IneqKind::sobolev_doubling,
          IneqKind::poincare_doubling, IneqKind::exponential, IneqKind::exponential_doubling,
          IneqKind::holder_global, IneqKind::holder_local, IneqKind::global_sobolev,
          IneqKind::global_poincare})
        if (name == kind_name(k)) return k;
    return std::nullopt;
}

double InequalityCase::p_star() const {
    if (!(p < s)) throw Error(Errc::bad_exponents, "p* requires p < s");
    return s * p / (s - p);
}

void InequalityCase::validate() const {
    if (!(s > 0.0) || !(p > 0.0) || !(sigma >= 1.0))
        throw Error(Errc::bad_params, "case needs s > 0, p > 0, sigma >= 1");
    switch (kind) {
        case IneqKind::sobolev:
        case IneqKind::poincare:
        case IneqKind::sobolev_doubling:
        case IneqKind::poincare_doubling:
        case IneqKind::global_sobolev:
        case IneqKind::global_poincare:
            if (!(p < s)) throw Error(Errc::bad_exponents, "this kind requires p < s");
            break;
        case IneqKind::exponential:
        case IneqKind::exponential_doubling:
            if (p != s) throw Error(Errc::bad_exponents, "exponential kinds require p = s");
            if (!(c1 > 0.0) || !(gamma > 0.0))
                throw Error(Errc::bad_params, "exponential kinds need c1 > 0 and gamma > 0");
            break;
        case IneqKind::holder_global:
        case IneqKind::holder_local:
            if (!(p > s)) throw Error(Errc::bad_exponents, "holder kinds require p > s");
            break;
    }
}

double IneqValue::ratio() const {
    if (lhs == 0.0) return 0.0;
    if (rhs_core == 0.0) return std::numeric_limits<double>::infinity();
    return lhs / rhs_core;
}

IneqValue eval_inequality(const MetricMeasureSpace& space, const InequalityCase& cse, const Ball& b0,
                          const std::vector<double>& u, const std::vector<double>& g,
                          bool check_gradient) {
    cse.validate();
    const bool global = cse.kind == IneqKind::global_sobolev || cse.kind == IneqKind::global_poincare;
    const double r0 = b0.radius;
    const PointSet b0m = global ? PointSet{} : space.ball_members(b0);
    PointSet sb0m;
    if (global) {
        sb0m.resize(space.size());
        for (int i = 0; i < space.size(); ++i) sb0m[i] = i;
    } else {
        sb0m = space.ball_members(dilate(b0, cse.sigma));
    }
    if (check_gradient) {
        const auto chk = is_generalized_gradient(space, u, g, sb0m);
        if (!chk.ok)
            throw Error(Errc::not_a_gradient,
                        "pair violates the gradient inequality on the dilated ball", {chk.i, chk.j});
    }
    const double ps = cse.p_star();
    IneqValue out;
    switch (cse.kind) {
        case IneqKind::sobolev: {
            out.lhs = std::pow(mean_pow(space, b0m, u, ps), 1.0 / ps);
            const double factor = std::pow(set_mass(space, sb0m) / std::pow(r0, cse.s), 1.0 / cse.p);
            out.rhs_core = factor * (r0 * std::pow(mean_pow(space, sb0m, g, cse.p), 1.0 / cse.p) +
                                     std::pow(mean_pow(space, sb0m, u, cse.p), 1.0 / cse.p));
            break;
        }
        case IneqKind::poincare: {
            out.lhs = oscillation_inf(space, b0m, u, ps).value;
            const double factor = std::pow(set_mass(space, sb0m) / std::pow(r0, cse.s), 1.0 / cse.p);
            out.rhs_core = factor * r0 * std::pow(mean_pow(space, sb0m, g, cse.p), 1.0 / cse.p);
            break;
        }
        case IneqKind::sobolev_doubling: {
            out.lhs = std::pow(mean_pow(space, b0m, u, ps), 1.0 / ps);
            out.rhs_core = r0 * std::pow(mean_pow(space, sb0m, g, cse.p), 1.0 / cse.p) +
                           std::pow(mean_pow(space, sb0m, u, cse.p), 1.0 / cse.p);
            break;
        }
        case IneqKind::poincare_doubling: {
            out.lhs = oscillation_inf(space, b0m, u, ps).value;
            out.rhs_core = r0 * std::pow(mean_pow(space, sb0m, g, cse.p), 1.0 / cse.p);
            break;
        }
        case IneqKind::global_sobolev: {
            out.lhs = std::pow(integral_pow(space, sb0m, u, ps), 1.0 / ps);
            out.rhs_core = std::pow(integral_pow(space, sb0m, g, cse.p), 1.0 / cse.p) +
                           std::pow(integral_pow(space, sb0m, u, cse.p), 1.0 / cse.p);
            break;
        }
        case IneqKind::global_poincare: {
            const auto shift = oscillation_inf(space, sb0m, u, ps);
            out.lhs = std::pow(space.total_mass(), 1.0 / ps) * shift.value;
            out.rhs_core = std::pow(integral_pow(space, sb0m, g, cse.p), 1.0 / cse.p);
            break;
        }
        default:
            throw Error(Errc::bad_params,
                        "eval_inequality handles mean-type kinds; use exp_integral or "
                        "holder_constant");
    }
    out.degenerate = out.rhs_core == 0.0 && out.lhs > 0.0;
    return out;
}

double exp_integral(const MetricMeasureSpace& space, const Ball& b0, double sigma, double s,
                    double c1, double gamma, const std::vector<double>& u,
                    const std::vector<double>& g) {
    const auto b0m = space.ball_members(b0);
    const auto sb0m = space.ball_members(dilate(b0, sigma));
    const double gnorm = std::pow(integral_pow(space, sb0m, g, s), 1.0 / s);
    if (!(gnorm > 0.0))
        throw Error(Errc::zero_gradient_norm, "exponential integral needs ||g|| > 0 on sigma B0");
    const double ubar = ball_mean(space, u, b0m);
    double num = 0.0, den = 0.0;
    for (int i : b0m) {
        num += space.weight(i) * std::exp(std::pow(c1 * std::abs(u[i] - ubar) / gnorm, gamma));
        den += space.weight(i);
    }
    return num / den;
}

double exp_integral_doubling(const MetricMeasureSpace& space, const Ball& b0, double sigma, double s,
                             double c1, double gamma, const std::vector<double>& u,
                             const std::vector<double>& g) {
    const auto b0m = space.ball_members(b0);
    const auto sb0m = space.ball_members(dilate(b0, sigma));
    const double gnorm = std::pow(integral_pow(space, sb0m, g, s), 1.0 / s);
    if (!(gnorm > 0.0))
        throw Error(Errc::zero_gradient_norm, "exponential integral needs ||g|| > 0 on sigma B0");
    const double factor = c1 * std::pow(set_mass(space, sb0m), 1.0 / s) / (b0.radius * gnorm);
    const double ubar = ball_mean(space, u, b0m);
    double num = 0.0, den = 0.0;
    for (int i : b0m) {
        num += space.weight(i) * std::exp(std::pow(factor * std::abs(u[i] - ubar), gamma));
        den += space.weight(i);
    }
    return num / den;
}

double holder_constant(const MetricMeasureSpace& space, const InequalityCase& cse,
                       const std::vector<double>& u, const std::vector<double>& g,
                       std::optional<Ball> b0) {
    cse.validate();
    const double holder_exp = 1.0 - cse.s / cse.p;
    if (cse.kind == IneqKind::holder_global) {
        const double gnorm = lp_norm(space, g, cse.p);
        if (!(gnorm > 0.0)) throw Error(Errc::zero_gradient_norm, "holder constant needs ||g|| > 0");
        double best = 0.0;
        for (int i = 0; i < space.size(); ++i)
            for (int j = i + 1; j < space.size(); ++j)
                best = std::max(best, std::abs(u[i] - u[j]) /
                                          (std::pow(space.dist(i, j), holder_exp) * gnorm));
        return best;
    }
    if (cse.kind != IneqKind::holder_local)
        throw Error(Errc::bad_params, "holder_constant handles holder kinds only");
    if (!b0) throw Error(Errc::bad_params, "local holder kind needs a ball");
    const auto b0m = space.ball_members(*b0);
    const auto sb0m = space.ball_members(dilate(*b0, cse.sigma));
    const double core = std::pow(b0->radius, cse.s / cse.p) *
                        std::pow(mean_pow(space, sb0m, g, cse.p), 1.0 / cse.p);
    if (!(core > 0.0)) throw Error(Errc::zero_gradient_norm, "holder constant needs ||g|| > 0");
    double best = 0.0;
    for (size_t a = 0; a < b0m.size(); ++a)
        for (size_t b = a + 1; b < b0m.size(); ++b) {
            const int i = b0m[a], j = b0m[b];
            best = std::max(best, std::abs(u[i] - u[j]) /
                                      (std::pow(space.dist(i, j), holder_exp) * core));
        }
    return best;
}

EmbeddingReport estimate_constant(const MetricMeasureSpace& space, const InequalityCase& cse,
                                  const std::vector<HajlaszPair>& corpus,
                                  const std::vector<Ball>& balls) {
    cse.validate();
    if (corpus.empty()) throw Error(Errc::empty_corpus, "estimate_constant needs a nonempty corpus");
    if (balls.empty()) throw Error(Errc::empty_corpus, "estimate_constant needs at least one ball");
    EmbeddingReport rep;
    rep.cse = cse;
    for (const auto& ball : balls) {
        RatioRow row;
        row.ball = ball;
        row.ratio = -1.0;
        const auto sb0m = space.ball_members(dilate(ball, cse.sigma));
        for (size_t c = 0; c < corpus.size(); ++c) {
            const auto& pair = corpus[c];
            const auto chk = is_generalized_gradient(space, pair.u, pair.g, sb0m);
            if (!chk.ok)
                throw Error(Errc::not_a_gradient,
                            "corpus pair '" + pair.label + "' fails on the dilated ball",
                            {chk.i, chk.j});
            double lhs = 0.0, rhs = 0.0, ratio = 0.0;
            switch (cse.kind) {
                case IneqKind::exponential:
                case IneqKind::exponential_doubling: {
                    double gn = 0.0;
                    for (int i : sb0m) gn += space.weight(i) * std::pow(pair.g[i], cse.s);
                    if (gn <= 0.0) continue; // D_+ requires a nonzero gradient
                    ratio = cse.kind == IneqKind::exponential
                                ? exp_integral(space, ball, cse.sigma, cse.s, cse.c1, cse.gamma,
                                               pair.u, pair.g)
                                : exp_integral_doubling(space, ball, cse.sigma, cse.s, cse.c1,
                                                        cse.gamma, pair.u, pair.g);
                    lhs = ratio;
                    rhs = 1.0;
                    break;
                }
                case IneqKind::holder_global:
                case IneqKind::holder_local: {
                    ratio = holder_constant(space, cse, pair.u, pair.g, ball);
                    lhs = ratio;
                    rhs = 1.0;
                    break;
                }
                default: {
                    const auto val = eval_inequality(space, cse, ball, pair.u, pair.g, false);
                    lhs = val.lhs;
                    rhs = val.rhs_core;
                    ratio = val.ratio();
                }
            }
            if (ratio > row.ratio) {
                row.ratio = ratio;
                row.lhs = lhs;
                row.rhs_core = rhs;
                row.member = static_cast<int>(c);
            }
        }
        if (row.member >= 0) rep.rows.push_back(row);
    }
    rep.constant = 0.0;
    for (size_t r = 0; r < rep.rows.size(); ++r)
        if (rep.rows[r].ratio > rep.constant) {
            rep.constant = rep.rows[r].ratio;
            rep.witness_row = static_cast<int>(r);
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Chaining tracer
// ---------------------------------------------------------------------------

namespace {

void push_check(ChainCertificate& cert, const std::string& what, double lhs, double rhs,
                double rel_tol = 1e-12) {
    ChainCheck c;
    c.what = what;
    c.lhs = lhs;
    c.rhs = rhs;
    c.ok = lhs <= rhs + rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
    cert.checks.push_back(c);
}

} // namespace

ChainCertificate chaining_trace(const MetricMeasureSpace& space, const Ball& b0, double sigma,
                                double s, double p, double b, const std::vector<double>& u,
                                const std::vector<double>& g) {
    if (!(sigma > 1.0)) throw Error(Errc::bad_params, "chaining needs sigma > 1");
    if (!(s > 0.0) || !(p > 0.0) || !(b > 0.0))
        throw Error(Errc::bad_params, "chaining needs s, p, b > 0");
    ChainCertificate cert;
    cert.b0 = b0;
    cert.sigma = sigma;
    cert.s = s;
    cert.p = p;
    cert.b = b;

    const auto vres = geometry::v_condition(space, b0, sigma, s, b);
    if (!vres.holds)
        throw Error(Errc::v_condition_fails,
                    "worst ratio " + std::to_string(vres.worst_ratio) + " < b = " + std::to_string(b));
    push_check(cert, "V-condition worst ratio >= b", b, vres.worst_ratio);

    const Ball sb0 = dilate(b0, sigma);
    const PointSet sb0m = space.ball_members(sb0);
    const PointSet b0m = space.ball_members(b0);
    const auto chk = is_generalized_gradient(space, u, g, sb0m);
    if (!chk.ok) throw Error(Errc::not_a_gradient, "g is not a gradient of u on sigma B0");

    const double w_total = set_mass(space, sb0m);
    double gp0 = 0.0;
    for (int i : sb0m) gp0 += space.weight(i) * std::pow(g[i], p);
    if (gp0 == 0.0) {
        // Zero gradient integral forces u constant on sigma B0; there is
        // nothing to chain.
        cert.trivial = true;
        cert.gamma = u[sb0m.front()];
        double dev = 0.0;
        for (int i : sb0m) dev = std::max(dev, std::abs(u[i] - cert.gamma));
        push_check(cert, "constant u on sigma B0 (max deviation)", dev, 0.0);
        cert.all_ok = cert.checks.back().ok;
        return cert;
    }

    // The gradient shift g + (mean g^p)^{1/p} bounds g from below by
    // 2^{-(1+1/p)} (mean of the shifted g^p)^{1/p} everywhere on sigma B0.
    const double shift = std::pow(gp0 / w_total, 1.0 / p);
    cert.g_shifted = g;
    for (int i : sb0m) cert.g_shifted[i] = g[i] + shift;
    double gpt = 0.0;
    for (int i : sb0m) gpt += space.weight(i) * std::pow(cert.g_shifted[i], p);
    cert.gp_integral = gpt;
    {
        const double floor_val = std::pow(2.0, -(1.0 + 1.0 / p)) * std::pow(gpt / w_total, 1.0 / p);
        double min_g = std::numeric_limits<double>::infinity();
        for (int i : sb0m) min_g = std::min(min_g, cert.g_shifted[i]);
        push_check(cert, "shifted gradient lower bound 2^{-(1+1/p)}(mean g^p)^{1/p}", floor_val, min_g);
    }

    double min_g = std::numeric_limits<double>::infinity(), max_g = 0.0;
    for (int i : sb0m) {
        min_g = std::min(min_g, cert.g_shifted[i]);
        max_g = std::max(max_g, cert.g_shifted[i]);
    }
    cert.j_lo = static_cast<int>(std::floor(std::log2(min_g))) - 1;
    cert.j_hi = static_cast<int>(std::ceil(std::log2(max_g))) + 1;

    const auto level_members = [&](int j) {
        PointSet e;
        const double thr = std::pow(2.0, j);
        for (int i : sb0m)
            if (cert.g_shifted[i] <= thr) e.push_back(i);
        return e;
    };
    for (int j = cert.j_lo; j <= cert.j_hi; ++j) {
        LevelSet ls;
        ls.j = j;
        ls.threshold = std::pow(2.0, j);
        ls.members = level_members(j);
        ls.mass = set_mass(space, ls.members);
        cert.levels.push_back(std::move(ls));
    }
    const auto level = [&](int j) -> const LevelSet& {
        const int idx = std::clamp(j - cert.j_lo, 0, static_cast<int>(cert.levels.size()) - 1);
        return cert.levels[idx];
    };

    // Chebyshev: mu(sigma B0 minus E_j) <= 2^{-jp} * integral of g^p.
    for (const auto& ls : cert.levels)
        push_check(cert, "chebyshev complement bound at j=" + std::to_string(ls.j),
                   w_total - ls.mass, std::pow(2.0, -ls.j * p) * gpt);

    // Level-set decomposition: sum_j 2^{jp} mu(E_j \ E_{j-1}) lies within
    // [integral, 2^p integral].
    {
        double decomposed = 0.0;
        for (size_t k = 1; k < cert.levels.size(); ++k)
            decomposed += std::pow(2.0, cert.levels[k].j * p) *
                          (cert.levels[k].mass - cert.levels[k - 1].mass);
        push_check(cert, "level decomposition lower bound", gpt, decomposed);
        push_check(cert, "level decomposition upper bound", decomposed, std::pow(2.0, p) * gpt);
        push_check(cert, "lowest level empty", cert.levels.front().mass, 0.0);
    }

    // k0: least integer with 2^{k0} >= T.
    const double r0 = b0.radius;
    const double t_val = std::pow(std::pow(2.0, 1.0 / s) / ((1.0 - std::pow(2.0, -p / s)) * (sigma - 1.0)),
                                  s / p) *
                         std::pow(b * std::pow(r0, s), -1.0 / p) * std::pow(gpt, 1.0 / p);
    int k0 = static_cast<int>(std::ceil(std::log2(t_val)));
    while (std::pow(2.0, k0) < t_val) ++k0;
    while (k0 > std::numeric_limits<int>::min() && std::pow(2.0, k0 - 1) >= t_val) --k0;
    cert.k0 = k0;
    push_check(cert, "k0 threshold 2^{k0} >= T", t_val, std::pow(2.0, k0));

    // Half-mass level: mu(E_{k0}) >= mu(sigma B0)/2. This is forced by the
    // V condition; a failure means a broken precondition or a bug.
    PointSet e_k0_members =
        cert.k0 > cert.j_hi ? sb0m : (cert.k0 < cert.j_lo ? PointSet{} : level(cert.k0).members);
    const double e_k0_mass = set_mass(space, e_k0_members);
    push_check(cert, "half-mass level mu(E_{k0}) >= mu(sigma B0)/2", 0.5 * w_total, e_k0_mass);
    if (e_k0_members.empty())
        throw Error(Errc::chain_stuck, "E_{k0} empty: half-mass lemma violated");

    // gamma = u(y) for the heaviest y in E_{k0}.
    int y = e_k0_members.front();
    for (int i : e_k0_members)
        if (space.weight(i) > space.weight(y)) y = i;
    cert.gamma = u[y];
    cert.gamma_point = y;

    double sup_ek0 = 0.0;
    for (int i : e_k0_members) sup_ek0 = std::max(sup_ek0, std::abs(u[i] - cert.gamma));
    double sb0_diam = 0.0;
    for (size_t a = 0; a < sb0m.size(); ++a)
        for (size_t c = a + 1; c < sb0m.size(); ++c)
            sb0_diam = std::max(sb0_diam, space.dist(sb0m[a], sb0m[c]));
    push_check(cert, "sup_{E_{k0}} |u-gamma| <= 2^{k0+1} diam(sigma B0)", sup_ek0,
               std::pow(2.0, cert.k0 + 1) * sb0_diam);
    push_check(cert, "2^{k0+1} diam(sigma B0) <= 2^{k0+2} sigma R0",
               std::pow(2.0, cert.k0 + 1) * sb0_diam, std::pow(2.0, cert.k0 + 2) * sigma * r0);

    const auto b0_mask = space.mask(b0m);
    const auto sb0_mask = space.mask(sb0m);
    const double radius_scale = std::pow(2.0, 1.0 / s) * std::pow(b, -1.0 / s) * std::pow(gpt, 1.0 / s);

    for (int k = cert.k0 + 1; k <= cert.j_hi; ++k) {
        // start from the worst point of E_k inside B0 so the telescoped
        // bound certifies a_k directly
        const auto& ek = level(k);
        int xk = -1;
        double a_k = 0.0;
        for (int i : ek.members)
            if (b0_mask[i]) {
                const double v = std::abs(u[i] - cert.gamma);
                if (xk < 0 || v > a_k) {
                    xk = i;
                    a_k = v;
                }
            }
        if (xk < 0) continue; // E_k does not meet B0: a_k = 0, nothing to chain

        ChainRecord rec;
        rec.k = k;
        rec.start = xk;
        rec.a_k = a_k;

        double radius_sum = 0.0;
        double telescoped = 0.0;
        double delta_sum = 0.0;
        int current = xk;
        for (int i = 0; i <= k - cert.k0 - 1; ++i) {
            const int target_level = k - (i + 1);
            const double rk = radius_scale * std::pow(2.0, -target_level * p / s);
            radius_sum += rk;
            ChainStep st;
            st.from = current;
            st.radius = rk;

            const Ball step_ball = open_ball(current, rk);
            const auto members = space.ball_members(step_ball);
            bool inside = true;
            for (int m : members)
                if (!sb0_mask[m]) inside = false;
            push_check(cert,
                       "step ball inside sigma B0 (k=" + std::to_string(k) + ",i=" + std::to_string(i) + ")",
                       inside ? 0.0 : 1.0, 0.0);
            st.ball_mass = space.ball_mass(step_ball);
            st.required_mass = b * std::pow(rk, s);
            const auto& etarget = level(target_level);
            st.complement_mass = w_total - etarget.mass;
            push_check(cert, "V bound on step ball", st.required_mass, st.ball_mass);
            push_check(cert, "chebyshev feeds half-mass lemma", 2.0 * st.complement_mass,
                       st.required_mass);
            // half-mass lemma: hypothesis mu(B) >= 2 mu(sigma B0 \ E), then
            // conclusion mu(B cap E) >= mu(B)/2 > 0
            double cap_mass = 0.0;
            int next = -1;
            const auto target_mask = space.mask(etarget.members);
            for (int m : members)
                if (target_mask[m]) {
                    cap_mass += space.weight(m);
                    if (next < 0 || space.weight(m) > space.weight(next) ||
                        (space.weight(m) == space.weight(next) && m < next))
                        next = m;
                }
            push_check(cert, "half-mass lemma hypothesis", 2.0 * st.complement_mass, st.ball_mass);
            push_check(cert, "half-mass lemma conclusion", 0.5 * st.ball_mass, cap_mass);
            if (next < 0)
                throw Error(Errc::chain_stuck,
                            "E_{" + std::to_string(target_level) + "} misses the step ball", {current});
            st.to = next;
            st.distance = space.dist(current, next);
            push_check(cert, "step distance < step radius", st.distance, st.radius);
            const double du = std::abs(u[current] - u[next]);
            push_check(cert,
                       "Lipschitz bound on E_{" + std::to_string(k - i) + "}", du,
                       std::pow(2.0, k - i + 1) * st.distance);
            telescoped += std::pow(2.0, k - i + 1) * st.distance;
            delta_sum += du;
            rec.steps.push_back(st);
            current = next;
        }
        push_check(cert, "chain radii sum < (sigma-1) R0", radius_sum, (sigma - 1.0) * r0);
        push_check(cert, "telescoping |u(x_k)-gamma| <= sum |du| + |u(x_{k0})-gamma|",
                   std::abs(u[xk] - cert.gamma), delta_sum + std::abs(u[current] - cert.gamma));
        double geo = 0.0;
        for (int j = cert.k0; j <= k - 1; ++j) geo += std::pow(2.0, j * (1.0 - p / s));
        rec.geometric_bound = 4.0 * radius_scale * geo;
        rec.telescoped = telescoped;
        push_check(cert, "telescoped geometric bound (chain k=" + std::to_string(k) + ")", telescoped,
                   rec.geometric_bound, 1e-9);
        push_check(cert, "a_k bound (chain k=" + std::to_string(k) + ")", rec.a_k,
                   rec.geometric_bound + sup_ek0, 1e-9);
        cert.chains.push_back(std::move(rec));
    }

    cert.all_ok = true;
    for (const auto& c : cert.checks)
        if (!c.ok) cert.all_ok = false;
    return cert;
}

} // namespace hslab

#include "hslab/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hslab {

namespace {
constexpr double kTriangleTol = 1e-12; // absolute
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::triangle_violation: return "TriangleViolation";
        case Errc::asymmetric_distance: return "AsymmetricDistance";
        case Errc::nonpositive_weight: return "NonpositiveWeight";
        case Errc::too_few_points: return "TooFewPoints";
        case Errc::invalid_ball: return "InvalidBall";
        case Errc::bad_radii: return "BadRadii";
        case Errc::degenerate_domain: return "DegenerateDomain";
        case Errc::empty_set: return "EmptySet";
        case Errc::zero_phi: return "ZeroPhi";
        case Errc::empty_annulus: return "EmptyAnnulus";
        case Errc::precondition_radius: return "PreconditionRadius";
        case Errc::bad_exponents: return "BadExponents";
        case Errc::bad_beta: return "BadBeta";
        case Errc::bad_params: return "BadParams";
        case Errc::missing_constant: return "MissingConstant";
        case Errc::lambda_out_of_range: return "LambdaOutOfRange";
        case Errc::not_a_gradient: return "NotAGradient";
        case Errc::zero_gradient_norm: return "ZeroGradientNorm";
        case Errc::empty_corpus: return "EmptyCorpus";
        case Errc::degenerate_rhs: return "DegenerateRhs";
        case Errc::v_condition_fails: return "VConditionFails";
        case Errc::chain_stuck: return "ChainStuck";
        case Errc::construction_impossible: return "ConstructionImpossible";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

MetricMeasureSpace::MetricMeasureSpace(std::string name,
                                       std::vector<std::vector<double>> dist,
                                       std::vector<double> weights,
                                       std::vector<std::vector<double>> coords)
    : name_(std::move(name)), coords_(std::move(coords)) {
    n_ = static_cast<int>(dist.size());
    if (n_ < 2) throw Error(Errc::too_few_points, "need at least two points, got " + std::to_string(n_));
    if (static_cast<int>(weights.size()) != n_)
        throw Error(Errc::bad_params, "weights size " + std::to_string(weights.size()) +
                                          " does not match point count " + std::to_string(n_));
    dist_.assign(static_cast<size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        if (static_cast<int>(dist[i].size()) != n_)
            throw Error(Errc::bad_params, "distance matrix row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < n_; ++j) dist_[static_cast<size_t>(i) * n_ + j] = dist[i][j];
    }
    weights_ = std::move(weights);
    validate();
    build_caches();
}

void MetricMeasureSpace::validate() const {
    for (int i = 0; i < n_; ++i) {
        if (!(std::isfinite(dist(i, i))) || dist(i, i) != 0.0)
            throw Error(Errc::asymmetric_distance, "nonzero diagonal at " + std::to_string(i), {i, i});
        for (int j = i + 1; j < n_; ++j) {
            const double dij = dist(i, j);
            const double dji = dist(j, i);
            if (!std::isfinite(dij) || !std::isfinite(dji) || dij != dji)
                throw Error(Errc::asymmetric_distance,
                            "d(" + std::to_string(i) + "," + std::to_string(j) + ") != d(" +
                                std::to_string(j) + "," + std::to_string(i) + ")",
                            {i, j});
            if (dij <= 0.0)
                throw Error(Errc::asymmetric_distance,
                            "zero/negative distance between distinct points " + std::to_string(i) + "," +
                                std::to_string(j),
                            {i, j});
        }
    }
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            for (int k = 0; k < n_; ++k)
                if (dist(i, j) > dist(i, k) + dist(k, j) + kTriangleTol)
                    throw Error(Errc::triangle_violation,
                                "d(" + std::to_string(i) + "," + std::to_string(j) + ") > d(" +
                                    std::to_string(i) + "," + std::to_string(k) + ")+d(" + std::to_string(k) +
                                    "," + std::to_string(j) + ")",
                                {i, j, k});
    for (int i = 0; i < n_; ++i)
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            throw Error(Errc::nonpositive_weight, "weight of point " + std::to_string(i), {i});
}

void MetricMeasureSpace::build_caches() {
    total_mass_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    diameter_ = 0.0;
    min_positive_distance_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) {
            diameter_ = std::max(diameter_, dist(i, j));
            min_positive_distance_ = std::min(min_positive_distance_, dist(i, j));
        }

    order_.assign(n_, {});
    sorted_d_.assign(n_, {});
    prefix_mass_.assign(n_, {});
    crit_.assign(n_, {});
    for (int c = 0; c < n_; ++c) {
        auto& ord = order_[c];
        ord.resize(n_);
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            const double da = dist(c, a), db = dist(c, b);
            if (da != db) return da < db;
            return a < b;
        });
        auto& sd = sorted_d_[c];
        auto& pm = prefix_mass_[c];
        sd.resize(n_);
        pm.resize(n_ + 1);
        pm[0] = 0.0;
        long double acc = 0.0L; // keeps half-mass ties sharp
        for (int k = 0; k < n_; ++k) {
            sd[k] = dist(c, ord[k]);
            acc += weights_[ord[k]];
            pm[k + 1] = static_cast<double>(acc);
        }
        auto& cr = crit_[c];
        for (int k = 0; k < n_; ++k)
            if (sd[k] > 0.0 && (cr.empty() || sd[k] != cr.back())) cr.push_back(sd[k]);
    }
}

const std::vector<double>& MetricMeasureSpace::critical_radii(int center) const {
    return crit_[center];
}

int MetricMeasureSpace::ball_count(const Ball& b) const {
    if (b.center < 0 || b.center >= n_) throw Error(Errc::invalid_ball, "center out of range");
    if (!(b.radius >= 0.0)) throw Error(Errc::invalid_ball, "negative radius");
    const auto& sd = sorted_d_[b.center];
    if (b.closed)
        return static_cast<int>(std::upper_bound(sd.begin(), sd.end(), b.radius) - sd.begin());
    return static_cast<int>(std::lower_bound(sd.begin(), sd.end(), b.radius) - sd.begin());
}

PointSet MetricMeasureSpace::ball_members(const Ball& b) const {
    const int k = ball_count(b);
    PointSet out(order_[b.center].begin(), order_[b.center].begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

double MetricMeasureSpace::ball_mass(const Ball& b) const {
    return prefix_mass_[b.center][ball_count(b)];
}

bool MetricMeasureSpace::ball_contains(const Ball& b, int i) const {
    const double d = dist(b.center, i);
    return b.closed ? d <= b.radius : d < b.radius;
}

MetricMeasureSpace MetricMeasureSpace::restrict(const PointSet& members) const {
    if (static_cast<int>(members.size()) < 2)
        throw Error(Errc::too_few_points, "restriction needs at least two points");
    const int m = static_cast<int>(members.size());
    std::vector<std::vector<double>> d(m, std::vector<double>(m));
    std::vector<double> w(m);
    std::vector<std::vector<double>> c;
    if (!coords_.empty()) c.resize(m);
    for (int a = 0; a < m; ++a) {
        if (members[a] < 0 || members[a] >= n_)
            throw Error(Errc::bad_params, "restriction index out of range");
        w[a] = weights_[members[a]];
        if (!coords_.empty()) c[a] = coords_[members[a]];
        for (int b = 0; b < m; ++b) d[a][b] = dist(members[a], members[b]);
    }
    return MetricMeasureSpace(name_ + "/restrict", std::move(d), std::move(w), std::move(c));
}

std::vector<char> MetricMeasureSpace::mask(const PointSet& points) const {
    std::vector<char> m(n_, 0);
    for (int i : points) m[i] = 1;
    return m;
}

MetricMeasureSpace validate_space(std::string name,
                                  std::vector<std::vector<double>> dist,
                                  std::vector<double> weights,
                                  std::vector<std::vector<double>> coords) {
    return MetricMeasureSpace(std::move(name), std::move(dist), std::move(weights), std::move(coords));
}

} // namespace hslab

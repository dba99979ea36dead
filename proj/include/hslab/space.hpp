#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

/// A ball with a specified center and radius. Open balls use the strict
/// inequality d < r, closed balls use d <= r. An open ball of radius 0 is
/// empty while the closed ball of radius 0 is the singleton {center}.
struct Ball {
    int center = 0;
    double radius = 0.0;
    bool closed = false;
};

inline Ball open_ball(int center, double radius) { return {center, radius, false}; }
inline Ball closed_ball(int center, double radius) { return {center, radius, true}; }

/// Dilation tB = B(x, t*r); keeps the open/closed flag.
inline Ball dilate(const Ball& b, double t) { return {b.center, t * b.radius, b.closed}; }

/// Member indices of a subset of a space, kept sorted ascending.
using PointSet = std::vector<int>;

/// A finite metric measure space: a full symmetric distance matrix over n
/// points together with strictly positive atom weights. Instances are
/// validated on construction and immutable afterwards, so they can be
/// shared freely across readers.
///
/// Per-center orderings and prefix masses are precomputed, which makes
/// ball measures O(log n) and keeps the sweep-style analyzers exact: the
/// open ball B(x, r) is constant for r in the half-open interval between
/// consecutive critical radii, so infima/suprema over continuous r reduce
/// to finitely many evaluations.
class MetricMeasureSpace {
public:
    /// Validates and builds the space. Throws Error with the first violated
    /// invariant: too_few_points, asymmetric_distance (i,j),
    /// triangle_violation (i,j,k with d(i,j) > d(i,k)+d(k,j)),
    /// nonpositive_weight (i). Triangle slack tolerance is 1e-12 absolute.
    MetricMeasureSpace(std::string name,
                       std::vector<std::vector<double>> dist,
                       std::vector<double> weights,
                       std::vector<std::vector<double>> coords = {});

    int size() const { return n_; }
    const std::string& name() const { return name_; }
    const std::vector<std::vector<double>>& coords() const { return coords_; }

    double dist(int i, int j) const { return dist_[static_cast<size_t>(i) * n_ + j]; }
    double weight(int i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const { return total_mass_; }
    double diameter() const { return diameter_; }
    double min_positive_distance() const { return min_positive_distance_; }

    /// Sorted distinct positive distances from `center` (all are <= diam).
    const std::vector<double>& critical_radii(int center) const;

    /// Indices sorted by distance from `center` (ties by index; the center
    /// itself comes first).
    const std::vector<int>& by_distance(int center) const { return order_[center]; }

    /// Number of members of the ball.
    int ball_count(const Ball& b) const;

    /// Member indices, ascending.
    PointSet ball_members(const Ball& b) const;

    /// Sum of member weights; 0 for the empty ball.
    double ball_mass(const Ball& b) const;

    bool ball_contains(const Ball& b, int i) const;

    /// Mass of the k points nearest to `center` (k = 0..n).
    double prefix_mass(int center, int k) const { return prefix_mass_[center][k]; }

    /// Sub-space induced on `members` (needs >= 2 points). Distances and
    /// weights are inherited; coords too when present.
    MetricMeasureSpace restrict(const PointSet& members) const;

    /// Membership mask (size n) for a point set.
    std::vector<char> mask(const PointSet& points) const;

private:
    void validate() const;
    void build_caches();

    std::string name_;
    int n_ = 0;
    std::vector<double> dist_; // row-major n x n
    std::vector<double> weights_;
    std::vector<std::vector<double>> coords_;
    double total_mass_ = 0.0;
    double diameter_ = 0.0;
    double min_positive_distance_ = 0.0;

    std::vector<std::vector<int>> order_;          // per center, by distance
    std::vector<std::vector<double>> sorted_d_;    // distances in order_
    std::vector<std::vector<double>> prefix_mass_; // cumulative weights in order_
    std::vector<std::vector<double>> crit_;        // distinct positive distances
};

/// Validation entry point used by the JSON loader and the generators.
/// Same checks as the constructor; returns the space or throws.
MetricMeasureSpace validate_space(std::string name,
                                  std::vector<std::vector<double>> dist,
                                  std::vector<double> weights,
                                  std::vector<std::vector<double>> coords = {});

} // namespace hslab

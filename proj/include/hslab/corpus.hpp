#pragma once

#include "hslab/space.hpp"

namespace hslab::corpus {

/// Lattice points of [0,1]^dim (dim = 1 or 2), n points per axis, each atom
/// weighted n^{-dim}. Euclidean distances. Expected regularity exponent dim.
MetricMeasureSpace grid(int dim, int n);

/// The 2^level left endpoints of the surviving middle-thirds intervals,
/// uniform weights 2^{-level}, distance |x - y|. Expected exponent ln2/ln3.
/// level in [1, 8].
MetricMeasureSpace cantor(int level);

/// Snowflake transform d -> d^alpha, 0 < alpha < 1; weights unchanged.
MetricMeasureSpace snowflake(const MetricMeasureSpace& space, double alpha);

/// Points i/n, i = 1..n, with weights proportional to (i/n)^beta normalized
/// to total mass 1. The mass of balls near 0 decays like r^{1+beta}, so the
/// exponent-1 lower mass bound degenerates under refinement.
MetricMeasureSpace vanishing_density(int n, double beta);

/// n uniform points in the unit square, Euclidean distances, uniform
/// weights. Bit-reproducible per seed (own generator mapping, independent
/// of the standard library's distributions).
MetricMeasureSpace random_space(int n, unsigned long long seed);

/// Scale every distance by c > 0 (test helper for covariance identities).
MetricMeasureSpace scale_distances(const MetricMeasureSpace& space, double c);

/// Scale every weight by c > 0.
MetricMeasureSpace scale_weights(const MetricMeasureSpace& space, double c);

} // namespace hslab::corpus

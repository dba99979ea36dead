#pragma once

#include <vector>

namespace hslab {

/// Dense tableau simplex for
///     max c.x   subject to   A x <= b,  x >= 0,
/// with b >= 0 so the slack basis is immediately feasible (no phase 1).
/// Dantzig pricing with a Bland fallback after an iteration threshold to
/// rule out cycling.
struct SimplexResult {
    bool optimal = false;
    bool unbounded = false;
    double objective = 0.0;
    std::vector<double> x;     // primal solution
    std::vector<double> duals; // one multiplier per row (slack reduced costs)
    long iterations = 0;
};

SimplexResult simplex_max(const std::vector<std::vector<double>>& a,
                          const std::vector<double>& b,
                          const std::vector<double>& c,
                          long max_iterations = 500000);

} // namespace hslab

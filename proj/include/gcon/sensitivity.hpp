#pragma once

#include "gcon/graph.hpp"
#include "gcon/propagation.hpp"

#include <string>
#include <vector>

namespace gcon {

// Closed-form bound on the summed per-row L2 change of Z_m across
// edge-neighboring graphs: 2(1-a)/a * [1 - (1-a)^m].
double sensitivity_bound_single(double alpha, Step m);

// Bound for the concatenated Z: mean of the per-step bounds.
double sensitivity_bound(const PropagationConfig& cfg);

struct NeighborSensitivity {
    Edge edge;
    bool removed;  // false = edge added
    double psi;    // sum_i ||z_i' - z_i||_2
};

struct SensitivityReport {
    double bound = 0.0;
    double empirical_max = 0.0;          // over all neighbors
    double empirical_max_removal = 0.0;  // removal neighbors only
    std::vector<NeighborSensitivity> per_neighbor;
    PropagationConfig config;

    std::string to_text() const;
};

// Brute-force oracle: enumerate every edge-neighboring graph, recompute Z
// and sum per-row L2 differences. Rows of X must be L2-normalized.
SensitivityReport empirical_sensitivity(const Graph& g, const PropagationConfig& cfg,
                                        const Matrix& X_normalized,
                                        int max_nodes = 30, double clip_p = 0.5);

} // namespace gcon

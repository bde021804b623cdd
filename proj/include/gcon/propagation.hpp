#pragma once

#include "gcon/graph.hpp"

#include <limits>
#include <vector>

namespace gcon {

// Propagation step count; kInfiniteSteps selects the closed-form limit.
using Step = int;
inline constexpr Step kInfiniteSteps = -1;

struct PropagationConfig {
    double alpha = 0.5;        // restart probability in (0, 1]
    std::vector<Step> steps;   // s >= 1 entries, each >= 0 or kInfiniteSteps

    int s() const { return static_cast<int>(steps.size()); }
    void validate() const;
};

struct AggregateFeatures {
    Matrix Z;                  // n x (s * d1)
    PropagationConfig config;
    int d1 = 0;                // per-block width
};

// R_0 = I; finite m via the recursion R_m = (1-a) A R_{m-1} + a I;
// m = infinity via the linear solve (I - (1-a) A) R = a I.
Matrix build_propagation_matrix(const NormalizedAdjacency& adj, double alpha, Step m);

// Z = (1/s) (R_{m_1} X | ... | R_{m_s} X). Repeated steps reuse one
// propagation matrix. Rows of X must have L2-norm <= 1.
AggregateFeatures aggregate(const NormalizedAdjacency& adj, const Matrix& X,
                            const PropagationConfig& cfg);

// Frobenius distance between the finite-step and limit matrices.
double ppr_convergence_gap(const NormalizedAdjacency& adj, double alpha, Step m);

// Dense propagation needs O(n^2) memory; reject anything past this.
inline constexpr int kMaxDenseNodes = 20000;

} // namespace gcon

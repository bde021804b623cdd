#pragma once

#include "gcon/graph.hpp"

namespace gcon {

enum class LossKind { MultilabelSoftMargin, PseudoHuber };

struct LossSpec {
    LossKind kind = LossKind::MultilabelSoftMargin;
    int c = 2;              // class count
    double delta_l = 0.5;   // pseudo-Huber width, unused for MLSM

    void validate() const;
};

// Per-scalar loss value and its first three derivatives in x.
struct LossDerivs {
    double value, d1, d2, d3;
};

LossDerivs loss_value_and_derivs(const LossSpec& spec, double x, double y);

// Closed-form suprema of |l'|, |l''|, |l'''| over x for y in {0, 1}.
struct DerivativeSuprema {
    double c1, c2, c3;
};

DerivativeSuprema derivative_suprema(const LossSpec& spec);

// Everything needed to evaluate the perturbed objective
//   (1/n1) sum_i sum_j l(z_i^T theta_j; y_ij)
//   + ((Lambda + LambdaPrime)/2) ||Theta||_F^2 + (1/n1) B . Theta
struct ObjectiveContext {
    Matrix Z;            // n1 x d, training rows
    Matrix Y;            // n1 x c, binary
    double Lambda = 1.0;
    double LambdaPrime = 0.0;
    Matrix B;            // d x c
    LossSpec loss;

    int n1() const { return static_cast<int>(Z.rows()); }
    int d() const { return static_cast<int>(Z.cols()); }
    void validate() const;
};

double objective_value(const ObjectiveContext& ctx, const Matrix& Theta);
Matrix objective_gradient(const ObjectiveContext& ctx, const Matrix& Theta);

struct ConvexityProbeReport {
    int trials = 0;
    int violations = 0;
    double max_violation = 0.0; // positive means the inequality failed
};

// Randomized check of the strong-convexity inequality with modulus
// Lambda + LambdaPrime.
class Rng;
ConvexityProbeReport convexity_probe(const ObjectiveContext& ctx, int trials, Rng& rng);

} // namespace gcon

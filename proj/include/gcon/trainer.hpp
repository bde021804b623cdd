#pragma once

#include "gcon/calibration.hpp"
#include "gcon/encoder.hpp"
#include "gcon/noise.hpp"
#include "gcon/objective.hpp"
#include "gcon/propagation.hpp"

#include <cstdint>
#include <utility>

namespace gcon {

struct OptimizerSettings {
    int max_iters = 50000;
    double grad_tol = 1e-8;   // Frobenius norm of the gradient
    double init_step = 1.0;   // initial Armijo step
};

struct TrainConfig {
    PrivacyBudget budget;
    LossSpec loss;
    PropagationConfig propagation{0.5, {2}};
    double Lambda_in = 1.0;
    double xi = 1e-3;
    double clip_p = 0.5;
    EncoderSettings encoder;
    PseudoLabelMode pseudo_label = PseudoLabelMode::None;
    OptimizerSettings optimizer;
    std::uint64_t seed = 1;   // drives noise sampling only
};

struct OptimizerTrace {
    int iterations = 0;
    double final_grad_norm = 0.0;
    double final_value = 0.0;
};

struct ModelArtifact {
    int format_version = 1;
    Matrix Theta;              // d x c
    EncoderModel encoder;
    CalibrationResult calibration;
    PropagationConfig propagation;
    double clip_p = 0.5;
    LossSpec loss;
    PseudoLabelMode pseudo_label = PseudoLabelMode::None;
    NoiseMatrix noise;
    OptimizerTrace trace;
    double stationarity_residual = 0.0; // max column gap of the recomputed B
};

// Full-batch gradient descent with Armijo backtracking from `init`.
// Throws ConvergenceError past max_iters.
std::pair<Matrix, OptimizerTrace> minimize_objective(const ObjectiveContext& ctx,
                                                     const Matrix& init,
                                                     const OptimizerSettings& settings);

// Encode, row-normalize, propagate, calibrate, sample noise, minimize the
// perturbed objective and package the released model.
ModelArtifact train(const Graph& g, const TrainConfig& cfg);

// Rows of X scaled to unit L2 norm; zero rows left zero.
Matrix normalize_rows(Matrix X);

// The noise matrix implied by the minimizer: B = -n1 d(L_Lambda +
// (LambdaPrime/2)||Theta||^2)/dTheta. Ties the optimizer output back to
// the sampled noise.
Matrix recompute_noise(const ObjectiveContext& ctx, const Matrix& Theta);

} // namespace gcon

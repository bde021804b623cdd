#pragma once

#include "gcon/trainer.hpp"

#include <vector>

namespace gcon {

enum class InferenceMode { Private, Public };

struct InferenceConfig {
    InferenceMode mode = InferenceMode::Private;
    // Restart probability of the one-hop matrix R_hat; negative means
    // "use the training alpha from the artifact".
    double alpha_I = -1.0;
    bool one_over_s = true; // scale concatenated blocks by 1/s, matching training

    void validate() const;
};

// Private mode: R_hat = I for m = 0, else (1 - alpha_I) A + alpha_I I, one
// block per training step. Public mode: full R_m propagation as in
// training. Either way the result is (blocks) * Theta_priv.
Matrix infer(const ModelArtifact& artifact, const Graph& g,
             const InferenceConfig& cfg);

// Accuracy of argmax predictions (ties to the lowest class index) over
// masked rows; equals micro-averaged F1 for single-label multiclass.
double micro_f1(const Matrix& scores, const Matrix& Y_true,
                const std::vector<bool>& mask);

// Per-row argmax with ties to the lowest class index.
std::vector<int> argmax_rows(const Matrix& scores);

} // namespace gcon

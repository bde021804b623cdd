#pragma once

#include "gcon/graph.hpp"

#include <cstdint>

namespace gcon {

struct EncoderSettings {
    int d1 = 8;        // encoded feature width
    int h = 16;        // hidden width
    int epochs = 300;
    double lr = 0.1;
    bool bias = true;
    std::uint64_t seed = 12345;
};

// Two-layer trunk d0 -> h -> d1 (tanh hidden, identity output) plus a
// softmax classification head d1 -> c. Fitted on labeled training rows
// only; never sees the edge set.
struct EncoderModel {
    Matrix W1a, W1b;   // d0 x h, h x d1
    Vector b1a, b1b;   // h, d1 (zero-sized when bias disabled)
    Matrix W2;         // d1 x c
    Vector b2;         // c
    bool bias = true;
    double train_accuracy = 0.0;

    int d0() const { return static_cast<int>(W1a.rows()); }
    int d1() const { return static_cast<int>(W1b.cols()); }
    int c() const { return static_cast<int>(W2.cols()); }
};

// Full-batch gradient descent on softmax cross-entropy over train-split
// rows of (X, Y). Deterministic given settings.seed.
EncoderModel fit_encoder(const Matrix& X, const Matrix& Y,
                         const std::vector<Split>& split,
                         const EncoderSettings& settings);

// Trunk applied to all rows: tanh(X W1a + b1a) W1b + b1b.
Matrix encode(const EncoderModel& model, const Matrix& X);

// Head logits for encoded rows.
Matrix head_logits(const EncoderModel& model, const Matrix& encoded);

enum class PseudoLabelMode { None, All };

struct PseudoLabelResult {
    Matrix Y;                     // expanded labels, one-hot rows
    std::vector<int> train_rows;  // rows that enter the private objective
};

// mode None keeps the train split; mode All assigns every non-train node
// the head argmax (ties to the lowest class index).
PseudoLabelResult pseudo_label(const EncoderModel& model, const Matrix& X,
                               const Matrix& Y, const std::vector<Split>& split,
                               PseudoLabelMode mode);

} // namespace gcon

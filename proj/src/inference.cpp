#include "gcon/inference.hpp"

#include <stdexcept>

namespace gcon {

void InferenceConfig::validate() const {
    if (alpha_I >= 0.0 && alpha_I > 1.0)
        throw std::invalid_argument("alpha_I must lie in [0, 1]");
}

Matrix infer(const ModelArtifact& artifact, const Graph& g,
             const InferenceConfig& cfg) {
    cfg.validate();
    if (g.feature_dim() != artifact.encoder.d0())
        throw std::invalid_argument("feature width does not match the artifact's encoder");

    const Matrix X = normalize_rows(encode(artifact.encoder, g.X()));
    const auto& prop = artifact.propagation;
    const int s = prop.s();
    const int d1 = static_cast<int>(X.cols());
    const double scale = cfg.one_over_s ? 1.0 / s : 1.0;

    Matrix Z(g.n(), s * d1);
    if (cfg.mode == InferenceMode::Public) {
        const auto adj = normalize_adjacency(g, artifact.clip_p);
        const auto agg = aggregate(adj, X, prop);
        Z = agg.Z;
        if (!cfg.one_over_s) Z *= s; // aggregate() already divides by s
    } else {
        const double alpha_I = cfg.alpha_I < 0.0 ? prop.alpha : cfg.alpha_I;
        const auto adj = normalize_adjacency(g, artifact.clip_p);
        Matrix one_hop;
        for (int b = 0; b < s; ++b) {
            Matrix block;
            if (prop.steps[b] == 0) {
                block = X;
            } else {
                if (one_hop.size() == 0)
                    one_hop = (1.0 - alpha_I) * adj.A
                            + alpha_I * Matrix::Identity(g.n(), g.n());
                block = one_hop * X;
            }
            Z.block(0, b * d1, g.n(), d1) = scale * block;
        }
    }
    return Z * artifact.Theta;
}

std::vector<int> argmax_rows(const Matrix& scores) {
    std::vector<int> out(scores.rows());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        int best = 0;
        for (Eigen::Index j = 1; j < scores.cols(); ++j)
            if (scores(i, j) > scores(i, best)) best = static_cast<int>(j);
        out[i] = best;
    }
    return out;
}

double micro_f1(const Matrix& scores, const Matrix& Y_true,
                const std::vector<bool>& mask) {
    if (scores.rows() != Y_true.rows() ||
        static_cast<Eigen::Index>(mask.size()) != scores.rows())
        throw std::invalid_argument("scores, labels and mask must have matching rows");
    const auto pred = argmax_rows(scores);
    long total = 0, correct = 0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        if (!mask[i]) continue;
        int truth = -1;
        for (Eigen::Index j = 0; j < Y_true.cols(); ++j)
            if (Y_true(i, j) == 1.0) { truth = static_cast<int>(j); break; }
        if (truth < 0)
            throw std::invalid_argument("masked row has no label");
        ++total;
        if (pred[i] == truth) ++correct;
    }
    if (total == 0) throw std::invalid_argument("empty evaluation mask");
    return static_cast<double>(correct) / total;
}

} // namespace gcon

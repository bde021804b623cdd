#include "gcon/trainer.hpp"
#include "gcon/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace gcon {

Matrix normalize_rows(Matrix X) {
    for (int i = 0; i < X.rows(); ++i) {
        const double norm = X.row(i).norm();
        if (norm > 0.0) X.row(i) /= norm;
    }
    return X;
}

Matrix recompute_noise(const ObjectiveContext& ctx, const Matrix& Theta) {
    ObjectiveContext unperturbed = ctx;
    unperturbed.B = Matrix();
    return -static_cast<double>(ctx.n1()) * objective_gradient(unperturbed, Theta);
}

std::pair<Matrix, OptimizerTrace> minimize_objective(const ObjectiveContext& ctx,
                                                     const Matrix& init,
                                                     const OptimizerSettings& settings) {
    ctx.validate();
    if (!(ctx.Lambda + ctx.LambdaPrime > 0.0))
        throw std::invalid_argument("minimization requires Lambda + LambdaPrime > 0");

    constexpr double kArmijo = 1e-4;
    Matrix theta = init;
    double value = objective_value(ctx, theta);
    double step = settings.init_step;
    OptimizerTrace trace;

    // Tolerance is relative to the problem scale: a large noise matrix puts a
    // floating-point floor under the gradient that an absolute test of the
    // same nominal size could never reach.
    double tol = settings.grad_tol;

    for (int it = 0; it < settings.max_iters; ++it) {
        const Matrix grad = objective_gradient(ctx, theta);
        const double grad_norm = grad.norm();
        if (it == 0) tol = settings.grad_tol * std::max(1.0, grad_norm);
        if (grad_norm <= tol) {
            trace.iterations = it;
            trace.final_grad_norm = grad_norm;
            trace.final_value = value;
            return {theta, trace};
        }

        const double gg = grad.squaredNorm();
        double t = step;
        while (true) {
            const Matrix candidate = theta - t * grad;
            const double cand_value = objective_value(ctx, candidate);
            if (cand_value <= value - kArmijo * t * gg) {
                // A step that passes Armijo but cannot strictly decrease the
                // value means the objective is resolved to machine precision.
                if (cand_value >= value) {
                    trace.iterations = it;
                    trace.final_grad_norm = grad_norm;
                    trace.final_value = value;
                    return {theta, trace};
                }
                theta = candidate;
                value = cand_value;
                break;
            }
            t *= 0.5;
            if (t < 1e-300)
                throw ConvergenceError("line search step underflow");
        }
        step = t * 2.0; // let the step grow back after a shrink
    }
    throw ConvergenceError("gradient descent did not converge within max_iters");
}

ModelArtifact train(const Graph& g, const TrainConfig& cfg) {
    cfg.budget.validate();
    cfg.loss.validate();
    cfg.propagation.validate();
    if (g.num_classes() != cfg.loss.c)
        throw std::invalid_argument("label width does not match loss class count");

    ModelArtifact artifact;
    artifact.propagation = cfg.propagation;
    artifact.clip_p = cfg.clip_p;
    artifact.loss = cfg.loss;
    artifact.pseudo_label = cfg.pseudo_label;

    // Algorithm order: encode, normalize, propagate, calibrate, sample,
    // minimize.
    artifact.encoder = fit_encoder(g.X(), g.Y(), g.split(), cfg.encoder);
    const Matrix Xenc = normalize_rows(encode(artifact.encoder, g.X()));

    const auto labels = pseudo_label(artifact.encoder, g.X(), g.Y(), g.split(),
                                     cfg.pseudo_label);
    const int n1 = static_cast<int>(labels.train_rows.size());

    const auto adj = normalize_adjacency(g, cfg.clip_p);
    const auto agg = aggregate(adj, Xenc, cfg.propagation);
    const int d = static_cast<int>(agg.Z.cols());

    artifact.calibration = calibrate(cfg.budget, cfg.loss, cfg.propagation, n1, d,
                                     cfg.Lambda_in, cfg.xi);

    artifact.noise = sample_noise_matrix(d, cfg.loss.c, artifact.calibration.beta,
                                         cfg.seed);

    ObjectiveContext ctx;
    ctx.Z.resize(n1, d);
    ctx.Y.resize(n1, cfg.loss.c);
    for (int i = 0; i < n1; ++i) {
        ctx.Z.row(i) = agg.Z.row(labels.train_rows[i]);
        ctx.Y.row(i) = labels.Y.row(labels.train_rows[i]);
    }
    ctx.Lambda = artifact.calibration.Lambda_eff;
    ctx.LambdaPrime = artifact.calibration.LambdaPrime;
    ctx.B = artifact.noise.B;
    ctx.loss = cfg.loss;

    auto [theta, trace] = minimize_objective(ctx, Matrix::Zero(d, cfg.loss.c),
                                             cfg.optimizer);
    artifact.Theta = std::move(theta);
    artifact.trace = trace;

    const Matrix B_rec = recompute_noise(ctx, artifact.Theta);
    double max_gap = 0.0;
    for (int j = 0; j < B_rec.cols(); ++j)
        max_gap = std::max(max_gap, (B_rec.col(j) - ctx.B.col(j)).norm());
    artifact.stationarity_residual = max_gap;
    if (max_gap > 1e-4 * (1.0 + ctx.B.norm()))
        throw ConvergenceError("stationarity identity violated after optimization");

    return artifact;
}

} // namespace gcon

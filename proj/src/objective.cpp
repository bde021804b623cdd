#include "gcon/objective.hpp"
#include "gcon/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gcon {

void LossSpec::validate() const {
    if (c < 2) throw std::invalid_argument("class count must be >= 2");
    if (kind == LossKind::PseudoHuber && !(delta_l > 0.0))
        throw std::invalid_argument("pseudo-Huber width must be positive");
}

namespace {

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

} // namespace

LossDerivs loss_value_and_derivs(const LossSpec& spec, double x, double y) {
    spec.validate();
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite loss argument");
    if (y != 0.0 && y != 1.0) throw std::invalid_argument("labels must be binary");
    const double c = spec.c;

    if (spec.kind == LossKind::MultilabelSoftMargin) {
        const double s = sigmoid(x);
        return {
            (softplus(x) - y * x) / c,
            (s - y) / c,
            s * (1.0 - s) / c,
            s * (1.0 - s) * (1.0 - 2.0 * s) / c,
        };
    }

    const double dl = spec.delta_l;
    const double u = x - y;
    const double q = 1.0 + (u * u) / (dl * dl);
    const double r = std::sqrt(q);
    return {
        dl * dl * (r - 1.0) / c,
        u / (c * r),
        1.0 / (c * q * r),
        -3.0 * u / (c * dl * dl * q * q * r),
    };
}

DerivativeSuprema derivative_suprema(const LossSpec& spec) {
    spec.validate();
    const double c = spec.c;
    if (spec.kind == LossKind::MultilabelSoftMargin)
        return {1.0 / c, 1.0 / (4.0 * c), 1.0 / (6.0 * std::sqrt(3.0) * c)};
    return {spec.delta_l / c, 1.0 / c,
            48.0 * std::sqrt(5.0) / (125.0 * c * spec.delta_l)};
}

void ObjectiveContext::validate() const {
    loss.validate();
    if (Z.rows() != Y.rows()) throw std::invalid_argument("Z/Y row mismatch");
    if (Y.cols() != loss.c) throw std::invalid_argument("Y column count != class count");
    if (B.size() != 0 && (B.rows() != Z.cols() || B.cols() != Y.cols()))
        throw std::invalid_argument("B dimensions must be d x c");
    if (!(Lambda > 0.0)) throw std::invalid_argument("Lambda must be positive");
    if (LambdaPrime < 0.0) throw std::invalid_argument("LambdaPrime must be >= 0");
}

double objective_value(const ObjectiveContext& ctx, const Matrix& Theta) {
    ctx.validate();
    if (Theta.rows() != ctx.Z.cols() || Theta.cols() != ctx.Y.cols())
        throw std::invalid_argument("Theta dimensions must be d x c");

    const Matrix scores = ctx.Z * Theta; // n1 x c
    double loss_sum = 0.0;
    for (int i = 0; i < scores.rows(); ++i)
        for (int j = 0; j < scores.cols(); ++j)
            loss_sum += loss_value_and_derivs(ctx.loss, scores(i, j), ctx.Y(i, j)).value;

    double value = loss_sum / ctx.n1()
                 + 0.5 * (ctx.Lambda + ctx.LambdaPrime) * Theta.squaredNorm();
    if (ctx.B.size() != 0)
        value += ctx.B.cwiseProduct(Theta).sum() / ctx.n1();
    return value;
}

Matrix objective_gradient(const ObjectiveContext& ctx, const Matrix& Theta) {
    ctx.validate();
    if (Theta.rows() != ctx.Z.cols() || Theta.cols() != ctx.Y.cols())
        throw std::invalid_argument("Theta dimensions must be d x c");

    const Matrix scores = ctx.Z * Theta;
    Matrix lp(scores.rows(), scores.cols());
    for (int i = 0; i < scores.rows(); ++i)
        for (int j = 0; j < scores.cols(); ++j)
            lp(i, j) = loss_value_and_derivs(ctx.loss, scores(i, j), ctx.Y(i, j)).d1;

    Matrix grad = (ctx.Z.transpose() * lp) / ctx.n1()
                + (ctx.Lambda + ctx.LambdaPrime) * Theta;
    if (ctx.B.size() != 0) grad += ctx.B / ctx.n1();
    return grad;
}

ConvexityProbeReport convexity_probe(const ObjectiveContext& ctx, int trials, Rng& rng) {
    ctx.validate();
    const double mu = ctx.Lambda + ctx.LambdaPrime;
    if (!(mu > 0.0)) throw std::invalid_argument("probe requires Lambda + LambdaPrime > 0");

    const int d = ctx.d();
    const int c = ctx.loss.c;
    ConvexityProbeReport report;
    report.trials = trials;
    for (int k = 0; k < trials; ++k) {
        Matrix T1(d, c), T2(d, c);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < c; ++j) {
                T1(i, j) = rng.normal();
                T2(i, j) = rng.normal();
            }
        const double t = 0.05 + 0.9 * rng.uniform();
        const double lhs = objective_value(ctx, t * T1 + (1.0 - t) * T2);
        const double rhs = t * objective_value(ctx, T1)
                         + (1.0 - t) * objective_value(ctx, T2)
                         - 0.5 * mu * t * (1.0 - t) * (T1 - T2).squaredNorm();
        const double violation = lhs - rhs;
        report.max_violation = std::max(report.max_violation, violation);
        if (violation > 1e-9) ++report.violations;
    }
    return report;
}

} // namespace gcon

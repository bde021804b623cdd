#include "gcon/propagation.hpp"

#include <Eigen/LU>
#include <map>
#include <stdexcept>

namespace gcon {

void PropagationConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1]");
    if (steps.empty())
        throw std::invalid_argument("at least one propagation step required");
    for (Step m : steps)
        if (m < 0 && m != kInfiniteSteps)
            throw std::invalid_argument("steps must be >= 0 or infinite");
}

Matrix build_propagation_matrix(const NormalizedAdjacency& adj, double alpha, Step m) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1]");
    const auto n = adj.A.rows();
    if (n > kMaxDenseNodes)
        throw std::invalid_argument("graph exceeds dense propagation size cap");

    if (m == 0) return Matrix::Identity(n, n);

    if (m == kInfiniteSteps) {
        // (I - (1-a) A) R = a I, solved by LU. Invertible since the
        // spectral radius of the row-stochastic A is <= 1 < 1/(1-a).
        Matrix lhs = Matrix::Identity(n, n) - (1.0 - alpha) * adj.A;
        Matrix R = Eigen::PartialPivLU<Matrix>(lhs).solve(alpha * Matrix::Identity(n, n));
        if (!R.allFinite())
            throw std::runtime_error("non-finite entries after PPR solve");
        return R;
    }

    // Horner accumulation of R_m = (1-a) A R_{m-1} + a I from R_0 = I.
    Matrix R = Matrix::Identity(n, n);
    for (Step i = 0; i < m; ++i)
        R = (1.0 - alpha) * (adj.A * R) + alpha * Matrix::Identity(n, n);
    return R;
}

AggregateFeatures aggregate(const NormalizedAdjacency& adj, const Matrix& X,
                            const PropagationConfig& cfg) {
    cfg.validate();
    if (X.rows() != adj.A.rows())
        throw std::invalid_argument("feature/adjacency dimension mismatch");

    const int s = cfg.s();
    const int d1 = static_cast<int>(X.cols());
    Matrix Z(X.rows(), static_cast<Eigen::Index>(s) * d1);

    std::map<Step, Matrix> cache;
    for (int i = 0; i < s; ++i) {
        const Step m = cfg.steps[i];
        auto it = cache.find(m);
        if (it == cache.end())
            it = cache.emplace(m, build_propagation_matrix(adj, cfg.alpha, m)).first;
        Z.middleCols(static_cast<Eigen::Index>(i) * d1, d1) = it->second * X;
    }
    Z /= static_cast<double>(s);
    return {std::move(Z), cfg, d1};
}

double ppr_convergence_gap(const NormalizedAdjacency& adj, double alpha, Step m) {
    const Matrix Rm = build_propagation_matrix(adj, alpha, m);
    const Matrix Rinf = build_propagation_matrix(adj, alpha, kInfiniteSteps);
    return (Rm - Rinf).norm();
}

} // namespace gcon

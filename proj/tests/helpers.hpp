#pragma once

#include "gcon/graph.hpp"
#include "gcon/rng.hpp"

#include <vector>

namespace gcon::testing {

// Erdos-Renyi-style graph with one-hot labels cycling over `classes` and
// everyone in the train split (tests override the split when they care).
inline Graph random_graph(int n, double edge_prob, int classes, Rng& rng,
                          int d0 = 3) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.uniform() < edge_prob) edges.emplace_back(u, v);
    Matrix X(n, d0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d0; ++j) X(i, j) = rng.normal();
    Matrix Y = Matrix::Zero(n, classes);
    for (int i = 0; i < n; ++i) Y(i, i % classes) = 1.0;
    return Graph(n, std::move(edges), std::move(X), std::move(Y),
                 std::vector<Split>(n, Split::Train));
}

inline Matrix unit_rows(Matrix X) {
    for (int i = 0; i < X.rows(); ++i) {
        const double norm = X.row(i).norm();
        if (norm > 0.0) X.row(i) /= norm;
    }
    return X;
}

} // namespace gcon::testing

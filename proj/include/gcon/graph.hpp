#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gcon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Split : std::uint8_t { Unlabeled = 0, Train, Val, Test };

using Edge = std::pair<int, int>; // stored with first < second

// Undirected graph with node features X (n x d0), one-hot labels Y (n x c,
// all-zero rows for unlabeled nodes) and a per-node split tag. Immutable
// after construction; adjacency is kept as a sorted edge list plus
// neighbor lists, dense matrices are only materialized during propagation.
class Graph {
public:
    Graph(int n, std::vector<Edge> edges, Matrix X, Matrix Y,
          std::vector<Split> split);

    int n() const { return n_; }
    int feature_dim() const { return static_cast<int>(X_.cols()); }
    int num_classes() const { return static_cast<int>(Y_.cols()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Matrix& X() const { return X_; }
    const Matrix& Y() const { return Y_; }
    const std::vector<Split>& split() const { return split_; }
    const std::vector<std::vector<int>>& neighbors() const { return nbrs_; }

    int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }
    bool has_edge(int u, int v) const;
    bool is_labeled(int v) const;

    std::vector<int> nodes_with_split(Split s) const;

    // Same nodes/features/labels/split, different edge set.
    Graph with_edges(std::vector<Edge> edges) const;

private:
    int n_;
    std::vector<Edge> edges_;
    Matrix X_;
    Matrix Y_;
    std::vector<Split> split_;
    std::vector<std::vector<int>> nbrs_;
};

// Row-stochastic self-loop normalized adjacency with off-diagonal clip p.
struct NormalizedAdjacency {
    Matrix A;      // n x n, rows sum to 1
    double clip;   // p in (0, 1/2]
};

// Off-diagonal (i,j) = min(1/(k_i+1), p) for edges, diagonal absorbs the
// rest of the row. p = 1/2 reproduces the plain D^-1 (A + I) normalization.
NormalizedAdjacency normalize_adjacency(const Graph& g, double p = 0.5);

// Every graph differing from g by exactly one edge (removals first, then
// additions), for brute-force sensitivity oracles.
std::vector<Graph> neighboring_graphs(const Graph& g);

// Edge direction tags parallel to neighboring_graphs() output.
struct NeighborEdit {
    Edge edge;
    bool removed; // false = added
};
std::vector<NeighborEdit> neighboring_edits(const Graph& g);

// Mean over nodes of the fraction of same-labeled neighbors. Requires all
// nodes labeled and no isolated node.
double homophily_ratio(const Graph& g);

} // namespace gcon

#include "gcon/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace gcon {

Graph::Graph(int n, std::vector<Edge> edges, Matrix X, Matrix Y,
             std::vector<Split> split)
    : n_(n), edges_(std::move(edges)), X_(std::move(X)), Y_(std::move(Y)),
      split_(std::move(split)) {
    if (n_ < 1) throw std::invalid_argument("graph must have at least one node");
    if (X_.rows() != n_) throw std::invalid_argument("feature matrix row count != n");
    if (Y_.rows() != n_) throw std::invalid_argument("label matrix row count != n");
    if (static_cast<int>(split_.size()) != n_)
        throw std::invalid_argument("split size != n");

    for (auto& [u, v] : edges_) {
        if (u == v) throw std::invalid_argument("self-loop edge rejected");
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n_) throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("duplicate edge rejected");

    for (int i = 0; i < n_; ++i) {
        int nz = 0;
        for (int j = 0; j < Y_.cols(); ++j) {
            const double y = Y_(i, j);
            if (y != 0.0 && y != 1.0)
                throw std::invalid_argument("label entries must be 0 or 1");
            nz += (y == 1.0);
        }
        if (nz > 1) throw std::invalid_argument("label row must be one-hot or all-zero");
    }

    nbrs_.resize(n_);
    for (const auto& [u, v] : edges_) {
        nbrs_[u].push_back(v);
        nbrs_[v].push_back(u);
    }
    for (auto& lst : nbrs_) std::sort(lst.begin(), lst.end());
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

bool Graph::is_labeled(int v) const { return Y_.row(v).sum() > 0.0; }

std::vector<int> Graph::nodes_with_split(Split s) const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
        if (split_[i] == s) out.push_back(i);
    return out;
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
    return Graph(n_, std::move(edges), X_, Y_, split_);
}

NormalizedAdjacency normalize_adjacency(const Graph& g, double p) {
    if (!(p > 0.0 && p <= 0.5))
        throw std::invalid_argument("clip p must lie in (0, 1/2]");
    const int n = g.n();
    Matrix A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double w = std::min(1.0 / (g.degree(i) + 1), p);
        for (int j : g.neighbors()[i]) A(i, j) = w;
        A(i, i) = 1.0 - w * g.degree(i);
    }
    return {std::move(A), p};
}

std::vector<NeighborEdit> neighboring_edits(const Graph& g) {
    std::vector<NeighborEdit> edits;
    for (const auto& e : g.edges()) edits.push_back({e, true});
    for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v)
            if (!g.has_edge(u, v)) edits.push_back({{u, v}, false});
    return edits;
}

std::vector<Graph> neighboring_graphs(const Graph& g) {
    std::vector<Graph> out;
    for (const auto& edit : neighboring_edits(g)) {
        std::vector<Edge> edges = g.edges();
        if (edit.removed) {
            edges.erase(std::find(edges.begin(), edges.end(), edit.edge));
        } else {
            edges.push_back(edit.edge);
        }
        out.push_back(g.with_edges(std::move(edges)));
    }
    return out;
}

double homophily_ratio(const Graph& g) {
    double acc = 0.0;
    for (int v = 0; v < g.n(); ++v) {
        if (!g.is_labeled(v))
            throw std::invalid_argument("homophily ratio requires all nodes labeled");
        if (g.degree(v) == 0)
            throw std::invalid_argument("homophily ratio undefined for isolated nodes");
        int same = 0;
        for (int u : g.neighbors()[v])
            if (g.Y().row(u) == g.Y().row(v)) ++same;
        acc += static_cast<double>(same) / g.degree(v);
    }
    return acc / g.n();
}

} // namespace gcon

#include <doctest.h>

#include "gcon/graph.hpp"
#include "helpers.hpp"

#include <set>

using namespace gcon;
using gcon::testing::random_graph;

namespace {

Graph path_graph(int n, int classes = 2) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    Matrix X = Matrix::Zero(n, 2);
    Matrix Y = Matrix::Zero(n, classes);
    for (int i = 0; i < n; ++i) Y(i, i % classes) = 1.0;
    return Graph(n, std::move(edges), std::move(X), std::move(Y),
                 std::vector<Split>(n, Split::Train));
}

} // namespace

TEST_CASE("graph validation") {
    Matrix X = Matrix::Zero(3, 1), Y = Matrix::Zero(3, 2);
    std::vector<Split> sp(3, Split::Unlabeled);

    CHECK_THROWS_AS(Graph(3, {{1, 1}}, X, Y, sp), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 1}, {1, 0}}, X, Y, sp), std::invalid_argument);
    CHECK_THROWS_AS(Graph(3, {{0, 3}}, X, Y, sp), std::invalid_argument);
    CHECK_THROWS_AS(Graph(0, {}, Matrix(), Matrix(), {}), std::invalid_argument);

    Matrix bad = Y;
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(Graph(3, {}, X, bad, sp), std::invalid_argument);
    bad(0, 0) = 1.0;
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(Graph(3, {}, X, bad, sp), std::invalid_argument);

    // Reversed endpoints are normalized, not rejected.
    Graph g(3, {{2, 0}}, X, Y, sp);
    CHECK(g.edges() == std::vector<Edge>{{0, 2}});
    CHECK(g.has_edge(2, 0));
}

TEST_CASE("normalize_adjacency basic shapes") {
    SUBCASE("single isolated node") {
        Graph g(1, {}, Matrix::Zero(1, 1), Matrix::Zero(1, 1), {Split::Unlabeled});
        const auto adj = normalize_adjacency(g, 0.5);
        CHECK(adj.A(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("triangle, p = 1/2") {
        Graph g(3, {{0, 1}, {1, 2}, {0, 2}}, Matrix::Zero(3, 1), Matrix::Zero(3, 2),
                std::vector<Split>(3, Split::Unlabeled));
        const auto adj = normalize_adjacency(g, 0.5);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(adj.A(i, j) == doctest::Approx(1.0 / 3.0));
    }
    SUBCASE("2-node path, p = 1/3 clips") {
        Graph g = path_graph(2);
        const auto adj = normalize_adjacency(g, 1.0 / 3.0);
        CHECK(adj.A(0, 1) == doctest::Approx(1.0 / 3.0));
        CHECK(adj.A(1, 0) == doctest::Approx(1.0 / 3.0));
        CHECK(adj.A(0, 0) == doctest::Approx(2.0 / 3.0));
        CHECK(adj.A(1, 1) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("p = 1/2 equals plain D^-1 (A + I)") {
        Rng rng(11);
        Graph g = random_graph(9, 0.4, 2, rng);
        const auto adj = normalize_adjacency(g, 0.5);
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.n(); ++j) {
                const double expect =
                    (i == j || g.has_edge(i, j)) ? 1.0 / (g.degree(i) + 1) : 0.0;
                CHECK(adj.A(i, j) == doctest::Approx(expect).epsilon(1e-12));
            }
    }
    SUBCASE("p out of range") {
        Graph g = path_graph(2);
        CHECK_THROWS_AS(normalize_adjacency(g, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(normalize_adjacency(g, 0.6), std::invalid_argument);
    }
}

TEST_CASE("normalize_adjacency Lemma 1 properties on random graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(49));
        Graph g = random_graph(n, rng.uniform(), 2, rng);
        for (double p : {1.0 / 3.0, 0.5}) {
            const auto adj = normalize_adjacency(g, p);
            for (int i = 0; i < n; ++i) {
                CHECK(adj.A.row(i).minCoeff() >= 0.0);
                CHECK(adj.A.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
                const double col_bound = std::max((g.degree(i) + 1) * p, 1.0);
                CHECK(adj.A.col(i).sum() <= col_bound + 1e-9);
            }
        }
    }
}

TEST_CASE("normalize_adjacency ignores edge insertion order") {
    Matrix X = Matrix::Zero(4, 1), Y = Matrix::Zero(4, 2);
    std::vector<Split> sp(4, Split::Unlabeled);
    Graph a(4, {{0, 1}, {1, 2}, {2, 3}}, X, Y, sp);
    Graph b(4, {{2, 3}, {1, 0}, {2, 1}}, X, Y, sp);
    CHECK(normalize_adjacency(a).A == normalize_adjacency(b).A);
}

TEST_CASE("neighboring_graphs enumeration") {
    SUBCASE("counts") {
        CHECK(neighboring_graphs(path_graph(2)).size() == 1);

        Graph empty3(3, {}, Matrix::Zero(3, 1), Matrix::Zero(3, 2),
                     std::vector<Split>(3, Split::Unlabeled));
        CHECK(neighboring_graphs(empty3).size() == 3);

        CHECK(neighboring_graphs(path_graph(4)).size() == 6);
    }
    SUBCASE("each neighbor differs by exactly one edge, no duplicates") {
        Rng rng(5);
        Graph g = random_graph(7, 0.3, 2, rng);
        const auto neighbors = neighboring_graphs(g);
        const std::set<Edge> base(g.edges().begin(), g.edges().end());
        std::set<std::set<Edge>> seen;
        for (const auto& h : neighbors) {
            std::set<Edge> es(h.edges().begin(), h.edges().end());
            std::set<Edge> diff;
            std::set_symmetric_difference(base.begin(), base.end(), es.begin(),
                                          es.end(),
                                          std::inserter(diff, diff.begin()));
            CHECK(diff.size() == 1);
            CHECK(seen.insert(es).second);
        }
        const int total = g.n() * (g.n() - 1) / 2;
        CHECK(static_cast<int>(neighbors.size()) == total);
    }
    SUBCASE("edits parallel the graphs, removals first") {
        Graph g = path_graph(3);
        const auto edits = neighboring_edits(g);
        REQUIRE(edits.size() == 3);
        CHECK(edits[0].removed);
        CHECK(edits[1].removed);
        CHECK_FALSE(edits[2].removed);
        CHECK(edits[2].edge == Edge{0, 2});
    }
}

TEST_CASE("homophily_ratio") {
    SUBCASE("triangle all same label") {
        Matrix Y = Matrix::Zero(3, 2);
        Y.col(0).setOnes();
        Graph g(3, {{0, 1}, {1, 2}, {0, 2}}, Matrix::Zero(3, 1), Y,
                std::vector<Split>(3, Split::Unlabeled));
        CHECK(homophily_ratio(g) == doctest::Approx(1.0));
    }
    SUBCASE("2-node path, differing labels") {
        CHECK(homophily_ratio(path_graph(2)) == doctest::Approx(0.0));
    }
    SUBCASE("3-node path labels (a, a, b)") {
        Matrix Y = Matrix::Zero(3, 2);
        Y(0, 0) = Y(1, 0) = Y(2, 1) = 1.0;
        Graph g(3, {{0, 1}, {1, 2}}, Matrix::Zero(3, 1), Y,
                std::vector<Split>(3, Split::Unlabeled));
        CHECK(homophily_ratio(g) == doctest::Approx(0.5));
    }
    SUBCASE("isolated or unlabeled nodes rejected") {
        Matrix Y = Matrix::Zero(3, 2);
        Y(0, 0) = Y(1, 0) = Y(2, 0) = 1.0;
        Graph isolated(3, {{0, 1}}, Matrix::Zero(3, 1), Y,
                       std::vector<Split>(3, Split::Unlabeled));
        CHECK_THROWS_AS(homophily_ratio(isolated), std::invalid_argument);

        Matrix Y2 = Matrix::Zero(2, 2);
        Y2(0, 0) = 1.0;
        Graph unlabeled(2, {{0, 1}}, Matrix::Zero(2, 1), Y2,
                        std::vector<Split>(2, Split::Unlabeled));
        CHECK_THROWS_AS(homophily_ratio(unlabeled), std::invalid_argument);
    }
}

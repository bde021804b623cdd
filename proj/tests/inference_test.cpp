#include <doctest.h>

#include "gcon/inference.hpp"
#include "helpers.hpp"

using namespace gcon;
using gcon::testing::random_graph;

namespace {

Graph test_graph(int n, std::uint64_t seed, double edge_prob = 0.4) {
    Rng rng(seed);
    return random_graph(n, edge_prob, 2, rng, 3);
}

ModelArtifact quick_train(const Graph& g, PropagationConfig prop,
                          std::uint64_t seed = 3) {
    TrainConfig cfg;
    cfg.budget = {2.0, 1e-3, 0.9};
    cfg.loss.c = g.num_classes();
    cfg.propagation = std::move(prop);
    cfg.encoder.d1 = 3;
    cfg.encoder.epochs = 60;
    cfg.seed = seed;
    return train(g, cfg);
}

} // namespace

TEST_CASE("steps = [0]: private and public agree exactly") {
    Graph g = test_graph(9, 5);
    const auto artifact = quick_train(g, {0.5, {0}});
    InferenceConfig priv, pub;
    pub.mode = InferenceMode::Public;
    CHECK(infer(artifact, g, priv) == infer(artifact, g, pub));
}

TEST_CASE("alpha_I = 1 ignores edges") {
    Graph g = test_graph(9, 6);
    const auto artifact = quick_train(g, {0.5, {2}});

    InferenceConfig cfg;
    cfg.alpha_I = 1.0;
    const Matrix scores = infer(artifact, g, cfg);

    // Identical to scoring on the same graph with every edge removed.
    Graph stripped = g.with_edges({});
    const Matrix bare = infer(artifact, stripped, cfg);
    CHECK(scores.isApprox(bare, 1e-12));
}

TEST_CASE("private inference is local to the query node's edges") {
    Graph g = test_graph(10, 8, 0.5);
    const auto artifact = quick_train(g, {0.5, {2}});
    InferenceConfig cfg;
    const Matrix base = infer(artifact, g, cfg);

    for (const auto& e : g.edges()) {
        std::vector<Edge> edges = g.edges();
        edges.erase(std::find(edges.begin(), edges.end(), e));
        const Matrix perturbed = infer(artifact, g.with_edges(edges), cfg);
        for (int v = 0; v < g.n(); ++v) {
            if (v == e.first || v == e.second) continue;
            CHECK((perturbed.row(v) - base.row(v)).norm() == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("public mode reproduces the training-time scores") {
    Graph g = test_graph(11, 9);
    PropagationConfig prop{0.4, {1, 2}};
    const auto artifact = quick_train(g, prop);

    InferenceConfig cfg;
    cfg.mode = InferenceMode::Public;
    const Matrix scores = infer(artifact, g, cfg);

    const Matrix X = normalize_rows(encode(artifact.encoder, g.X()));
    const Matrix Z = aggregate(normalize_adjacency(g, artifact.clip_p), X, prop).Z;
    CHECK(scores.isApprox(Z * artifact.Theta, 1e-12));
}

TEST_CASE("the 1/s flag rescales scores, not predictions") {
    Graph g = test_graph(8, 10);
    const auto artifact = quick_train(g, {0.5, {1, 2}});
    InferenceConfig with, without;
    without.one_over_s = false;
    const Matrix a = infer(artifact, g, with);
    const Matrix b = infer(artifact, g, without);
    CHECK(b.isApprox(2.0 * a, 1e-12));
}

TEST_CASE("infer validation") {
    Graph g = test_graph(8, 11);
    const auto artifact = quick_train(g, {0.5, {1}});

    Rng rng(1);
    Graph wide = random_graph(8, 0.3, 2, rng, 5); // feature width 5 != 3
    CHECK_THROWS_AS(infer(artifact, wide, InferenceConfig{}),
                    std::invalid_argument);

    InferenceConfig bad;
    bad.alpha_I = 1.5;
    CHECK_THROWS_AS(infer(artifact, g, bad), std::invalid_argument);
}

TEST_CASE("micro_f1") {
    Matrix scores(4, 3);
    scores << 9, 0, 0,
              0, 9, 0,
              0, 0, 9,
              9, 0, 0;
    Matrix Y = Matrix::Zero(4, 3);
    Y(0, 0) = Y(1, 1) = Y(2, 2) = Y(3, 0) = 1.0;
    std::vector<bool> all(4, true);

    CHECK(micro_f1(scores, Y, all) == doctest::Approx(1.0));

    Matrix wrong = Matrix::Zero(4, 3);
    wrong(0, 1) = wrong(1, 2) = wrong(2, 0) = wrong(3, 2) = 1.0;
    CHECK(micro_f1(scores, wrong, all) == doctest::Approx(0.0));

    Matrix three = Y;
    three.row(3).setZero();
    three(3, 1) = 1.0;
    CHECK(micro_f1(scores, three, all) == doctest::Approx(0.75));

    SUBCASE("ties break toward the lowest class index") {
        Matrix flat = Matrix::Zero(1, 3);
        CHECK(argmax_rows(flat) == std::vector<int>{0});
    }
    SUBCASE("permutation invariance over node order") {
        Matrix ps(4, 3), py(4, 3);
        const int perm[4] = {2, 0, 3, 1};
        for (int i = 0; i < 4; ++i) {
            ps.row(i) = scores.row(perm[i]);
            py.row(i) = three.row(perm[i]);
        }
        CHECK(micro_f1(ps, py, all) == micro_f1(scores, three, all));
    }
    SUBCASE("empty mask rejected") {
        CHECK_THROWS_AS(micro_f1(scores, Y, std::vector<bool>(4, false)),
                        std::invalid_argument);
    }
}

#pragma once

#include "gcon/graph.hpp"

#include <cstdint>
#include <string>

namespace gcon {

// Directory layout: edges.tsv ("src<TAB>dst", each undirected pair once),
// features.tsv (one tab-separated row per node, id order), labels.tsv
// ("id<TAB>class" for labeled nodes), split.tsv ("id<TAB>{train|val|test}").
Graph load_dataset(const std::string& dir);
void save_dataset(const std::string& dir, const Graph& g);

enum class SyntheticKind { Sbm, BlobsOnGraph };

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::Sbm;
    int n = 200;
    int classes = 4;
    double p_intra = 0.05;   // edge probability within a class
    double p_inter = 0.005;  // edge probability across classes
    int feature_dim = 16;
    double noise = 0.5;      // isotropic feature noise level
    std::uint64_t seed = 0;

    void validate() const;
};

// Stochastic block model with class-mean unit-vector features plus
// isotropic noise; classes assigned round-robin. Deterministic given seed.
Graph generate_sbm(const SyntheticSpec& spec);

// Stratified split: per_class_train train nodes per class, then val_count
// and test_count nodes drawn from the remaining labeled pool.
Graph make_split(const Graph& g, int per_class_train, int val_count,
                 int test_count, std::uint64_t seed);

} // namespace gcon

#pragma once

#include "impactgraph/graph.hpp"

#include <cstdint>

namespace impactgraph {

/// Erdős–Rényi style null model over the vocabulary.
struct BaselineConfig {
    double node_probability = 0.5;
    double edge_probability = 0.5;
    std::uint64_t seed = 0;
};

/// Two stages: keep each variable with node_probability (vocabulary order),
/// then keep each ordered pair (u, v), u != v, of kept variables with
/// edge_probability (row-major in vocabulary order). Kept variables stay in
/// the node set even without edges. Same (vocab, cfg) gives the same graph on
/// every platform. Throws std::invalid_argument for probabilities outside
/// [0, 1].
CausalGraph random_graph(VocabularyPtr vocabulary, const BaselineConfig& cfg);

}  // namespace impactgraph

#include "impactgraph/baseline.hpp"

#include "impactgraph/rng.hpp"

#include <stdexcept>
#include <vector>

namespace impactgraph {

CausalGraph random_graph(VocabularyPtr vocabulary, const BaselineConfig& cfg) {
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(cfg.node_probability) || !in_unit(cfg.edge_probability)) {
        throw std::invalid_argument("baseline probabilities must lie in [0, 1]");
    }

    PortableRng rng(cfg.seed);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < vocabulary->size(); ++i) {
        if (rng.bernoulli(cfg.node_probability)) kept.push_back(i);
    }

    const auto& keys = vocabulary->variables();
    NodeSet nodes;
    EdgeSet edges;
    for (auto i : kept) nodes.insert(keys[i]);
    for (auto u : kept) {
        for (auto v : kept) {
            if (u == v) continue;
            if (rng.bernoulli(cfg.edge_probability)) edges.insert(DirectedEdge{keys[u], keys[v]});
        }
    }
    return CausalGraph::from_parts(std::move(vocabulary), std::move(nodes), std::move(edges));
}

}  // namespace impactgraph

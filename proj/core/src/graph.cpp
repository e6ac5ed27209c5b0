#include "impactgraph/graph.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/text.hpp"

#include <algorithm>

namespace impactgraph {

VocabularyPtr make_vocabulary(std::string event_type, std::span<const std::string> names) {
    if (names.empty()) throw EmptyVocabulary();
    std::shared_ptr<CanonicalVocabulary> vocab(new CanonicalVocabulary());
    vocab->event_type_ = collapse_whitespace(event_type);
    vocab->keys_.reserve(names.size());
    vocab->labels_.reserve(names.size());
    for (const auto& raw : names) {
        auto label = collapse_whitespace(raw);
        auto key = to_lower_ascii(label);
        if (key.empty()) throw InvalidGraph("vocabulary contains an empty variable name");
        if (!vocab->index_.emplace(key, vocab->keys_.size()).second) throw DuplicateVariable(key);
        vocab->keys_.push_back(std::move(key));
        vocab->labels_.push_back(std::move(label));
    }
    return vocab;
}

VocabularyPtr make_vocabulary(std::string event_type, std::initializer_list<std::string> names) {
    return make_vocabulary(std::move(event_type), std::span<const std::string>(names.begin(), names.size()));
}

std::optional<std::size_t> CanonicalVocabulary::index_of(std::string_view key) const {
    const auto it = index_.find(std::string(key));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> CanonicalVocabulary::lookup(std::string_view mention) const {
    auto key = normalize_name(mention);
    if (!index_.contains(key)) return std::nullopt;
    return key;
}

const std::string& CanonicalVocabulary::label_of(std::string_view key) const {
    const auto idx = index_of(key);
    if (!idx) throw UnknownVariable(std::string(key));
    return labels_[*idx];
}

CausalGraph CausalGraph::from_parts(VocabularyPtr vocabulary, NodeSet nodes, EdgeSet edges,
                                    std::optional<EdgeCounts> counts) {
    if (!vocabulary) throw InvalidGraph("graph has no vocabulary");
    for (const auto& node : nodes) {
        if (!vocabulary->contains(node)) throw UnknownVariable(node);
    }
    for (const auto& e : edges) {
        if (e.cause == e.effect) throw SelfLoop(e.cause);
        for (const auto* end : {&e.cause, &e.effect}) {
            if (!vocabulary->contains(*end)) throw UnknownVariable(*end);
            if (!nodes.contains(*end))
                throw InvalidGraph("edge endpoint '" + *end + "' is not a node of the graph");
        }
    }
    if (counts) {
        if (counts->size() != edges.size()) throw InvalidGraph("edge counts do not cover the edge set");
        for (const auto& [edge, n] : *counts) {
            if (!edges.contains(edge) || n == 0)
                throw InvalidGraph("edge count for (" + edge.cause + ", " + edge.effect + ") is invalid");
        }
    }
    CausalGraph g;
    g.vocabulary_ = std::move(vocabulary);
    g.nodes_ = std::move(nodes);
    g.edges_ = std::move(edges);
    g.counts_ = std::move(counts);
    return g;
}

CausalGraph CausalGraph::empty(VocabularyPtr vocabulary) {
    return from_parts(std::move(vocabulary), {}, {});
}

std::vector<std::pair<std::string, std::string>> CausalGraph::edge_list() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.emplace_back(e.cause, e.effect);
    return out;
}

bool operator==(const CausalGraph& a, const CausalGraph& b) {
    return *a.vocabulary_ == *b.vocabulary_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_ &&
           a.counts_ == b.counts_;
}

CausalGraph build_graph(VocabularyPtr vocabulary,
                        std::span<const std::pair<std::string, std::string>> edges) {
    NodeSet nodes;
    EdgeSet edge_set;
    EdgeCounts counts;
    for (const auto& [cause_text, effect_text] : edges) {
        auto cause = vocabulary->lookup(cause_text);
        if (!cause) throw UnknownVariable(collapse_whitespace(cause_text));
        auto effect = vocabulary->lookup(effect_text);
        if (!effect) throw UnknownVariable(collapse_whitespace(effect_text));
        if (*cause == *effect) throw SelfLoop(*cause);
        DirectedEdge e{*cause, *effect};
        nodes.insert(e.cause);
        nodes.insert(e.effect);
        ++counts[e];
        edge_set.insert(std::move(e));
    }
    return CausalGraph::from_parts(std::move(vocabulary), std::move(nodes), std::move(edge_set),
                                   std::move(counts));
}

void require_same_vocabulary(const CausalGraph& a, const CausalGraph& b) {
    if (a.vocabulary_ptr() == b.vocabulary_ptr()) return;
    if (!(a.vocabulary() == b.vocabulary())) throw VocabularyMismatch();
}

EdgeSet reversed_overlap(const CausalGraph& ref, const CausalGraph& pred) {
    require_same_vocabulary(ref, pred);
    EdgeSet out;
    for (const auto& e : ref.edges()) {
        if (pred.has_edge(e.reversed())) out.insert(e);
    }
    return out;
}

EdgeSet reversed_mismatches(const CausalGraph& ref, const CausalGraph& pred) {
    require_same_vocabulary(ref, pred);
    EdgeSet out;
    for (const auto& e : ref.edges()) {
        const auto rev = e.reversed();
        if (!pred.has_edge(e) && pred.has_edge(rev) && !ref.has_edge(rev)) out.insert(e);
    }
    return out;
}

}  // namespace impactgraph

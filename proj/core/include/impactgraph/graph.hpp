#pragma once

// Vocabulary and directed-graph value types shared by the whole harness.
//
// Variables are identified by their normalized key (see normalize_name).
// The vocabulary also keeps the display label as first written, which is
// what prompts and serialized files show.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace impactgraph {

class CanonicalVocabulary;
using VocabularyPtr = std::shared_ptr<const CanonicalVocabulary>;

/// Builds a vocabulary. Throws EmptyVocabulary or DuplicateVariable.
VocabularyPtr make_vocabulary(std::string event_type, std::span<const std::string> names);
VocabularyPtr make_vocabulary(std::string event_type, std::initializer_list<std::string> names);

class CanonicalVocabulary {
public:
    const std::string& event_type() const noexcept { return event_type_; }
    /// Normalized keys in vocabulary order.
    const std::vector<std::string>& variables() const noexcept { return keys_; }
    /// Display labels (whitespace-collapsed, original case) in vocabulary order.
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return keys_.size(); }

    /// Position of a normalized key.
    std::optional<std::size_t> index_of(std::string_view key) const;
    bool contains(std::string_view key) const { return index_of(key).has_value(); }
    /// Normalizes an arbitrary mention and returns its key when it names a
    /// variable. Exact match only.
    std::optional<std::string> lookup(std::string_view mention) const;
    const std::string& label_of(std::string_view key) const;

    friend bool operator==(const CanonicalVocabulary& a, const CanonicalVocabulary& b) {
        return a.event_type_ == b.event_type_ && a.keys_ == b.keys_;
    }

private:
    friend VocabularyPtr make_vocabulary(std::string, std::span<const std::string>);
    CanonicalVocabulary() = default;

    std::string event_type_;
    std::vector<std::string> keys_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct DirectedEdge {
    std::string cause;
    std::string effect;

    DirectedEdge reversed() const { return {effect, cause}; }
    auto operator<=>(const DirectedEdge&) const = default;
};

using NodeSet = std::set<std::string>;
using EdgeSet = std::set<DirectedEdge>;
using EdgeCounts = std::map<DirectedEdge, std::size_t>;

/// Immutable directed graph over a subset of a vocabulary.
///
/// Invariants: nodes are vocabulary keys, edge endpoints are nodes, no
/// self-loops. (u,v) and (v,u) may both be present. edge_counts, when set,
/// holds a positive count for exactly the edges in the graph.
class CausalGraph {
public:
    /// Validating constructor used when nodes are given explicitly (isolated
    /// nodes allowed). Names must already be vocabulary keys.
    static CausalGraph from_parts(VocabularyPtr vocabulary, NodeSet nodes, EdgeSet edges,
                                  std::optional<EdgeCounts> counts = std::nullopt);

    /// Graph with no nodes and no edges.
    static CausalGraph empty(VocabularyPtr vocabulary);

    const CanonicalVocabulary& vocabulary() const noexcept { return *vocabulary_; }
    const VocabularyPtr& vocabulary_ptr() const noexcept { return vocabulary_; }
    const NodeSet& nodes() const noexcept { return nodes_; }
    const EdgeSet& edges() const noexcept { return edges_; }
    const std::optional<EdgeCounts>& edge_counts() const noexcept { return counts_; }

    bool has_edge(const DirectedEdge& edge) const { return edges_.contains(edge); }
    /// Edges as (cause, effect) key pairs in sorted order.
    std::vector<std::pair<std::string, std::string>> edge_list() const;

    /// Structural equality: vocabulary value, nodes, edges and counts.
    friend bool operator==(const CausalGraph& a, const CausalGraph& b);

private:
    CausalGraph() = default;

    VocabularyPtr vocabulary_;
    NodeSet nodes_;
    EdgeSet edges_;
    std::optional<EdgeCounts> counts_;
};

/// Graph whose nodes are exactly the edge endpoints. Mentions are normalized
/// against the vocabulary; duplicates are merged and counted.
/// Throws UnknownVariable or SelfLoop.
CausalGraph build_graph(VocabularyPtr vocabulary,
                        std::span<const std::pair<std::string, std::string>> edges);

/// Throws VocabularyMismatch unless both graphs share one vocabulary value.
void require_same_vocabulary(const CausalGraph& a, const CausalGraph& b);

/// {(u,v) in E_ref : (v,u) in E_pred}.
EdgeSet reversed_overlap(const CausalGraph& ref, const CausalGraph& pred);

/// Reference edges that are missing from the prediction while their reversal
/// is predicted and absent from the reference. Each such pair is one
/// "reverse" edit. Equal to reversed_overlap whenever neither graph holds a
/// 2-cycle.
EdgeSet reversed_mismatches(const CausalGraph& ref, const CausalGraph& pred);

}  // namespace impactgraph

#pragma once

#include "impactgraph/graph.hpp"

#include <filesystem>

#include <nlohmann/json.hpp>

namespace impactgraph {

// Vocabulary file: {"event_type": "...", "variables": ["...", ...]}
nlohmann::json vocabulary_to_json(const CanonicalVocabulary& vocab);
VocabularyPtr vocabulary_from_json(const nlohmann::json& j);
VocabularyPtr load_vocabulary(const std::filesystem::path& path);

// Graph file: {"vocabulary": {...}, "nodes": [...], "edges": [[c, e], ...],
//              "edge_counts": [[c, e, n], ...]}   (edge_counts optional)
// Names are written as display labels and normalized again on load.
nlohmann::json graph_to_json(const CausalGraph& graph);
/// When `vocabulary` is given, the embedded vocabulary must match it and the
/// returned graph shares that pointer.
CausalGraph graph_from_json(const nlohmann::json& j, VocabularyPtr vocabulary = nullptr);

/// Pretty-printed with a trailing newline; used for every artifact.
std::string dump_json(const nlohmann::json& j);
nlohmann::json parse_json_file(const std::filesystem::path& path);

}  // namespace impactgraph

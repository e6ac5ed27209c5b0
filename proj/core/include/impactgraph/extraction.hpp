#pragma once

// Batched causal-pair extraction: render one prompt per batch, ask the model,
// parse "(Cause, Effect)" pairs out of the reply, and merge the batches into
// a single predicted graph.

#include "impactgraph/corpus.hpp"
#include "impactgraph/graph.hpp"
#include "impactgraph/model_client.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace impactgraph {

struct ParserOptions {
    /// Case-insensitive substrings that mark a reply with no pairs as a refusal.
    std::vector<std::string> refusal_phrases{"cannot", "insufficient evidence", "no causal", "unable to"};
};

struct RejectedMention {
    std::string cause_text;
    std::string effect_text;
    std::string reason;  // "unknown variable", "self-loop", "empty mention"

    bool operator==(const RejectedMention&) const = default;
};

struct ParsedResponse {
    std::vector<DirectedEdge> edges;  // in reply order, duplicates kept
    std::vector<RejectedMention> rejected;
    bool refused = false;
};

/// Exact template text; placeholders {EVENT}, {VARIABLES}, {POSTS}.
extern const std::string_view kPromptTemplate;

/// Throws EmptyBatch.
std::string render_prompt(std::string_view event, const CanonicalVocabulary& vocab, const PostBatch& batch);

/// Exact match after normalization, otherwise nullopt.
std::optional<std::string> normalize_variable(std::string_view mention, const CanonicalVocabulary& vocab);

ParsedResponse parse_causal_pairs(std::string_view response, const CanonicalVocabulary& vocab,
                                  const ParserOptions& options = {});

struct BatchExtraction {
    std::size_t batch_index = 0;
    std::vector<std::string> post_ids;
    std::string prompt_hash;
    std::string raw_response;
    std::vector<DirectedEdge> accepted_edges;
    std::vector<RejectedMention> rejected_mentions;
    bool refused = false;
};

struct Refusal {
    bool operator==(const Refusal&) const = default;
};

using Prediction = std::variant<CausalGraph, Refusal>;

inline bool is_refusal(const Prediction& p) { return std::holds_alternative<Refusal>(p); }

struct RunConfig {
    std::string event_name;
    std::string model_id;
    std::size_t batch_size = 20;
    SamplingParams sampling;
    /// When set, posts are shuffled with this seed before batching.
    std::optional<std::uint64_t> shuffle_seed;
    std::size_t parallelism = 1;
    ParserOptions parser;
};

struct ExtractionRun {
    std::string event_name;
    std::string model_id;
    std::vector<BatchExtraction> batches;
    Prediction result;
};

/// Refusal when at least one batch refused and no batch accepted an edge;
/// otherwise the graph over all accepted edges with occurrence counts.
/// Independent of the order of `batches`.
Prediction aggregate_batches(VocabularyPtr vocabulary, std::span<const BatchExtraction> batches);

/// Runs every batch (concurrently up to config.parallelism) and aggregates.
/// A failing batch aborts the run with ClientError naming the lowest failing
/// batch index.
ExtractionRun extract_run(const RunConfig& config, ModelClient& client, const PostCorpus& corpus,
                          VocabularyPtr vocabulary);

/// Audit artifact: config, per-batch raw replies and parse results, result.
nlohmann::json run_to_json(const ExtractionRun& run, const RunConfig& config);
nlohmann::json prediction_to_json(const Prediction& prediction);

/// Accepts a run artifact (reads "result") or a bare graph file.
Prediction prediction_from_json(const nlohmann::json& j, VocabularyPtr vocabulary = nullptr);

/// Re-parses the raw replies stored in a run artifact and aggregates again.
ExtractionRun replay_run(const nlohmann::json& artifact, VocabularyPtr vocabulary,
                         const ParserOptions& options = {});

}  // namespace impactgraph

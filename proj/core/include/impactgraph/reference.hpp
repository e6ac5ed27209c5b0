#pragma once

// Match-and-record reference graphs: a generic impact-chain base graph is
// joined with a table of expert-report citations, and only edges with at
// least one citation survive.

#include "impactgraph/graph.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace impactgraph {

struct BaseChain {
    VocabularyPtr vocabulary;
    EdgeSet edges;
};

/// One citation backing one directed edge. cause/effect hold the text as
/// written in the table; they are resolved against the vocabulary on use.
struct EvidenceRecord {
    std::string cause;
    std::string effect;
    std::string quote;
    std::string source;
    std::string locator;

    bool operator==(const EvidenceRecord&) const = default;
};

struct ReferenceGraph {
    std::string event_name;
    CausalGraph graph;
    std::map<DirectedEdge, std::vector<EvidenceRecord>> evidence;
};

enum class ProblemKind { UnknownVariable, SelfLoop, EdgeNotInBase, EmptyQuote };

std::string_view to_string(ProblemKind kind);

struct TableProblem {
    std::size_t row;  // 0-based record index
    ProblemKind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<TableProblem> problems;
    bool compilable() const noexcept { return problems.empty(); }
};

/// Checks every record without throwing; the table compiles iff the report
/// is empty.
ValidationReport validate_table(const BaseChain& base, const std::vector<EvidenceRecord>& table);

/// Keeps base edges that have evidence. Nodes are the endpoints of kept
/// edges. Throws RecordNotInBase or InvalidRecord.
ReferenceGraph prune_by_evidence(const BaseChain& base, const std::vector<EvidenceRecord>& table,
                                 std::string event_name = {});

// Base chain file: {"event_type", "variables": [...], "edges": [[c, e], ...]}
BaseChain base_chain_from_json(const nlohmann::json& j);
BaseChain load_base_chain(const std::filesystem::path& path);

// Evidence table: UTF-8 TSV, header cause, effect, quote, source, locator.
std::vector<EvidenceRecord> parse_evidence_tsv(std::string_view text);
std::vector<EvidenceRecord> load_evidence_table(const std::filesystem::path& path);

// Reference file: {"event_name", "vocabulary": {...},
//   "edges": [{"cause", "effect", "evidence": [{"quote", "source", "locator"}]}]}
nlohmann::json reference_to_json(const ReferenceGraph& ref);
ReferenceGraph reference_from_json(const nlohmann::json& j);
ReferenceGraph load_reference(const std::filesystem::path& path);

}  // namespace impactgraph

#include "impactgraph/reference.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/graph_io.hpp"
#include "impactgraph/text.hpp"

#include <array>

namespace impactgraph {

using nlohmann::json;

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::UnknownVariable: return "UnknownVariable";
        case ProblemKind::SelfLoop: return "SelfLoop";
        case ProblemKind::EdgeNotInBase: return "EdgeNotInBase";
        case ProblemKind::EmptyQuote: return "EmptyQuote";
    }
    return "?";
}

ValidationReport validate_table(const BaseChain& base, const std::vector<EvidenceRecord>& table) {
    ValidationReport report;
    const auto& vocab = *base.vocabulary;
    for (std::size_t row = 0; row < table.size(); ++row) {
        const auto& rec = table[row];
        if (collapse_whitespace(rec.quote).empty()) {
            report.problems.push_back({row, ProblemKind::EmptyQuote, "quote is empty"});
        }
        const auto cause = vocab.lookup(rec.cause);
        const auto effect = vocab.lookup(rec.effect);
        if (!cause) {
            report.problems.push_back(
                {row, ProblemKind::UnknownVariable, "unknown cause '" + collapse_whitespace(rec.cause) + "'"});
        }
        if (!effect) {
            report.problems.push_back(
                {row, ProblemKind::UnknownVariable, "unknown effect '" + collapse_whitespace(rec.effect) + "'"});
        }
        if (!cause || !effect) continue;
        if (*cause == *effect) {
            report.problems.push_back({row, ProblemKind::SelfLoop, "self-loop on '" + *cause + "'"});
        } else if (!base.edges.contains(DirectedEdge{*cause, *effect})) {
            report.problems.push_back(
                {row, ProblemKind::EdgeNotInBase, "(" + *cause + ", " + *effect + ") is not a base-chain edge"});
        }
    }
    return report;
}

ReferenceGraph prune_by_evidence(const BaseChain& base, const std::vector<EvidenceRecord>& table,
                                 std::string event_name) {
    const auto& vocab = *base.vocabulary;
    std::map<DirectedEdge, std::vector<EvidenceRecord>> evidence;
    for (std::size_t row = 0; row < table.size(); ++row) {
        const auto& rec = table[row];
        const auto cause = vocab.lookup(rec.cause);
        if (!cause) throw InvalidRecord(row, "unknown variable '" + collapse_whitespace(rec.cause) + "'");
        const auto effect = vocab.lookup(rec.effect);
        if (!effect) throw InvalidRecord(row, "unknown variable '" + collapse_whitespace(rec.effect) + "'");
        if (*cause == *effect) throw InvalidRecord(row, "self-loop on '" + *cause + "'");
        if (collapse_whitespace(rec.quote).empty()) throw InvalidRecord(row, "empty quote");
        DirectedEdge edge{*cause, *effect};
        if (!base.edges.contains(edge)) throw RecordNotInBase(edge.cause, edge.effect);

        EvidenceRecord canonical = rec;
        canonical.cause = vocab.label_of(edge.cause);
        canonical.effect = vocab.label_of(edge.effect);
        evidence[edge].push_back(std::move(canonical));
    }

    NodeSet nodes;
    EdgeSet edges;
    for (const auto& [edge, records] : evidence) {
        nodes.insert(edge.cause);
        nodes.insert(edge.effect);
        edges.insert(edge);
    }
    if (event_name.empty()) event_name = vocab.event_type();
    return ReferenceGraph{std::move(event_name),
                          CausalGraph::from_parts(base.vocabulary, std::move(nodes), std::move(edges)),
                          std::move(evidence)};
}

BaseChain base_chain_from_json(const json& j) {
    BaseChain base;
    base.vocabulary = vocabulary_from_json(j);
    const auto& vocab = *base.vocabulary;
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw InvalidGraph("base chain edges must be [cause, effect] string pairs");
        const auto cause = vocab.lookup(e[0].get<std::string>());
        if (!cause) throw UnknownVariable(e[0].get<std::string>());
        const auto effect = vocab.lookup(e[1].get<std::string>());
        if (!effect) throw UnknownVariable(e[1].get<std::string>());
        if (*cause == *effect) throw SelfLoop(*cause);
        base.edges.insert(DirectedEdge{*cause, *effect});
    }
    return base;
}

BaseChain load_base_chain(const std::filesystem::path& path) {
    return base_chain_from_json(parse_json_file(path));
}

std::vector<EvidenceRecord> parse_evidence_tsv(std::string_view text) {
    static constexpr std::array<std::string_view, 5> kColumns{"cause", "effect", "quote", "source", "locator"};

    auto lines = split(text, '\n');
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    }
    if (lines.empty() || lines.front().empty()) throw MissingColumn("cause");

    auto header = split(lines.front(), '\t');
    std::array<std::size_t, kColumns.size()> pos{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        std::size_t found = header.size();
        for (std::size_t h = 0; h < header.size(); ++h) {
            if (normalize_name(header[h]) == kColumns[c]) found = h;
        }
        if (found == header.size()) throw MissingColumn(std::string(kColumns[c]));
        pos[c] = found;
    }

    std::vector<EvidenceRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split(lines[i], '\t');
        if (fields.size() != header.size()) {
            throw ParseError(i + 1, "expected " + std::to_string(header.size()) + " fields, found " +
                                        std::to_string(fields.size()));
        }
        records.push_back(EvidenceRecord{fields[pos[0]], fields[pos[1]], fields[pos[2]], fields[pos[3]],
                                         fields[pos[4]]});
    }
    return records;
}

std::vector<EvidenceRecord> load_evidence_table(const std::filesystem::path& path) {
    return parse_evidence_tsv(read_file(path));
}

json reference_to_json(const ReferenceGraph& ref) {
    const auto& vocab = ref.graph.vocabulary();
    json edges = json::array();
    for (const auto& edge : ref.graph.edges()) {
        json evidence = json::array();
        if (auto it = ref.evidence.find(edge); it != ref.evidence.end()) {
            for (const auto& rec : it->second) {
                evidence.push_back({{"quote", rec.quote}, {"source", rec.source}, {"locator", rec.locator}});
            }
        }
        edges.push_back({{"cause", vocab.label_of(edge.cause)},
                         {"effect", vocab.label_of(edge.effect)},
                         {"evidence", evidence}});
    }
    return json{{"event_name", ref.event_name}, {"vocabulary", vocabulary_to_json(vocab)}, {"edges", edges}};
}

ReferenceGraph reference_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vocabulary")) throw InvalidGraph("reference JSON needs a 'vocabulary'");
    BaseChain base;
    base.vocabulary = vocabulary_from_json(j["vocabulary"]);
    std::vector<EvidenceRecord> table;
    for (const auto& e : j.value("edges", json::array())) {
        const auto cause = e.at("cause").get<std::string>();
        const auto effect = e.at("effect").get<std::string>();
        const auto& evidence = e.value("evidence", json::array());
        if (evidence.empty()) throw InvalidGraph("reference edge (" + cause + ", " + effect + ") has no evidence");
        for (const auto& rec : evidence) {
            table.push_back(EvidenceRecord{cause, effect, rec.at("quote").get<std::string>(),
                                           rec.value("source", std::string{}),
                                           rec.value("locator", std::string{})});
        }
        const auto ck = base.vocabulary->lookup(cause);
        const auto ek = base.vocabulary->lookup(effect);
        if (!ck) throw UnknownVariable(cause);
        if (!ek) throw UnknownVariable(effect);
        if (*ck == *ek) throw SelfLoop(*ck);
        base.edges.insert(DirectedEdge{*ck, *ek});
    }
    return prune_by_evidence(base, table, j.value("event_name", std::string{}));
}

ReferenceGraph load_reference(const std::filesystem::path& path) {
    return reference_from_json(parse_json_file(path));
}

}  // namespace impactgraph

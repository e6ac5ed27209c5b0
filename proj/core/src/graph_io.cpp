#include "impactgraph/graph_io.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/text.hpp"

namespace impactgraph {

using nlohmann::json;

namespace {

std::string key_of(const CanonicalVocabulary& vocab, const json& name) {
    if (!name.is_string()) throw InvalidGraph("variable names must be strings");
    auto key = vocab.lookup(name.get<std::string>());
    if (!key) throw UnknownVariable(collapse_whitespace(name.get<std::string>()));
    return *key;
}

}  // namespace

json vocabulary_to_json(const CanonicalVocabulary& vocab) {
    return json{{"event_type", vocab.event_type()}, {"variables", vocab.labels()}};
}

VocabularyPtr vocabulary_from_json(const json& j) {
    if (!j.is_object() || !j.contains("variables") || !j["variables"].is_array())
        throw InvalidGraph("vocabulary must be an object with a 'variables' array");
    std::vector<std::string> names;
    for (const auto& v : j["variables"]) {
        if (!v.is_string()) throw InvalidGraph("vocabulary variables must be strings");
        names.push_back(v.get<std::string>());
    }
    return make_vocabulary(j.value("event_type", std::string{}), names);
}

VocabularyPtr load_vocabulary(const std::filesystem::path& path) {
    return vocabulary_from_json(parse_json_file(path));
}

json graph_to_json(const CausalGraph& graph) {
    const auto& vocab = graph.vocabulary();
    json nodes = json::array();
    // Vocabulary order reads better than key order.
    for (const auto& key : vocab.variables()) {
        if (graph.nodes().contains(key)) nodes.push_back(vocab.label_of(key));
    }
    json edges = json::array();
    for (const auto& e : graph.edges()) {
        edges.push_back(json::array({vocab.label_of(e.cause), vocab.label_of(e.effect)}));
    }
    json out{{"vocabulary", vocabulary_to_json(vocab)}, {"nodes", nodes}, {"edges", edges}};
    if (graph.edge_counts()) {
        json counts = json::array();
        for (const auto& [e, n] : *graph.edge_counts()) {
            counts.push_back(json::array({vocab.label_of(e.cause), vocab.label_of(e.effect), n}));
        }
        out["edge_counts"] = counts;
    }
    return out;
}

CausalGraph graph_from_json(const json& j, VocabularyPtr vocabulary) {
    if (!j.is_object() || !j.contains("vocabulary")) throw InvalidGraph("graph JSON needs a 'vocabulary'");
    auto embedded = vocabulary_from_json(j["vocabulary"]);
    if (vocabulary) {
        if (!(*vocabulary == *embedded)) throw VocabularyMismatch("graph file vocabulary differs");
    } else {
        vocabulary = std::move(embedded);
    }
    const auto& vocab = *vocabulary;

    NodeSet nodes;
    for (const auto& n : j.value("nodes", json::array())) nodes.insert(key_of(vocab, n));
    EdgeSet edges;
    for (const auto& e : j.value("edges", json::array())) {
        if (!e.is_array() || e.size() != 2) throw InvalidGraph("edges must be [cause, effect] pairs");
        edges.insert(DirectedEdge{key_of(vocab, e[0]), key_of(vocab, e[1])});
    }
    std::optional<EdgeCounts> counts;
    if (j.contains("edge_counts")) {
        counts.emplace();
        for (const auto& c : j["edge_counts"]) {
            if (!c.is_array() || c.size() != 3 || !c[2].is_number_unsigned())
                throw InvalidGraph("edge_counts entries must be [cause, effect, count]");
            (*counts)[DirectedEdge{key_of(vocab, c[0]), key_of(vocab, c[1])}] = c[2].get<std::size_t>();
        }
    }
    return CausalGraph::from_parts(std::move(vocabulary), std::move(nodes), std::move(edges),
                                   std::move(counts));
}

std::string dump_json(const json& j) {
    return j.dump(2) + "\n";
}

json parse_json_file(const std::filesystem::path& path) {
    const auto text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

}  // namespace impactgraph

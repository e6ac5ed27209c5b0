#include "impactgraph/extraction.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/graph_io.hpp"
#include "impactgraph/text.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace impactgraph {

using nlohmann::json;

const std::string_view kPromptTemplate =
    "Task: Identify cause and effect relations from social media posts related to {EVENT}.\n"
    "Instructions:\n"
    "- If available, conduct a native social media search for posts related to {EVENT}; otherwise, rely "
    "solely on the provided posts.\n"
    "- Restrict all causes and effects to these variables: {VARIABLES}.\n"
    "- Extract causal relations that are explicitly stated or reasonably implied in the posts.\n"
    "- Represent each causal relation as a directed edge in the format of (Cause, Effect).\n"
    "Input: {POSTS}\n"
    "Output: A list of causal relations.";

std::string render_prompt(std::string_view event, const CanonicalVocabulary& vocab, const PostBatch& batch) {
    if (batch.posts.empty()) throw EmptyBatch();

    std::string variables;
    for (const auto& label : vocab.labels()) {
        if (!variables.empty()) variables += ", ";
        variables += label;
    }
    std::string posts;
    for (std::size_t i = 0; i < batch.posts.size(); ++i) {
        if (i > 0) posts += '\n';
        posts += std::to_string(i + 1) + ". " + collapse_whitespace(batch.posts[i].text);
    }

    // Single pass so placeholder-like text inside posts is left alone.
    const std::pair<std::string_view, std::string_view> slots[] = {
        {"{EVENT}", event}, {"{VARIABLES}", variables}, {"{POSTS}", posts}};
    std::string out;
    std::size_t i = 0;
    while (i < kPromptTemplate.size()) {
        bool replaced = false;
        for (const auto& [name, value] : slots) {
            if (kPromptTemplate.compare(i, name.size(), name) == 0) {
                out += value;
                i += name.size();
                replaced = true;
                break;
            }
        }
        if (!replaced) out += kPromptTemplate[i++];
    }
    return out;
}

std::optional<std::string> normalize_variable(std::string_view mention, const CanonicalVocabulary& vocab) {
    return vocab.lookup(mention);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// Strips whitespace, ASCII and typographic quotes, and markdown emphasis.
std::string_view strip_mention(std::string_view s) {
    static constexpr std::string_view kWrappers[] = {"\"", "'", "`", "*", "_", "\xE2\x80\x9C", "\xE2\x80\x9D",
                                                     "\xE2\x80\x98", "\xE2\x80\x99"};
    bool changed = true;
    while (changed) {
        changed = false;
        s = trim(s);
        for (auto w : kWrappers) {
            if (s.size() >= w.size() && s.substr(0, w.size()) == w) {
                s.remove_prefix(w.size());
                changed = true;
            }
            if (s.size() >= w.size() && s.substr(s.size() - w.size()) == w) {
                s.remove_suffix(w.size());
                changed = true;
            }
        }
    }
    return s;
}

bool contains_refusal(std::string_view response, const ParserOptions& options) {
    const auto lower = to_lower_ascii(response);
    return std::any_of(options.refusal_phrases.begin(), options.refusal_phrases.end(),
                       [&](const std::string& phrase) {
                           return !phrase.empty() && lower.find(to_lower_ascii(phrase)) != std::string::npos;
                       });
}

void classify(std::string_view cause_text, std::string_view effect_text, const CanonicalVocabulary& vocab,
              ParsedResponse& out) {
    const auto cause = strip_mention(cause_text);
    const auto effect = strip_mention(effect_text);
    auto reject = [&](std::string reason) {
        out.rejected.push_back({std::string(cause), std::string(effect), std::move(reason)});
    };
    if (cause.empty() || effect.empty()) return reject("empty mention");
    const auto ck = normalize_variable(cause, vocab);
    const auto ek = normalize_variable(effect, vocab);
    if (!ck || !ek) return reject("unknown variable");
    if (*ck == *ek) return reject("self-loop");
    out.edges.push_back(DirectedEdge{*ck, *ek});
}

}  // namespace

ParsedResponse parse_causal_pairs(std::string_view response, const CanonicalVocabulary& vocab,
                                  const ParserOptions& options) {
    ParsedResponse out;
    std::size_t mentions = 0;
    std::size_t pos = 0;
    while ((pos = response.find('(', pos)) != std::string_view::npos) {
        const auto close = response.find(')', pos + 1);
        if (close == std::string_view::npos) break;
        const auto inner_open = response.find('(', pos + 1);
        if (inner_open != std::string_view::npos && inner_open < close) {
            pos = inner_open;
            continue;
        }
        const auto inner = response.substr(pos + 1, close - pos - 1);
        pos = close + 1;

        std::vector<std::size_t> commas;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == ',') commas.push_back(i);
        }
        if (commas.empty()) continue;
        if (commas.size() == 1) {
            ++mentions;
            classify(inner.substr(0, commas[0]), inner.substr(commas[0] + 1), vocab, out);
            continue;
        }
        // Several commas: a pair only if exactly one split names two variables.
        std::optional<std::size_t> split_at;
        std::size_t hits = 0;
        for (auto c : commas) {
            if (normalize_variable(strip_mention(inner.substr(0, c)), vocab) &&
                normalize_variable(strip_mention(inner.substr(c + 1)), vocab)) {
                split_at = c;
                ++hits;
            }
        }
        if (hits == 1) {
            ++mentions;
            classify(inner.substr(0, *split_at), inner.substr(*split_at + 1), vocab, out);
        }
    }
    out.refused = mentions == 0 && contains_refusal(response, options);
    return out;
}

Prediction aggregate_batches(VocabularyPtr vocabulary, std::span<const BatchExtraction> batches) {
    bool any_refused = false;
    NodeSet nodes;
    EdgeSet edges;
    EdgeCounts counts;
    for (const auto& batch : batches) {
        any_refused = any_refused || batch.refused;
        for (const auto& e : batch.accepted_edges) {
            nodes.insert(e.cause);
            nodes.insert(e.effect);
            edges.insert(e);
            ++counts[e];
        }
    }
    if (edges.empty() && any_refused) return Refusal{};
    return CausalGraph::from_parts(std::move(vocabulary), std::move(nodes), std::move(edges), std::move(counts));
}

namespace {

BatchExtraction to_extraction(const PostBatch& batch, std::string prompt, std::string response,
                              const CanonicalVocabulary& vocab, const ParserOptions& options) {
    BatchExtraction out;
    out.batch_index = batch.index;
    for (const auto& post : batch.posts) out.post_ids.push_back(post.post_id);
    out.prompt_hash = prompt_hash(prompt);
    auto parsed = parse_causal_pairs(response, vocab, options);
    out.raw_response = std::move(response);
    out.accepted_edges = std::move(parsed.edges);
    out.rejected_mentions = std::move(parsed.rejected);
    out.refused = parsed.refused;
    return out;
}

}  // namespace

ExtractionRun extract_run(const RunConfig& config, ModelClient& client, const PostCorpus& corpus,
                          VocabularyPtr vocabulary) {
    const auto event = config.event_name.empty() ? corpus.event_name : config.event_name;
    const auto batches = config.shuffle_seed ? batch_posts(shuffle_posts(corpus, *config.shuffle_seed), config.batch_size)
                                             : batch_posts(corpus, config.batch_size);

    std::vector<std::optional<BatchExtraction>> results(batches.size());
    std::vector<std::optional<std::string>> failures(batches.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        while (!stop.load()) {
            const auto i = next.fetch_add(1);
            if (i >= batches.size()) return;
            auto prompt = render_prompt(event, *vocabulary, batches[i]);
            PromptRequest request{config.model_id, prompt, config.sampling, batches[i].index};
            try {
                auto response = client.complete(request);
                results[i] = to_extraction(batches[i], std::move(prompt), std::move(response), *vocabulary,
                                           config.parser);
            } catch (const std::exception& e) {
                failures[i] = e.what();
                stop.store(true);
            }
        }
    };

    const auto workers = std::min(std::max<std::size_t>(config.parallelism, 1), std::max<std::size_t>(batches.size(), 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (std::size_t i = 0; i < batches.size(); ++i) {
        if (failures[i]) throw ClientError(batches[i].index, *failures[i]);
    }

    ExtractionRun run{event, config.model_id, {}, Refusal{}};
    run.batches.reserve(batches.size());
    for (auto& r : results) {
        // A batch can only be missing if an earlier failure stopped dispatch.
        if (!r) throw ClientError(run.batches.size(), "batch was not dispatched");
        run.batches.push_back(std::move(*r));
    }
    run.result = aggregate_batches(std::move(vocabulary), run.batches);
    return run;
}

namespace {

json edge_pair(const CanonicalVocabulary& vocab, const DirectedEdge& e) {
    return json::array({vocab.label_of(e.cause), vocab.label_of(e.effect)});
}

}  // namespace

json prediction_to_json(const Prediction& prediction) {
    if (is_refusal(prediction)) return json{{"refused", true}};
    return json{{"refused", false}, {"graph", graph_to_json(std::get<CausalGraph>(prediction))}};
}

json run_to_json(const ExtractionRun& run, const RunConfig& config) {
    json cfg{{"batch_size", config.batch_size},
             {"parallelism", config.parallelism},
             {"refusal_phrases", config.parser.refusal_phrases},
             {"sampling",
              {{"temperature", config.sampling.temperature},
               {"max_output_tokens", config.sampling.max_output_tokens},
               {"seed", config.sampling.seed ? json(*config.sampling.seed) : json(nullptr)}}},
             {"shuffle_seed", config.shuffle_seed ? json(*config.shuffle_seed) : json(nullptr)}};

    const CanonicalVocabulary* vocab = nullptr;
    if (!is_refusal(run.result)) vocab = &std::get<CausalGraph>(run.result).vocabulary();

    json batches = json::array();
    for (const auto& b : run.batches) {
        json accepted = json::array();
        for (const auto& e : b.accepted_edges) {
            accepted.push_back(vocab ? edge_pair(*vocab, e) : json::array({e.cause, e.effect}));
        }
        json rejected = json::array();
        for (const auto& r : b.rejected_mentions) {
            rejected.push_back({{"cause", r.cause_text}, {"effect", r.effect_text}, {"reason", r.reason}});
        }
        batches.push_back({{"batch_index", b.batch_index},
                           {"post_ids", b.post_ids},
                           {"prompt_hash", b.prompt_hash},
                           {"raw_response", b.raw_response},
                           {"accepted", accepted},
                           {"rejected", rejected},
                           {"refused", b.refused}});
    }
    return json{{"kind", "extraction_run"},
                {"event_name", run.event_name},
                {"model_id", run.model_id},
                {"config", cfg},
                {"batches", batches},
                {"result", prediction_to_json(run.result)}};
}

Prediction prediction_from_json(const json& j, VocabularyPtr vocabulary) {
    if (j.contains("result")) return prediction_from_json(j["result"], std::move(vocabulary));
    if (j.contains("refused")) {
        if (j["refused"].get<bool>()) return Refusal{};
        return graph_from_json(j.at("graph"), std::move(vocabulary));
    }
    return graph_from_json(j, std::move(vocabulary));
}

ExtractionRun replay_run(const json& artifact, VocabularyPtr vocabulary, const ParserOptions& options) {
    ExtractionRun run{artifact.value("event_name", std::string{}), artifact.value("model_id", std::string{}), {},
                      Refusal{}};
    for (const auto& b : artifact.at("batches")) {
        BatchExtraction batch;
        batch.batch_index = b.at("batch_index").get<std::size_t>();
        batch.post_ids = b.value("post_ids", std::vector<std::string>{});
        batch.prompt_hash = b.value("prompt_hash", std::string{});
        batch.raw_response = b.at("raw_response").get<std::string>();
        auto parsed = parse_causal_pairs(batch.raw_response, *vocabulary, options);
        batch.accepted_edges = std::move(parsed.edges);
        batch.rejected_mentions = std::move(parsed.rejected);
        batch.refused = parsed.refused;
        run.batches.push_back(std::move(batch));
    }
    run.result = aggregate_batches(std::move(vocabulary), run.batches);
    return run;
}

}  // namespace impactgraph

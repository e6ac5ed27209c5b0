#include "impactgraph/experiment.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/graph_io.hpp"
#include "impactgraph/reference.hpp"
#include "impactgraph/report.hpp"
#include "impactgraph/text.hpp"

#include <cstdio>
#include <cstdlib>
#include <future>
#include <set>

namespace impactgraph {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Main: return "main";
        case ExperimentMode::Ablation: return "ablation";
        case ExperimentMode::Baseline: return "baseline";
    }
    return "?";
}

namespace {

fs::path resolve(const fs::path& base_dir, const std::string& p) {
    if (p.empty()) return {};
    fs::path path(p);
    if (path.is_relative()) path = base_dir / path;
    return fs::absolute(path).lexically_normal();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    try {
        return j[key].get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::string file_digest(const fs::path& p) {
    if (p.empty()) return {};
    return to_hex64(fnv1a64(read_file(p)));
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    static const std::set<std::string> kKnown{
        "label",           "event_name",  "vocab_file",      "reference_file", "corpus_file",
        "corpus_format",   "model",       "mode",            "ablation_label", "batch_size",
        "runs",            "base_seed",   "shuffle_batches", "sampling",       "batch_parallelism",
        "parallel_runs",   "baseline",    "refusal_phrases", "std_convention", "decimals"};
    for (const auto& [key, _] : j.items()) {
        if (!kKnown.contains(key)) throw ConfigError("unknown config field '" + key + "'");
    }

    ExperimentConfig c;
    c.event_name = get_or<std::string>(j, "event_name", "");
    c.label = get_or<std::string>(j, "label", "");
    c.vocab_file = resolve(base_dir, get_or<std::string>(j, "vocab_file", ""));
    c.reference_file = resolve(base_dir, get_or<std::string>(j, "reference_file", ""));
    c.corpus_file = resolve(base_dir, get_or<std::string>(j, "corpus_file", ""));
    if (j.contains("corpus_format")) {
        const auto f = get_or<std::string>(j, "corpus_format", "");
        if (f == "tsv") c.corpus_format = CorpusFormat::Tsv;
        else if (f == "jsonl") c.corpus_format = CorpusFormat::Jsonl;
        else throw ConfigError("corpus_format must be 'tsv' or 'jsonl'");
    }

    const auto mode = get_or<std::string>(j, "mode", "main");
    if (mode == "main") c.mode = ExperimentMode::Main;
    else if (mode == "ablation") c.mode = ExperimentMode::Ablation;
    else if (mode == "baseline") c.mode = ExperimentMode::Baseline;
    else throw ConfigError("mode must be main, ablation or baseline");

    const auto label = parse_label(get_or<std::string>(j, "ablation_label", "non_informative"));
    if (!label) throw ConfigError("unknown ablation_label");
    c.ablation_label = *label;

    if (j.contains("model")) {
        const auto& m = j["model"];
        c.model.client = get_or<std::string>(m, "client", "mock");
        c.model.endpoint = get_or<std::string>(m, "endpoint", "");
        c.model.model_id = get_or<std::string>(m, "model_id", "");
        c.model.auth_env = get_or<std::string>(m, "auth_env", "");
        c.model.timeout_seconds = get_or<int>(m, "timeout_seconds", 120);
        if (m.contains("script")) c.model.mock_script = m["script"];
        if (m.contains("script_file")) {
            c.model.mock_script = parse_json_file(resolve(base_dir, get_or<std::string>(m, "script_file", "")));
        }
    }

    const auto batch_size = get_or<std::int64_t>(j, "batch_size", 20);
    const auto runs = get_or<std::int64_t>(j, "runs", 10);
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (runs < 1) throw ConfigError("runs must be >= 1");
    c.batch_size = static_cast<std::size_t>(batch_size);
    c.runs = static_cast<std::size_t>(runs);
    c.base_seed = get_or<std::uint64_t>(j, "base_seed", 0);
    c.shuffle_batches = get_or<bool>(j, "shuffle_batches", false);
    if (j.contains("sampling")) {
        c.temperature = get_or<double>(j["sampling"], "temperature", 0.0);
        c.max_output_tokens = get_or<int>(j["sampling"], "max_output_tokens", 1024);
    }
    c.batch_parallelism = static_cast<std::size_t>(std::max<std::int64_t>(get_or<std::int64_t>(j, "batch_parallelism", 1), 1));
    c.parallel_runs = get_or<bool>(j, "parallel_runs", false);
    if (j.contains("baseline")) {
        c.baseline_node_probability = get_or<double>(j["baseline"], "p_node", 0.5);
        c.baseline_edge_probability = get_or<double>(j["baseline"], "p_edge", 0.5);
    }
    if (j.contains("refusal_phrases")) c.parser.refusal_phrases = j["refusal_phrases"].get<std::vector<std::string>>();
    const auto conv = get_or<std::string>(j, "std_convention", "population");
    if (conv == "population") c.std_convention = StdConvention::Population;
    else if (conv == "sample") c.std_convention = StdConvention::Sample;
    else throw ConfigError("std_convention must be population or sample");
    c.decimals = get_or<int>(j, "decimals", 2);

    if (c.label.empty()) {
        c.label = c.mode == ExperimentMode::Baseline ? std::string("random") : c.model.model_id;
        if (c.mode == ExperimentMode::Ablation) c.label += "-ablation";
    }
    validate_config(c);
    return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    return experiment_config_from_json(parse_json_file(path), fs::absolute(path).parent_path());
}

void validate_config(const ExperimentConfig& c) {
    auto need_file = [](const fs::path& p, const char* what) {
        if (p.empty()) throw ConfigError(std::string(what) + " is required");
        if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
    };
    need_file(c.reference_file, "reference_file");
    if (!c.vocab_file.empty()) need_file(c.vocab_file, "vocab_file");
    if (c.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (c.runs < 1) throw ConfigError("runs must be >= 1");
    if (c.mode == ExperimentMode::Baseline) {
        auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!unit(c.baseline_node_probability) || !unit(c.baseline_edge_probability))
            throw ConfigError("baseline probabilities must lie in [0, 1]");
        return;
    }
    need_file(c.corpus_file, "corpus_file");
    if (c.model.client == "http") {
        if (c.model.endpoint.empty()) throw ConfigError("model.endpoint is required for the http client");
        if (c.model.model_id.empty()) throw ConfigError("model.model_id is required for the http client");
    } else if (c.model.client != "mock") {
        throw ConfigError("model.client must be 'mock' or 'http'");
    }
    if (c.temperature < 0.0) throw ConfigError("sampling.temperature must be >= 0");
    if (c.max_output_tokens < 1) throw ConfigError("sampling.max_output_tokens must be >= 1");
}

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t r) {
    return config.base_seed + r;
}

json resolved_config_json(const ExperimentConfig& c) {
    json seeds = json::array();
    for (std::size_t r = 0; r < c.runs; ++r) seeds.push_back(run_seed(c, r));
    json j{{"label", c.label},
           {"event_name", c.event_name},
           {"mode", to_string(c.mode)},
           {"reference_file", c.reference_file.string()},
           {"vocab_file", c.vocab_file.string()},
           {"runs", c.runs},
           {"base_seed", c.base_seed},
           {"run_seeds", seeds},
           {"std_convention", c.std_convention == StdConvention::Population ? "population" : "sample"},
           {"decimals", c.decimals}};
    json inputs{{"reference_file", file_digest(c.reference_file)}, {"vocab_file", file_digest(c.vocab_file)}};
    if (c.mode == ExperimentMode::Baseline) {
        j["baseline"] = {{"p_node", c.baseline_node_probability}, {"p_edge", c.baseline_edge_probability}};
    } else {
        j["corpus_file"] = c.corpus_file.string();
        j["corpus_format"] = c.corpus_format ? (*c.corpus_format == CorpusFormat::Tsv ? "tsv" : "jsonl") : "auto";
        inputs["corpus_file"] = file_digest(c.corpus_file);
        if (c.mode == ExperimentMode::Ablation) j["ablation_label"] = to_string(c.ablation_label);
        j["batch_size"] = c.batch_size;
        j["shuffle_batches"] = c.shuffle_batches;
        j["batch_parallelism"] = c.batch_parallelism;
        j["parallel_runs"] = c.parallel_runs;
        j["sampling"] = {{"temperature", c.temperature}, {"max_output_tokens", c.max_output_tokens}};
        j["refusal_phrases"] = c.parser.refusal_phrases;
        json model{{"client", c.model.client}, {"model_id", c.model.model_id}};
        if (c.model.client == "http") {
            model["endpoint"] = c.model.endpoint;
            model["auth_env"] = c.model.auth_env;
            model["timeout_seconds"] = c.model.timeout_seconds;
        } else {
            model["script"] = c.model.mock_script;
        }
        j["model"] = model;
        j["request_protocol"] = "fresh stateless request per batch";
    }
    j["inputs"] = inputs;
    return j;
}

std::string experiment_id(const ExperimentConfig& config) {
    return to_hex64(fnv1a64(resolved_config_json(config).dump()));
}

RunConfig run_config_for(const ExperimentConfig& c, std::size_t r) {
    RunConfig rc;
    rc.event_name = c.event_name;
    rc.model_id = c.model.model_id;
    rc.batch_size = c.batch_size;
    rc.sampling.temperature = c.temperature;
    rc.sampling.max_output_tokens = c.max_output_tokens;
    rc.sampling.seed = static_cast<std::int64_t>(run_seed(c, r));
    if (c.shuffle_batches) rc.shuffle_seed = run_seed(c, r);
    rc.parallelism = c.batch_parallelism;
    rc.parser = c.parser;
    return rc;
}

std::unique_ptr<ModelClient> make_client(const ExperimentConfig& config) {
    if (config.model.client == "mock") {
        return std::make_unique<MockClient>(MockClient::script_from_json(config.model.mock_script));
    }
    HttpClientOptions opts;
    opts.endpoint = config.model.endpoint;
    opts.timeout = std::chrono::seconds(config.model.timeout_seconds);
    if (!config.model.auth_env.empty()) {
        const char* token = std::getenv(config.model.auth_env.c_str());
        if (!token) throw ConfigError("environment variable '" + config.model.auth_env + "' is not set");
        opts.api_token = token;
    }
    return std::make_unique<HttpClient>(std::move(opts));
}

namespace {

struct RunOutput {
    json artifact;
    MetricReport report;
};

std::string run_file_name(std::size_t r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "run-%03zu.json", r);
    return buf;
}

}  // namespace

fs::path run_experiment(const ExperimentConfig& config, const fs::path& out_root, const ClientFactory& factory) {
    validate_config(config);
    const auto reference = load_reference(config.reference_file);
    VocabularyPtr vocab = reference.graph.vocabulary_ptr();
    if (!config.vocab_file.empty()) {
        const auto file_vocab = load_vocabulary(config.vocab_file);
        if (!(*file_vocab == *vocab)) throw VocabularyMismatch("vocab_file differs from the reference vocabulary");
    }

    const auto id = experiment_id(config);
    const auto final_dir = out_root / id;
    if (fs::exists(final_dir)) throw ConfigError("experiment directory already exists: " + final_dir.string());

    PostCorpus corpus;
    if (config.mode != ExperimentMode::Baseline) {
        const auto format = config.corpus_format.value_or(format_for(config.corpus_file));
        corpus = dedupe_posts(load_corpus(config.corpus_file, format));
        if (config.mode == ExperimentMode::Ablation) corpus = filter_by_label(corpus, config.ablation_label);
        if (!config.event_name.empty()) corpus.event_name = config.event_name;
    }

    auto one_run = [&](std::size_t r, ModelClient* client) -> RunOutput {
        if (config.mode == ExperimentMode::Baseline) {
            BaselineConfig bc{config.baseline_node_probability, config.baseline_edge_probability, run_seed(config, r)};
            auto graph = random_graph(vocab, bc);
            json artifact{{"kind", "baseline_graph"}, {"seed", bc.seed}, {"graph", graph_to_json(graph)}};
            return {std::move(artifact), evaluate(reference, Prediction{std::move(graph)})};
        }
        const auto rc = run_config_for(config, r);
        try {
            auto run = extract_run(rc, *client, corpus, vocab);
            auto artifact = run_to_json(run, rc);
            return {std::move(artifact), evaluate(reference, run.result)};
        } catch (const ClientError& e) {
            throw ClientError(e.batch_index(), "run " + std::to_string(r) + ": " + e.cause());
        }
    };

    std::vector<RunOutput> outputs(config.runs);
    const bool needs_client = config.mode != ExperimentMode::Baseline;
    if (config.parallel_runs && config.runs > 1) {
        std::vector<std::future<RunOutput>> futures;
        for (std::size_t r = 0; r < config.runs; ++r) {
            futures.push_back(std::async(std::launch::async, [&, r] {
                auto client = needs_client ? factory(config) : nullptr;
                return one_run(r, client.get());
            }));
        }
        for (std::size_t r = 0; r < config.runs; ++r) outputs[r] = futures[r].get();
    } else {
        auto client = needs_client ? factory(config) : nullptr;
        for (std::size_t r = 0; r < config.runs; ++r) outputs[r] = one_run(r, client.get());
    }

    auto staging = out_root / (id + ".partial");
    fs::remove_all(staging);
    fs::create_directories(staging);

    RunSeries series{config.label, {}};
    for (std::size_t r = 0; r < config.runs; ++r) {
        write_file(staging / "runs" / run_file_name(r), dump_json(outputs[r].artifact));
        write_file(staging / "reports" / run_file_name(r), dump_json(metric_report_to_json(outputs[r].report)));
        series.reports.push_back(outputs[r].report);
    }

    auto snapshot = resolved_config_json(config);
    snapshot["experiment_id"] = id;
    write_file(staging / "config.json", dump_json(snapshot));

    ReportOptions ro;
    ro.decimals = config.decimals;
    ro.convention = config.std_convention;
    const auto doc = render_report(std::span<const RunSeries>(&series, 1), {}, ro);
    write_file(staging / "aggregate.json", dump_json(doc.json));
    write_file(staging / "aggregate.md", doc.markdown);

    fs::rename(staging, final_dir);
    return final_dir;
}

}  // namespace impactgraph

#pragma once

// End-to-end experiment driver. One declarative JSON config describes the
// event, input files, model client, and run protocol; run_experiment writes
// every artifact under a directory named by the hash of the resolved config.

#include "impactgraph/baseline.hpp"
#include "impactgraph/corpus.hpp"
#include "impactgraph/extraction.hpp"
#include "impactgraph/metrics.hpp"
#include "impactgraph/model_client.hpp"
#include "impactgraph/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace impactgraph {

enum class ExperimentMode { Main, Ablation, Baseline };

std::string_view to_string(ExperimentMode mode);

struct ModelSettings {
    std::string client = "mock";  // "mock" | "http"
    std::string endpoint;
    std::string model_id;
    /// Name of the environment variable holding the API token. The token
    /// itself is read at client construction and never persisted.
    std::string auth_env;
    int timeout_seconds = 120;
    /// Scripted responses for the mock client (inline or loaded from
    /// "script_file").
    nlohmann::json mock_script = nlohmann::json::object();
};

struct ExperimentConfig {
    std::string label;
    std::string event_name;
    std::filesystem::path vocab_file;  // optional; defaults to the reference's vocabulary
    std::filesystem::path reference_file;
    std::filesystem::path corpus_file;  // unused in baseline mode
    std::optional<CorpusFormat> corpus_format;
    ModelSettings model;
    ExperimentMode mode = ExperimentMode::Main;
    PostLabel ablation_label = PostLabel::NonInformative;
    std::size_t batch_size = 20;
    std::size_t runs = 10;
    std::uint64_t base_seed = 0;
    bool shuffle_batches = false;
    double temperature = 0.0;
    int max_output_tokens = 1024;
    std::size_t batch_parallelism = 1;
    bool parallel_runs = false;
    double baseline_node_probability = 0.5;
    double baseline_edge_probability = 0.5;
    ParserOptions parser;
    StdConvention std_convention = StdConvention::Population;
    int decimals = 2;
};

/// Parses and validates; relative paths resolve against `base_dir`.
/// Throws ConfigError.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Checks invariants and that referenced files exist. Throws ConfigError.
void validate_config(const ExperimentConfig& config);

/// Seed used by run `r`: base_seed + r.
std::uint64_t run_seed(const ExperimentConfig& config, std::size_t r);

/// Everything that determines the outputs, including per-run seeds and a
/// content hash of each input file. Contains no secrets.
nlohmann::json resolved_config_json(const ExperimentConfig& config);
std::string experiment_id(const ExperimentConfig& config);

/// RunConfig for extraction run `r`.
RunConfig run_config_for(const ExperimentConfig& config, std::size_t r);

using ClientFactory = std::function<std::unique_ptr<ModelClient>(const ExperimentConfig&)>;

/// Mock or HTTP client as configured. Throws ConfigError when the token
/// variable is named but unset.
std::unique_ptr<ModelClient> make_client(const ExperimentConfig& config);

/// Runs the experiment into out_root/<experiment_id>/:
///   config.json, runs/run-NNN.json, reports/run-NNN.json,
///   aggregate.json, aggregate.md
/// Artifacts are staged in a sibling directory and renamed into place at the
/// end, so a directory only exists when every artifact was produced. Throws
/// ConfigError if the experiment directory already exists.
std::filesystem::path run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_root,
                                     const ClientFactory& factory = make_client);

}  // namespace impactgraph

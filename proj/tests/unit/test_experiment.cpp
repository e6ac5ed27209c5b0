#include "impactgraph/error.hpp"
#include "impactgraph/experiment.hpp"
#include "impactgraph/graph_io.hpp"
#include "impactgraph/report.hpp"
#include "impactgraph/text.hpp"

#include <cstdlib>
#include <filesystem>

#include "doctest.h"

using namespace impactgraph;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = IMPACTGRAPH_TEST_DATA;

json base_config() {
    return json::parse(read_file(kData / "experiment.json"));
}

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("impactgraph_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing resolves paths and defaults") {
    const auto c = experiment_config_from_json(base_config(), kData);
    CHECK(c.reference_file == kData / "reference.json");
    CHECK(c.corpus_file == kData / "corpus.tsv");
    CHECK(c.mode == ExperimentMode::Main);
    CHECK(c.runs == 2);
    CHECK(c.batch_size == 2);
    CHECK(c.temperature == 0.0);
    CHECK(c.std_convention == StdConvention::Population);
    CHECK(c.model.mock_script.contains("default"));
    CHECK(run_seed(c, 0) == 11);
    CHECK(run_seed(c, 1) == 12);

    const auto rc = run_config_for(c, 1);
    CHECK(rc.shuffle_seed == std::optional<std::uint64_t>(12));
    CHECK(rc.sampling.seed == std::optional<std::int64_t>(12));
}

TEST_CASE("config errors") {
    auto j = base_config();
    j["bogus"] = 1;
    CHECK_THROWS_AS(experiment_config_from_json(j, kData), ConfigError);

    j = base_config();
    j["mode"] = "sideways";
    CHECK_THROWS_AS(experiment_config_from_json(j, kData), ConfigError);

    j = base_config();
    j["batch_size"] = 0;
    CHECK_THROWS_AS(experiment_config_from_json(j, kData), ConfigError);

    j = base_config();
    j["corpus_file"] = "missing.tsv";
    CHECK_THROWS_AS(experiment_config_from_json(j, kData), ConfigError);

    j = base_config();
    j["model"] = {{"client", "http"}, {"model_id", "m"}};
    CHECK_THROWS_AS(experiment_config_from_json(j, kData), ConfigError);
}

TEST_CASE("default labels") {
    auto j = base_config();
    j.erase("label");
    j["mode"] = "ablation";
    CHECK(experiment_config_from_json(j, kData).label == "mock-model-ablation");
    j["mode"] = "baseline";
    CHECK(experiment_config_from_json(j, kData).label == "random");
}

TEST_CASE("resolved config and id") {
    const auto c = experiment_config_from_json(base_config(), kData);
    const auto j = resolved_config_json(c);
    CHECK(j["run_seeds"] == json::array({11, 12}));
    CHECK(j["inputs"].contains("corpus_file"));
    CHECK(experiment_id(c).size() == 16);
    CHECK(experiment_id(c) == experiment_id(experiment_config_from_json(base_config(), kData)));

    auto other = base_config();
    other["base_seed"] = 12;
    CHECK(experiment_id(c) != experiment_id(experiment_config_from_json(other, kData)));
}

TEST_CASE("http client token comes from the named environment variable") {
    auto j = base_config();
    j["model"] = {{"client", "http"},
                  {"model_id", "m"},
                  {"endpoint", "http://127.0.0.1:9/v1/chat/completions"},
                  {"auth_env", "IMPACTGRAPH_TEST_TOKEN_UNSET"}};
    const auto c = experiment_config_from_json(j, kData);
    ::unsetenv("IMPACTGRAPH_TEST_TOKEN_UNSET");
    CHECK_THROWS_AS(make_client(c), ConfigError);
    ::setenv("IMPACTGRAPH_TEST_TOKEN_UNSET", "t", 1);
    CHECK(make_client(c) != nullptr);
    ::unsetenv("IMPACTGRAPH_TEST_TOKEN_UNSET");
    CHECK(resolved_config_json(c).dump().find("\"t\"") == std::string::npos);
}

TEST_CASE("run_experiment writes the full artifact tree") {
    const auto out = fresh_dir("experiment");
    const auto c = experiment_config_from_json(base_config(), kData);
    const auto dir = run_experiment(c, out);
    CHECK(dir == out / experiment_id(c));
    for (const auto* f : {"config.json", "aggregate.json", "aggregate.md", "runs/run-000.json", "runs/run-001.json",
                          "reports/run-000.json", "reports/run-001.json"}) {
        CHECK_MESSAGE(fs::is_regular_file(dir / f), f);
    }
    CHECK_FALSE(fs::exists(out / (experiment_id(c) + ".partial")));

    // Six distinct posts at batch size 2: three batches per run, and the
    // scripted reply names four reference edges out of five.
    const auto run = parse_json_file(dir / "runs" / "run-000.json");
    CHECK(run["batches"].size() == 3);
    const auto report = metric_report_from_json(parse_json_file(dir / "reports" / "run-000.json"));
    CHECK(report.edge_precision == 1.0);
    CHECK(report.edge_recall == doctest::Approx(0.8));
    CHECK(report.shd == 1);

    CHECK_THROWS_AS(run_experiment(c, out), ConfigError);

    const auto series = load_run_series(out);
    REQUIRE(series.size() == 1);
    CHECK(series[0].condition_label == "mock-model");
    CHECK(series[0].reports.size() == 2);
    fs::remove_all(out);
}

TEST_CASE("ablation mode only sends non-informative posts") {
    const auto out = fresh_dir("ablation");
    auto j = base_config();
    j["mode"] = "ablation";
    j["runs"] = 1;
    const auto dir = run_experiment(experiment_config_from_json(j, kData), out);
    const auto run = parse_json_file(dir / "runs" / "run-000.json");
    REQUIRE(run["batches"].size() == 1);
    CHECK(run["batches"][0]["post_ids"] == json::array({"4", "6"}));
    fs::remove_all(out);
}

TEST_CASE("baseline mode needs no client or corpus") {
    const auto out = fresh_dir("baseline");
    auto j = base_config();
    j["mode"] = "baseline";
    j.erase("corpus_file");
    j.erase("model");
    j["runs"] = 3;
    const auto dir = run_experiment(experiment_config_from_json(j, kData), out);
    const auto artifact = parse_json_file(dir / "runs" / "run-002.json");
    CHECK(artifact["kind"] == "baseline_graph");
    CHECK(artifact["seed"] == 13);
    fs::remove_all(out);
}

TEST_CASE("client failures name the run and batch") {
    const auto out = fresh_dir("failure");
    auto j = base_config();
    j["model"]["script"] = {{"default", "(Flooding, Displacement)"}, {"fail_batches", {2}}};
    j["model"].erase("script_file");
    try {
        run_experiment(experiment_config_from_json(j, kData), out);
        FAIL("expected ClientError");
    } catch (const ClientError& e) {
        CHECK(e.batch_index() == 2);
        CHECK(std::string(e.what()).find("run 0") != std::string::npos);
    }
    CHECK(fs::is_empty(out));
    fs::remove_all(out);
}

TEST_CASE("parallel runs produce the same directory as sequential runs") {
    const auto a = fresh_dir("seq");
    const auto b = fresh_dir("par");
    auto j = base_config();
    j["batch_parallelism"] = 3;
    const auto seq = run_experiment(experiment_config_from_json(j, kData), a);
    j["parallel_runs"] = true;
    const auto par = run_experiment(experiment_config_from_json(j, kData), b);
    for (const auto* f : {"runs/run-000.json", "runs/run-001.json", "reports/run-001.json", "aggregate.md"}) {
        CHECK(read_file(seq / f) == read_file(par / f));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

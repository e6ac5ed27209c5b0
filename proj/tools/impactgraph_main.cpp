// impactgraph: build reference causal graphs, extract predicted graphs from
// post corpora through a model endpoint, and score them.

#include "impactgraph/baseline.hpp"
#include "impactgraph/corpus.hpp"
#include "impactgraph/error.hpp"
#include "impactgraph/experiment.hpp"
#include "impactgraph/extraction.hpp"
#include "impactgraph/graph_io.hpp"
#include "impactgraph/metrics.hpp"
#include "impactgraph/reference.hpp"
#include "impactgraph/report.hpp"
#include "impactgraph/text.hpp"

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace ig = impactgraph;
namespace fs = std::filesystem;

namespace {

std::optional<ig::CorpusFormat> parse_format(const std::string& s) {
    if (s == "tsv") return ig::CorpusFormat::Tsv;
    if (s == "jsonl") return ig::CorpusFormat::Jsonl;
    return std::nullopt;
}

int cmd_compile_ref(const std::string& base, const std::string& evidence, const std::string& out,
                    const std::string& event) {
    const auto chain = ig::load_base_chain(base);
    const auto table = ig::load_evidence_table(evidence);
    const auto ref = ig::prune_by_evidence(chain, table, event);
    ig::write_file(out, ig::dump_json(ig::reference_to_json(ref)));
    std::cout << "reference '" << ref.event_name << "': " << ref.graph.nodes().size() << " nodes, "
              << ref.graph.edges().size() << " edges (of " << chain.edges.size() << " base edges), "
              << table.size() << " evidence records\n";
    return 0;
}

int cmd_validate_ref(const std::string& base, const std::string& evidence) {
    const auto chain = ig::load_base_chain(base);
    const auto table = ig::load_evidence_table(evidence);
    const auto report = ig::validate_table(chain, table);
    for (const auto& p : report.problems) {
        // +2: 1-based and the header line.
        std::cout << "line " << p.row + 2 << ": " << ig::to_string(p.kind) << ": " << p.detail << "\n";
    }
    if (report.compilable()) {
        std::cout << "ok: " << table.size() << " records\n";
        return 0;
    }
    std::cout << report.problems.size() << " problem(s)\n";
    return 1;
}

int cmd_corpus_stats(const std::string& in, const std::string& format) {
    const auto fmt = format.empty() ? ig::format_for(in) : parse_format(format).value();
    const auto corpus = ig::load_corpus(in, fmt);
    const auto stats = ig::corpus_stats(corpus);
    std::cout << "total\t" << stats.total << "\n";
    std::cout << "distinct_ids\t" << stats.distinct_ids << "\n";
    for (auto label : {ig::PostLabel::Informative, ig::PostLabel::NonInformative, ig::PostLabel::Unlabeled}) {
        const auto it = stats.per_label.find(label);
        std::cout << ig::to_string(label) << "\t" << (it == stats.per_label.end() ? 0 : it->second) << "\n";
    }
    return 0;
}

int cmd_baseline(const std::string& vocab_file, std::uint64_t seed, double p_node, double p_edge,
                 const std::string& out) {
    auto vocab = ig::load_vocabulary(vocab_file);
    const auto graph = ig::random_graph(vocab, ig::BaselineConfig{p_node, p_edge, seed});
    ig::write_file(out, ig::dump_json(ig::graph_to_json(graph)));
    return 0;
}

int cmd_extract(const std::string& config_file, std::size_t run_index, const std::string& out) {
    const auto config = ig::load_experiment_config(config_file);
    if (config.mode == ig::ExperimentMode::Baseline) throw ig::ConfigError("extract needs mode main or ablation");
    const auto reference = ig::load_reference(config.reference_file);
    auto corpus = ig::dedupe_posts(
        ig::load_corpus(config.corpus_file, config.corpus_format.value_or(ig::format_for(config.corpus_file))));
    if (config.mode == ig::ExperimentMode::Ablation) corpus = ig::filter_by_label(corpus, config.ablation_label);
    auto client = ig::make_client(config);
    const auto rc = ig::run_config_for(config, run_index);
    const auto run = ig::extract_run(rc, *client, corpus, reference.graph.vocabulary_ptr());
    ig::write_file(out, ig::dump_json(ig::run_to_json(run, rc)));
    if (ig::is_refusal(run.result)) {
        std::cout << "refusal across " << run.batches.size() << " batches\n";
    } else {
        std::cout << std::get<ig::CausalGraph>(run.result).edges().size() << " edges from " << run.batches.size()
                  << " batches\n";
    }
    return 0;
}

int cmd_evaluate(const std::string& ref_file, const std::string& pred_file, const std::string& out) {
    const auto ref = ig::load_reference(ref_file);
    const auto prediction =
        ig::prediction_from_json(ig::parse_json_file(pred_file), ref.graph.vocabulary_ptr());
    const auto report = ig::evaluate(ref, prediction);
    const auto j = ig::metric_report_to_json(report);
    ig::write_file(out, ig::dump_json(j));
    for (auto m : ig::kAllMetrics) {
        const auto v = report.get(m);
        std::cout << ig::metric_name(m) << "\t";
        if (v) std::cout << *v;
        else std::cout << "N/A";
        std::cout << "\n";
    }
    return 0;
}

int cmd_report(const std::string& runs_dir, const std::vector<std::string>& compare, const std::string& md_out,
               const std::string& json_out, bool sample_std, int decimals) {
    const auto series = ig::load_run_series(runs_dir);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& c : compare) {
        const auto pos = c.find(':');
        if (pos == std::string::npos) throw ig::ConfigError("--compare expects 'a:b', got '" + c + "'");
        pairs.emplace_back(c.substr(0, pos), c.substr(pos + 1));
    }
    ig::ReportOptions opts;
    opts.decimals = decimals;
    opts.convention = sample_std ? ig::StdConvention::Sample : ig::StdConvention::Population;
    const auto doc = ig::render_report(series, pairs, opts);
    if (!md_out.empty()) ig::write_file(md_out, doc.markdown);
    if (!json_out.empty()) ig::write_file(json_out, ig::dump_json(doc.json));
    if (md_out.empty()) std::cout << doc.markdown;
    return 0;
}

int cmd_run(const std::string& config_file, const std::string& out, bool dry_run) {
    const auto config = ig::load_experiment_config(config_file);
    const auto id = ig::experiment_id(config);
    if (dry_run) {
        auto snapshot = ig::resolved_config_json(config);
        snapshot["experiment_id"] = id;
        std::cout << ig::dump_json(snapshot);
        return 0;
    }
    const auto dir = ig::run_experiment(config, out);
    std::cout << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal graph extraction and evaluation harness"};
    app.require_subcommand(1);

    std::string base, evidence, out, event;
    auto* compile = app.add_subcommand("compile-ref", "Prune a base chain by evidence into a reference graph");
    compile->add_option("--base", base, "Base chain JSON")->required()->check(CLI::ExistingFile);
    compile->add_option("--evidence", evidence, "Evidence table TSV")->required()->check(CLI::ExistingFile);
    compile->add_option("--out", out, "Reference graph JSON")->required();
    compile->add_option("--event", event, "Event name (defaults to the base chain's event type)");

    auto* validate = app.add_subcommand("validate-ref", "Check an evidence table against a base chain");
    validate->add_option("--base", base, "Base chain JSON")->required()->check(CLI::ExistingFile);
    validate->add_option("--evidence", evidence, "Evidence table TSV")->required()->check(CLI::ExistingFile);

    std::string in, format;
    auto* corpus = app.add_subcommand("corpus", "Corpus utilities");
    corpus->require_subcommand(1);
    auto* stats = corpus->add_subcommand("stats", "Total, distinct-id and per-label counts");
    stats->add_option("--in", in, "Corpus file")->required()->check(CLI::ExistingFile);
    stats->add_option("--format", format, "tsv or jsonl (default: from extension)")
        ->check(CLI::IsMember({"tsv", "jsonl"}));

    std::string vocab;
    std::uint64_t seed = 0;
    double p_node = 0.5, p_edge = 0.5;
    auto* baseline = app.add_subcommand("baseline", "Sample a random graph over a vocabulary");
    baseline->add_option("--vocab", vocab, "Vocabulary JSON")->required()->check(CLI::ExistingFile);
    baseline->add_option("--seed", seed, "Seed")->required();
    baseline->add_option("--p-node", p_node, "Node keep probability")->check(CLI::Range(0.0, 1.0));
    baseline->add_option("--p-edge", p_edge, "Edge probability")->check(CLI::Range(0.0, 1.0));
    baseline->add_option("--out", out, "Graph JSON")->required();

    std::string config;
    std::size_t run_index = 0;
    auto* extract = app.add_subcommand("extract", "Run one extraction run from an experiment config");
    extract->add_option("--config", config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    extract->add_option("--run", run_index, "Run index (selects the seed)");
    extract->add_option("--out", out, "Run artifact JSON")->required();

    std::string ref, pred;
    auto* evaluate = app.add_subcommand("evaluate", "Score a prediction against a reference graph");
    evaluate->add_option("--ref", ref, "Reference graph JSON")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--pred", pred, "Run artifact or graph JSON")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--out", out, "Metric report JSON")->required();

    std::string runs_dir, json_out;
    std::vector<std::string> compare;
    bool sample_std = false;
    int decimals = 2;
    auto* report = app.add_subcommand("report", "Aggregate runs and render a comparison table");
    report->add_option("--runs", runs_dir, "Directory with one subdirectory per condition")
        ->required()
        ->check(CLI::ExistingDirectory);
    report->add_option("--compare", compare, "Condition pair 'a:b' for paired t-tests (repeatable)");
    report->add_option("--out", out, "Markdown output (default: stdout)");
    report->add_option("--json", json_out, "JSON output");
    report->add_flag("--sample-std", sample_std, "Use the n-1 standard deviation");
    report->add_option("--decimals", decimals, "Decimal places in the table")->check(CLI::Range(0, 10));

    bool dry_run = false;
    std::string out_root;
    auto* run = app.add_subcommand("run", "Run a full experiment from a config file");
    run->add_option("--config", config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_root, "Output root")->default_val("experiments");
    run->add_flag("--dry-run", dry_run, "Validate and print the resolved config only");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compile) return cmd_compile_ref(base, evidence, out, event);
        if (*validate) return cmd_validate_ref(base, evidence);
        if (*stats) return cmd_corpus_stats(in, format);
        if (*baseline) return cmd_baseline(vocab, seed, p_node, p_edge, out);
        if (*extract) return cmd_extract(config, run_index, out);
        if (*evaluate) return cmd_evaluate(ref, pred, out);
        if (*report) return cmd_report(runs_dir, compare, out, json_out, sample_std, decimals);
        if (*run) return cmd_run(config, out_root, dry_run);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

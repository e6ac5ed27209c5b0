#include "impactgraph/report.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/graph_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace impactgraph {

using nlohmann::json;
namespace fs = std::filesystem;

ComparisonResult compare_series(const RunSeries& a, const RunSeries& b, double alpha) {
    ComparisonResult out{a.condition_label, b.condition_label, {}};
    const auto n = std::min(a.reports.size(), b.reports.size());
    for (auto m : kAllMetrics) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.reports[i].refused || b.reports[i].refused) continue;
            xs.push_back(a.reports[i].get(m).value());
            ys.push_back(b.reports[i].get(m).value());
        }
        MetricComparison mc{m, xs.size(), std::nullopt, std::nullopt};
        if (xs.size() >= 2) {
            auto test = paired_t_test(xs, ys, alpha);
            test.metric = std::string(metric_name(m));
            if (test.significant && test.t_statistic != 0.0) {
                const bool a_larger = test.t_statistic > 0;
                mc.winner = (a_larger == higher_is_better(m)) ? a.condition_label : b.condition_label;
            }
            mc.test = test;
        }
        out.metrics.push_back(std::move(mc));
    }
    return out;
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

ReportDocument render_report(std::span<const RunSeries> series,
                             std::span<const std::pair<std::string, std::string>> comparisons,
                             const ReportOptions& options) {
    std::optional<std::size_t> run_count;
    for (const auto& s : series) {
        if (s.reports.empty() || s.all_refused()) continue;
        if (run_count && *run_count != s.reports.size()) {
            throw InconsistentRunCounts("series '" + s.condition_label + "' has " + std::to_string(s.reports.size()) +
                                        " runs, expected " + std::to_string(*run_count));
        }
        run_count = s.reports.size();
    }

    auto find = [&](const std::string& label) -> const RunSeries& {
        for (const auto& s : series) {
            if (s.condition_label == label) return s;
        }
        throw ConfigError("comparison names unknown condition '" + label + "'");
    };

    std::vector<ComparisonResult> results;
    std::set<std::pair<std::string, Metric>> bold;
    for (const auto& [la, lb] : comparisons) {
        const auto& a = find(la);
        const auto& b = find(lb);
        auto cmp = (a.all_refused() || b.all_refused()) ? ComparisonResult{la, lb, {}}
                                                          : compare_series(a, b, options.alpha);
        for (const auto& mc : cmp.metrics) {
            if (mc.winner) bold.emplace(*mc.winner, mc.metric);
        }
        results.push_back(std::move(cmp));
    }

    const char* convention = options.convention == StdConvention::Population ? "population" : "sample";
    json j{{"decimals", options.decimals}, {"std_convention", convention}, {"alpha", options.alpha}};
    json series_json = json::array();

    std::string md = "| Condition |";
    for (auto m : kAllMetrics) {
        md += " " + std::string(metric_title(m)) + (higher_is_better(m) ? " (\xE2\x86\x91)" : " (\xE2\x86\x93)") + " |";
    }
    md += "\n|---|";
    for (std::size_t i = 0; i < kAllMetrics.size(); ++i) md += "---|";
    md += "\n";

    for (const auto& s : series) {
        json sj{{"label", s.condition_label}, {"runs", s.reports.size()}};
        md += "| " + s.condition_label + " |";
        if (s.reports.empty() || s.all_refused()) {
            sj["na"] = true;
            sj["refused_runs"] = s.reports.size();
            sj["metrics"] = nullptr;
            for (std::size_t i = 0; i < kAllMetrics.size(); ++i) md += " N/A |";
        } else {
            const auto agg = aggregate_runs(s, options.convention);
            sj["na"] = false;
            sj["refused_runs"] = agg.refused_runs;
            json metrics = json::object();
            for (auto m : kAllMetrics) {
                const auto& sum = agg.metrics.at(m);
                metrics[std::string(metric_name(m))] = {{"mean", sum.mean}, {"std", sum.std}};
                auto cell = fixed(sum.mean, options.decimals) + "\xC2\xB1" + fixed(sum.std, options.decimals);
                if (bold.contains({s.condition_label, m})) cell = "**" + cell + "**";
                md += " " + cell + " |";
            }
            sj["metrics"] = metrics;
        }
        md += "\n";
        series_json.push_back(std::move(sj));
    }
    j["series"] = series_json;

    json comps = json::array();
    std::string tests_md;
    for (const auto& cmp : results) {
        json tests = json::object();
        for (const auto& mc : cmp.metrics) {
            json tj{{"pairs", mc.pairs}};
            if (mc.test) {
                tj["t"] = number_or_null(mc.test->t_statistic);
                tj["df"] = mc.test->degrees_of_freedom;
                tj["p"] = mc.test->p_value;
                tj["significant"] = mc.test->significant;
                tests_md += "| " + cmp.a + " vs " + cmp.b + " | " + std::string(metric_title(mc.metric)) + " | " +
                            fixed(mc.test->t_statistic, 4) + " | " + std::to_string(mc.test->degrees_of_freedom) +
                            " | " + fixed(mc.test->p_value, 4) + " | " + (mc.winner ? *mc.winner : "-") + " |\n";
            } else {
                tj["t"] = nullptr;
                tj["df"] = nullptr;
                tj["p"] = nullptr;
                tj["significant"] = false;
            }
            tj["winner"] = mc.winner ? json(*mc.winner) : json(nullptr);
            tests[std::string(metric_name(mc.metric))] = tj;
        }
        comps.push_back({{"a", cmp.a}, {"b", cmp.b}, {"tests", tests}});
    }
    j["comparisons"] = comps;

    md += "\nValues are mean\xC2\xB1std (" + std::string(convention) + ") over " +
          (run_count ? std::to_string(*run_count) : std::string("0")) +
          " runs. Bold marks the significantly better condition of a compared pair (paired t-test, p < " +
          fixed(options.alpha, 2) + ").\n";
    if (!tests_md.empty()) {
        md += "\n| Comparison | Metric | t | df | p | Better |\n|---|---|---|---|---|---|\n" + tests_md;
    }
    return ReportDocument{std::move(j), std::move(md)};
}

std::map<std::string, std::map<Metric, Summary>> aggregates_from_report_json(const json& j) {
    std::map<std::string, std::map<Metric, Summary>> out;
    for (const auto& s : j.at("series")) {
        auto& entry = out[s.at("label").get<std::string>()];
        if (s.value("na", false)) continue;
        for (const auto& [name, v] : s.at("metrics").items()) {
            if (auto m = metric_from_name(name)) entry[*m] = Summary{v.at("mean").get<double>(), v.at("std").get<double>()};
        }
    }
    return out;
}

std::vector<RunSeries> load_run_series(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());

    std::vector<RunSeries> out;
    for (const auto& sub : subdirs) {
        RunSeries series;
        series.condition_label = sub.filename().string();
        if (fs::exists(sub / "config.json")) {
            const auto cfg = parse_json_file(sub / "config.json");
            if (cfg.contains("label") && cfg["label"].is_string()) series.condition_label = cfg["label"].get<std::string>();
        }
        const auto report_dir = fs::is_directory(sub / "reports") ? sub / "reports" : sub;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(report_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json" &&
                entry.path().filename() != "config.json" && entry.path().filename() != "aggregate.json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) series.reports.push_back(metric_report_from_json(parse_json_file(f)));
        if (!series.reports.empty()) out.push_back(std::move(series));
    }
    return out;
}

}  // namespace impactgraph

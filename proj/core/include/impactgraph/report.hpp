#pragma once

#include "impactgraph/stats.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace impactgraph {

struct ReportOptions {
    int decimals = 2;
    StdConvention convention = StdConvention::Population;
    double alpha = 0.05;
};

struct MetricComparison {
    Metric metric;
    std::size_t pairs = 0;
    /// Empty when fewer than two runs could be paired.
    std::optional<SignificanceResult> test;
    /// Label of the significantly better condition, if any.
    std::optional<std::string> winner;
};

struct ComparisonResult {
    std::string a;
    std::string b;
    std::vector<MetricComparison> metrics;
};

struct ReportDocument {
    nlohmann::json json;
    std::string markdown;
};

/// Paired tests for every metric between two series, pairing runs by index
/// and skipping indices where either run refused.
ComparisonResult compare_series(const RunSeries& a, const RunSeries& b, double alpha = 0.05);

/// Table with one row per series and one column per metric ("mean±std", or
/// "N/A" for an all-refused series). A cell is bold when its condition won a
/// significant paired test in one of the requested comparisons.
/// Throws InconsistentRunCounts when non-N/A series differ in run count, and
/// ConfigError for a comparison naming an unknown label.
ReportDocument render_report(std::span<const RunSeries> series,
                             std::span<const std::pair<std::string, std::string>> comparisons,
                             const ReportOptions& options = {});

/// Means and stds per label read back from a rendered report's JSON; an
/// N/A series maps to an empty metric map.
std::map<std::string, std::map<Metric, Summary>> aggregates_from_report_json(const nlohmann::json& j);

/// Loads every series below `dir`: one subdirectory per condition, metric
/// reports taken from <sub>/reports/*.json when that exists, else <sub>/*.json,
/// in filename order. The label is "label" from <sub>/config.json when
/// present, else the subdirectory name.
std::vector<RunSeries> load_run_series(const std::filesystem::path& dir);

}  // namespace impactgraph

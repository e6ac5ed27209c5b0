#pragma once

// Graph comparison scores: node/edge precision and recall, micro-F1 over
// nodes and edges together, SHD with reversals counted as one edit, and SHD
// normalized by the number of ordered pairs of reference variables.
//
// Everything is computed on integer set sizes; doubles appear only in the
// reported values.

#include "impactgraph/extraction.hpp"
#include "impactgraph/graph.hpp"
#include "impactgraph/reference.hpp"

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string_view>

#include <nlohmann/json.hpp>

namespace impactgraph {

/// Non-negative fraction kept in lowest terms.
class Ratio {
public:
    constexpr Ratio() = default;
    constexpr Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        const auto g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }
    constexpr std::int64_t num() const noexcept { return num_; }
    constexpr std::int64_t den() const noexcept { return den_; }
    constexpr double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    constexpr bool operator==(const Ratio&) const = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

struct PrecisionRecall {
    Ratio precision;
    Ratio recall;
};

/// precision = |ref ∩ pred| / |pred|, recall = |ref ∩ pred| / |ref|.
/// Empty pred: precision 0 (1 if ref is empty too). Empty ref: recall 0
/// (1 if pred is empty too).
template <typename T>
PrecisionRecall precision_recall(const std::set<T>& ref, const std::set<T>& pred) {
    std::int64_t overlap = 0;
    for (const auto& x : pred) {
        if (ref.contains(x)) ++overlap;
    }
    const auto nref = static_cast<std::int64_t>(ref.size());
    const auto npred = static_cast<std::int64_t>(pred.size());
    if (nref == 0 && npred == 0) return {Ratio(1, 1), Ratio(1, 1)};
    return {npred == 0 ? Ratio(0, 1) : Ratio(overlap, npred), nref == 0 ? Ratio(0, 1) : Ratio(overlap, nref)};
}

/// 2(|V∩| + |E∩|) / (|V_ref| + |E_ref| + |V_pred| + |E_pred|); 1 when both
/// graphs are empty. Throws VocabularyMismatch.
Ratio micro_f1(const CausalGraph& ref, const CausalGraph& pred);

/// |E_pred \ E_ref| + |E_ref \ E_pred| - |reversed_mismatches(ref, pred)|.
std::int64_t shd(const CausalGraph& ref, const CausalGraph& pred);

/// shd / (|V_ref| (|V_ref| - 1)). Throws DegenerateReference if |V_ref| < 2.
Ratio nshd(const CausalGraph& ref, const CausalGraph& pred);

enum class Metric { NodePrecision, NodeRecall, EdgePrecision, EdgeRecall, F1, Shd, Nshd };

inline constexpr std::array<Metric, 7> kAllMetrics{Metric::NodePrecision, Metric::NodeRecall,
                                                    Metric::EdgePrecision, Metric::EdgeRecall,
                                                    Metric::F1,            Metric::Shd,
                                                    Metric::Nshd};

/// JSON field name, e.g. "edge_recall".
std::string_view metric_name(Metric m);
/// Table header, e.g. "Edge Recall".
std::string_view metric_title(Metric m);
bool higher_is_better(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);

/// Raw set sizes behind one report.
struct MetricCounts {
    std::int64_t ref_nodes = 0, pred_nodes = 0, node_overlap = 0;
    std::int64_t ref_edges = 0, pred_edges = 0, edge_overlap = 0;
    std::int64_t reversed = 0;

    bool operator==(const MetricCounts&) const = default;
};

/// All seven scores for one (reference, prediction) pair, or all N/A for a
/// refusal.
struct MetricReport {
    bool refused = false;
    std::optional<double> node_precision, node_recall, edge_precision, edge_recall, f1;
    std::optional<std::int64_t> shd;
    std::optional<double> nshd;
    std::optional<MetricCounts> counts;

    std::optional<double> get(Metric m) const;
    static MetricReport refusal() {
        MetricReport r;
        r.refused = true;
        return r;
    }
};

MetricReport evaluate(const CausalGraph& ref, const Prediction& prediction);
MetricReport evaluate(const ReferenceGraph& ref, const Prediction& prediction);

/// N/A fields are written as null.
nlohmann::json metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& j);

}  // namespace impactgraph

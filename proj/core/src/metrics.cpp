#include "impactgraph/metrics.hpp"

#include "impactgraph/error.hpp"

namespace impactgraph {

using nlohmann::json;

namespace {

template <typename T>
std::int64_t overlap_size(const std::set<T>& a, const std::set<T>& b) {
    std::int64_t n = 0;
    for (const auto& x : b) {
        if (a.contains(x)) ++n;
    }
    return n;
}

std::int64_t size_of(const auto& c) { return static_cast<std::int64_t>(c.size()); }

}  // namespace

Ratio micro_f1(const CausalGraph& ref, const CausalGraph& pred) {
    require_same_vocabulary(ref, pred);
    const auto hits = overlap_size(ref.nodes(), pred.nodes()) + overlap_size(ref.edges(), pred.edges());
    const auto total = size_of(ref.nodes()) + size_of(ref.edges()) + size_of(pred.nodes()) + size_of(pred.edges());
    if (total == 0) return Ratio(1, 1);
    return Ratio(2 * hits, total);
}

std::int64_t shd(const CausalGraph& ref, const CausalGraph& pred) {
    require_same_vocabulary(ref, pred);
    const auto common = overlap_size(ref.edges(), pred.edges());
    const auto extra = size_of(pred.edges()) - common;
    const auto missing = size_of(ref.edges()) - common;
    return extra + missing - size_of(reversed_mismatches(ref, pred));
}

Ratio nshd(const CausalGraph& ref, const CausalGraph& pred) {
    const auto n = size_of(ref.nodes());
    if (n < 2) throw DegenerateReference(ref.nodes().size());
    return Ratio(shd(ref, pred), n * (n - 1));
}

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::NodePrecision: return "node_precision";
        case Metric::NodeRecall: return "node_recall";
        case Metric::EdgePrecision: return "edge_precision";
        case Metric::EdgeRecall: return "edge_recall";
        case Metric::F1: return "f1";
        case Metric::Shd: return "shd";
        case Metric::Nshd: return "nshd";
    }
    return "?";
}

std::string_view metric_title(Metric m) {
    switch (m) {
        case Metric::NodePrecision: return "Node Precision";
        case Metric::NodeRecall: return "Node Recall";
        case Metric::EdgePrecision: return "Edge Precision";
        case Metric::EdgeRecall: return "Edge Recall";
        case Metric::F1: return "F1";
        case Metric::Shd: return "SHD";
        case Metric::Nshd: return "nSHD";
    }
    return "?";
}

bool higher_is_better(Metric m) { return m != Metric::Shd && m != Metric::Nshd; }

std::optional<Metric> metric_from_name(std::string_view name) {
    for (auto m : kAllMetrics) {
        if (metric_name(m) == name) return m;
    }
    return std::nullopt;
}

std::optional<double> MetricReport::get(Metric m) const {
    switch (m) {
        case Metric::NodePrecision: return node_precision;
        case Metric::NodeRecall: return node_recall;
        case Metric::EdgePrecision: return edge_precision;
        case Metric::EdgeRecall: return edge_recall;
        case Metric::F1: return f1;
        case Metric::Shd: return shd ? std::optional<double>(static_cast<double>(*shd)) : std::nullopt;
        case Metric::Nshd: return nshd;
    }
    return std::nullopt;
}

MetricReport evaluate(const CausalGraph& ref, const Prediction& prediction) {
    if (is_refusal(prediction)) return MetricReport::refusal();
    const auto& pred = std::get<CausalGraph>(prediction);
    require_same_vocabulary(ref, pred);

    const auto nodes = precision_recall(ref.nodes(), pred.nodes());
    const auto edges = precision_recall(ref.edges(), pred.edges());
    const auto distance = shd(ref, pred);

    MetricReport r;
    r.node_precision = nodes.precision.value();
    r.node_recall = nodes.recall.value();
    r.edge_precision = edges.precision.value();
    r.edge_recall = edges.recall.value();
    r.f1 = micro_f1(ref, pred).value();
    r.shd = distance;
    r.nshd = nshd(ref, pred).value();
    r.counts = MetricCounts{size_of(ref.nodes()),
                            size_of(pred.nodes()),
                            overlap_size(ref.nodes(), pred.nodes()),
                            size_of(ref.edges()),
                            size_of(pred.edges()),
                            overlap_size(ref.edges(), pred.edges()),
                            size_of(reversed_mismatches(ref, pred))};
    return r;
}

MetricReport evaluate(const ReferenceGraph& ref, const Prediction& prediction) {
    return evaluate(ref.graph, prediction);
}

json metric_report_to_json(const MetricReport& report) {
    json j{{"refused", report.refused}};
    for (auto m : kAllMetrics) {
        const auto v = report.get(m);
        if (!v) {
            j[std::string(metric_name(m))] = nullptr;
        } else if (m == Metric::Shd) {
            j[std::string(metric_name(m))] = *report.shd;
        } else {
            j[std::string(metric_name(m))] = *v;
        }
    }
    if (report.counts) {
        const auto& c = *report.counts;
        j["counts"] = {{"ref_nodes", c.ref_nodes},   {"pred_nodes", c.pred_nodes}, {"node_overlap", c.node_overlap},
                       {"ref_edges", c.ref_edges},   {"pred_edges", c.pred_edges}, {"edge_overlap", c.edge_overlap},
                       {"reversed", c.reversed}};
    }
    return j;
}

MetricReport metric_report_from_json(const json& j) {
    MetricReport r;
    r.refused = j.value("refused", false);
    auto real = [&](Metric m) -> std::optional<double> {
        const auto key = std::string(metric_name(m));
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        return j[key].get<double>();
    };
    r.node_precision = real(Metric::NodePrecision);
    r.node_recall = real(Metric::NodeRecall);
    r.edge_precision = real(Metric::EdgePrecision);
    r.edge_recall = real(Metric::EdgeRecall);
    r.f1 = real(Metric::F1);
    r.nshd = real(Metric::Nshd);
    if (j.contains("shd") && !j["shd"].is_null()) r.shd = j["shd"].get<std::int64_t>();
    if (j.contains("counts")) {
        const auto& c = j["counts"];
        r.counts = MetricCounts{c.at("ref_nodes").get<std::int64_t>(),  c.at("pred_nodes").get<std::int64_t>(),
                                c.at("node_overlap").get<std::int64_t>(), c.at("ref_edges").get<std::int64_t>(),
                                c.at("pred_edges").get<std::int64_t>(), c.at("edge_overlap").get<std::int64_t>(),
                                c.at("reversed").get<std::int64_t>()};
    }
    if (!r.refused) {
        for (auto m : kAllMetrics) {
            if (!r.get(m)) throw InvalidGraph("metric report is missing '" + std::string(metric_name(m)) + "'");
        }
    }
    return r;
}

}  // namespace impactgraph

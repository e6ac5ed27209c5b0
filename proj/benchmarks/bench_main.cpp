#include "impactgraph/baseline.hpp"
#include "impactgraph/extraction.hpp"
#include "impactgraph/metrics.hpp"

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

namespace ig = impactgraph;

namespace {

ig::VocabularyPtr vocabulary(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("Variable " + std::to_string(i));
    return ig::make_vocabulary("Tropical Cyclone", names);
}

void BM_RandomGraph(benchmark::State& state) {
    const auto vocab = vocabulary(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ig::random_graph(vocab, {0.5, 0.5, seed++}));
}
BENCHMARK(BM_RandomGraph)->Arg(8)->Arg(12)->Arg(32);

void BM_Evaluate(benchmark::State& state) {
    const auto vocab = vocabulary(static_cast<int>(state.range(0)));
    const auto ref = ig::random_graph(vocab, {1.0, 0.3, 1});
    const ig::Prediction pred = ig::random_graph(vocab, {0.8, 0.3, 2});
    for (auto _ : state) benchmark::DoNotOptimize(ig::evaluate(ref, pred));
}
BENCHMARK(BM_Evaluate)->Arg(8)->Arg(12)->Arg(32);

void BM_Shd(benchmark::State& state) {
    const auto vocab = vocabulary(static_cast<int>(state.range(0)));
    const auto ref = ig::random_graph(vocab, {1.0, 0.3, 3});
    const auto pred = ig::random_graph(vocab, {0.8, 0.3, 4});
    for (auto _ : state) benchmark::DoNotOptimize(ig::shd(ref, pred));
}
BENCHMARK(BM_Shd)->Arg(8)->Arg(32);

void BM_ParseCausalPairs(benchmark::State& state) {
    const auto vocab = vocabulary(12);
    std::string reply = "Here are the causal relations:\n";
    for (int i = 0; i < state.range(0); ++i) {
        reply += std::to_string(i + 1) + ". (Variable " + std::to_string(i % 12) + ", **Variable " +
                 std::to_string((i + 5) % 12) + "**)\n";
    }
    for (auto _ : state) benchmark::DoNotOptimize(ig::parse_causal_pairs(reply, *vocab));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(reply.size()));
}
BENCHMARK(BM_ParseCausalPairs)->Arg(10)->Arg(100);

void BM_RenderPrompt(benchmark::State& state) {
    const auto vocab = vocabulary(12);
    ig::PostBatch batch;
    for (int i = 0; i < 20; ++i) {
        batch.posts.push_back({std::to_string(i), "Flood water is rising on street " + std::to_string(i) +
                                                      " and the power has been out since this morning"});
    }
    for (auto _ : state) benchmark::DoNotOptimize(ig::render_prompt("Hurricane Harvey", *vocab, batch));
}
BENCHMARK(BM_RenderPrompt);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <map>
#include <sstream>

#include "tagtrace/graph.hpp"
#include "tagtrace/reuse.hpp"
#include "tagtrace/similarity.hpp"
#include "tagtrace/synth.hpp"
#include "tagtrace/trace_io.hpp"

using namespace tagtrace;

namespace {

const Trace& trace_for(std::uint32_t users) {
  static std::map<std::uint32_t, Trace> cache;
  auto it = cache.find(users);
  if (it == cache.end()) {
    GenConfig cfg;
    cfg.seed = 5;
    cfg.users = users;
    cfg.days = 30;
    cfg.events_per_day = users * 5;
    cfg.communities = std::max(1u, users / 100);
    it = cache.emplace(users, generate(cfg).trace).first;
  }
  return it->second;
}

void BM_Parse(benchmark::State& state) {
  std::ostringstream out;
  write_canonical_tsv(trace_for(static_cast<std::uint32_t>(state.range(0))), out);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_trace(in));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Parse)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const auto& t = trace_for(static_cast<std::uint32_t>(state.range(0)));
  for (auto _ : state) {
    const auto c = classify(t);
    benchmark::DoNotOptimize(daily_series(c, Dimension::item));
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * t.size()));
}
BENCHMARK(BM_Classify)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_AllPairs(benchmark::State& state) {
  const auto& t = trace_for(static_cast<std::uint32_t>(state.range(0)));
  const auto profiles = build_profiles(t);
  const auto mode = state.range(1) == 0 ? SimilarityMode::user_item : SimilarityMode::user_tag;
  std::size_t pairs = 0;
  for (auto _ : state) {
    const auto sim = all_pairs(profiles, mode);
    pairs = sim.entries.size();
    benchmark::DoNotOptimize(sim);
  }
  state.counters["pairs"] = static_cast<double>(pairs);
}
BENCHMARK(BM_AllPairs)->Args({1000, 0})->Args({1000, 1})->Args({4000, 0})->Args({4000, 1})->Unit(benchmark::kMillisecond);

void BM_Topology(benchmark::State& state) {
  const auto& t = trace_for(static_cast<std::uint32_t>(state.range(0)));
  const auto sim = all_pairs(build_profiles(t), SimilarityMode::user_tag);
  const auto g = build_graph(sim, t.vocabulary().users.size(), 0.03);
  for (auto _ : state) benchmark::DoNotOptimize(topology(g));
  state.counters["edges"] = static_cast<double>(g.edge_count());
}
BENCHMARK(BM_Topology)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

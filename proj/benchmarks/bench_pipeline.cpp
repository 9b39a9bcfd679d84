#include "wfg/certify.hpp"
#include "wfg/measure.hpp"
#include "wfg/model.hpp"
#include "wfg/pipeline.hpp"

#include <benchmark/benchmark.h>

using namespace wfg;

namespace {

Model bakery(std::int64_t w) { return load_model(std::string(WFG_MODELS_DIR) + "/bakery.wfm", {{"w", w}}); }

const char* map_name(std::int64_t i) { return i == 0 ? "rank" : "nlock"; }

void BM_Reach(benchmark::State& state) {
  const auto m = bakery(state.range(1));
  const auto& map = m.map(map_name(state.range(0)));
  ExhaustiveBackend b;
  std::size_t nodes = 0;
  for (auto _ : state) nodes = abstract_graph(relation_of(m, map), abstraction_of(m, map), b).nodes.size();
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_Reach)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMillisecond);

void BM_TagAndSynth(benchmark::State& state) {
  const auto m = bakery(3);
  ExhaustiveBackend b;
  GraphOptions o;
  o.jobs = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    auto r = synthesize_omap(tagged_graph(m, map_name(state.range(0)), b, o));
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_TagAndSynth)->ArgsProduct({{0, 1}, {1, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Certify(benchmark::State& state) {
  const auto m = bakery(2);
  const char* name = map_name(state.range(0));
  ExhaustiveBackend b;
  const auto g = tagged_graph(m, name, b);
  const auto omap = *synthesize_omap(g).omap;
  for (auto _ : state) {
    auto c = certify(m, name, g, omap, b);
    if (!c.pass()) state.SkipWithError("certificate failed");
  }
}
BENCHMARK(BM_Certify)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

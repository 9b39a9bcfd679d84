#include "wfg/enumerate.hpp"
#include "wfg/error.hpp"
#include "wfg/ipasir.hpp"

#include <benchmark/benchmark.h>

using namespace wfg;

namespace {

// All pairs (x, y) of w-bit naturals with x + y = c, x < y.
Query sum_query(unsigned w) {
  const auto x = ex::var("x", Sort::nat(w));
  const auto y = ex::var("y", Sort::nat(w));
  Query q;
  q.vars = {{"x", Sort::nat(w)}, {"y", Sort::nat(w)}};
  q.hyp = ex::and_({ex::eq(ex::add(x, y), ex::nat((1u << w) / 3, w)), ex::lt(x, y)});
  q.trm = ex::tuple({{"x", x}, {"y", y}});
  q.num = 1u << (2 * w);
  return q;
}

void BM_Exhaustive(benchmark::State& state) {
  const auto q = sum_query(static_cast<unsigned>(state.range(0)));
  ExhaustiveBackend b;
  std::size_t n = 0;
  for (auto _ : state) n = b.enumerate(q).values.size();
  state.counters["values"] = static_cast<double>(n);
}
BENCHMARK(BM_Exhaustive)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_Ipasir(benchmark::State& state) {
  if (IpasirLibrary::env_path().empty()) {
    state.SkipWithError("WFG_IPASIR_LIB unset");
    return;
  }
  const auto q = sum_query(static_cast<unsigned>(state.range(0)));
  auto b = make_backend("ipasir");
  std::size_t n = 0;
  for (auto _ : state) n = b->enumerate(q).values.size();
  state.counters["values"] = static_cast<double>(n);
}
BENCHMARK(BM_Ipasir)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_Bitblast(benchmark::State& state) {
  const auto q = sum_query(static_cast<unsigned>(state.range(0)));
  std::size_t clauses = 0;
  for (auto _ : state) clauses = bitblast(q.trm, q.hyp, q.vars).clauses.size();
  state.counters["clauses"] = static_cast<double>(clauses);
}
BENCHMARK(BM_Bitblast)->DenseRange(4, 16, 4);

} // namespace

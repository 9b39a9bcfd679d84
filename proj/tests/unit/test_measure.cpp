#include "support.hpp"

#include "wfg/certify.hpp"
#include "wfg/error.hpp"
#include "wfg/pipeline.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace wfg;

namespace {

Graph tiny(std::size_t n, std::size_t measures,
           const std::vector<std::tuple<std::size_t, std::size_t, std::vector<OrderTag>>>& arcs) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back(Value::nat(i, 8));
  for (std::size_t m = 0; m < measures; ++m) {
    g.measures.push_back("m" + std::to_string(m));
    g.widths.push_back(1);
  }
  g.succ.resize(n);
  g.tags.resize(n);
  for (const auto& [u, v, t] : arcs) {
    g.succ[u].push_back(v);
    g.tags[u].push_back(t);
  }
  g.tagged = true;
  return g;
}

bool reaches(const Graph& g, std::size_t from, std::size_t to) {
  std::vector<bool> seen(g.nodes.size());
  std::vector<std::size_t> work{from};
  while (!work.empty()) {
    auto u = work.back();
    work.pop_back();
    for (auto v : g.succ[u]) {
      if (v == to) return true;
      if (!seen[v]) {
        seen[v] = true;
        work.push_back(v);
      }
    }
  }
  return false;
}

// Shortest closed walk along which every measure either never strictly
// decreases or may increase somewhere; 0 when none has length <= cap.
std::size_t brute_min_cycle(const Graph& g, std::size_t cap) {
  const std::size_t ms = g.measures.size();
  for (std::size_t len = 1; len <= cap; ++len) {
    for (std::size_t s = 0; s < g.nodes.size(); ++s) {
      std::vector<int> st(ms, 0);
      std::function<bool(std::size_t, std::size_t, std::vector<int>)> walk = [&](std::size_t u, std::size_t left,
                                                                                 std::vector<int> st) {
        if (left == 0) {
          if (u != s) return false;
          for (int x : st) {
            if (x == 1) return false;
          }
          return true;
        }
        for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
          auto next = st;
          for (std::size_t m = 0; m < ms; ++m) {
            const auto t = g.tags[u][k][m];
            if (t == OrderTag::MayInc) next[m] = 2;
            else if (t == OrderTag::StrictDec && next[m] == 0) next[m] = 1;
          }
          if (walk(g.succ[u][k], left - 1, next)) return true;
        }
        return false;
      };
      if (walk(s, len, st)) return len;
    }
  }
  return 0;
}

const auto S = OrderTag::StrictDec;
const auto N = OrderTag::NonInc;
const auto M = OrderTag::MayInc;

} // namespace

TEST_CASE("descriptors print with upper-case names") {
  CHECK(to_string(Descriptor{4u, std::string("runs"), 11u, 0u}) == "(4 RUNS 11 0)");
}

TEST_CASE("a single node gets rank one") {
  auto r = synthesize_omap(tiny(1, 0, {}));
  REQUIRE(r.ok());
  CHECK(to_string(r.omap->begin()->second) == "(1 0)");
}

TEST_CASE("a chain is ranked sinks first") {
  auto r = synthesize_omap(tiny(3, 0, {{0, 1, {}}, {1, 2, {}}}));
  REQUIRE(r.ok());
  CHECK(to_string(r.omap->at(Value::nat(0, 8))) == "(3 0)");
  CHECK(to_string(r.omap->at(Value::nat(2, 8))) == "(1 0)");
}

TEST_CASE("non-increasing two-cycle is a counterexample") {
  auto g = tiny(2, 1, {{0, 1, {N}}, {1, 0, {N}}});
  auto r = synthesize_omap(g);
  REQUIRE_FALSE(r.ok());
  CHECK(r.counterexample->length() == 2);
  CHECK(check_cycle(g, *r.counterexample).empty());
  CHECK(cycle_report(g, *r.counterexample).find("m0") != std::string::npos);
}

TEST_CASE("self-loops") {
  auto bad = tiny(1, 1, {{0, 0, {M}}});
  auto r = synthesize_omap(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(r.counterexample->cycle == std::vector<std::size_t>{0, 0});

  auto none = tiny(1, 0, {{0, 0, {}}});
  r = synthesize_omap(none);
  REQUIRE_FALSE(r.ok());
  CHECK(cycle_report(none, *r.counterexample).find("(no component measures declared)") != std::string::npos);

  auto good = tiny(1, 1, {{0, 0, {S}}});
  r = synthesize_omap(good);
  REQUIRE(r.ok());
  CHECK(check_omap_valid(good, *r.omap).pass);
}

TEST_CASE("measure choice follows declaration order") {
  // Both measures work for the cycle; the first one declared is used.
  auto g = tiny(2, 2, {{0, 1, {S, S}}, {1, 0, {N, N}}});
  auto r = synthesize_omap(g);
  REQUIRE(r.ok());
  const auto d = r.omap->at(Value::nat(0, 8));
  CHECK(to_string(d).find("M0") != std::string::npos);
  CHECK(to_string(d).find("M1") == std::string::npos);
}

TEST_CASE("nested measures peel inner cycles") {
  // outer cycle 0->1->0 broken by m0; the inner self-loop on 1 by m1.
  auto g = tiny(2, 2, {{0, 1, {S, M}}, {1, 0, {N, M}}, {1, 1, {N, S}}});
  auto r = synthesize_omap(g);
  REQUIRE(r.ok());
  CHECK(check_omap_valid(g, *r.omap).pass);
}

TEST_CASE("check_cycle rejects malformed cycles") {
  auto g = tiny(2, 1, {{0, 1, {S}}, {1, 0, {N}}});
  CycleCounterexample c{{0, 1, 0}, {{S}, {N}}};
  CHECK_FALSE(check_cycle(g, c).empty());  // m0 decreases
  CycleCounterexample open{{0, 1}, {{S}}};
  CHECK_FALSE(check_cycle(g, open).empty());
  CycleCounterexample missing{{1, 1}, {{N}}};
  CHECK_FALSE(check_cycle(g, missing).empty());
}

TEST_CASE("SCC partition agrees with mutual reachability") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto g = test::random_graph(rng, 2 + i % 9, 1, 0.2);
    auto sccs = scc_partition(g);
    std::vector<std::size_t> comp(g.nodes.size(), SIZE_MAX);
    for (std::size_t c = 0; c < sccs.size(); ++c) {
      CHECK(std::is_sorted(sccs[c].begin(), sccs[c].end()));
      for (auto u : sccs[c]) comp[u] = c;
    }
    for (std::size_t u = 0; u < g.nodes.size(); ++u) {
      REQUIRE(comp[u] != SIZE_MAX);
      for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        const bool same = u == v || (reaches(g, u, v) && reaches(g, v, u));
        CHECK(same == (comp[u] == comp[v]));
      }
      for (auto v : g.succ[u]) CHECK(comp[v] <= comp[u]);  // sinks first
    }
  }
}

TEST_CASE("synthesis is sound on random graphs") {
  std::mt19937_64 rng(77);
  std::size_t ok = 0, failed = 0;
  for (int i = 0; i < 400; ++i) {
    auto g = test::random_graph(rng, 1 + i % 8, i % 3, 0.1 + 0.05 * (i % 5));
    auto r = synthesize_omap(g);
    if (r.ok()) {
      ++ok;
      CHECK(r.omap->size() == g.nodes.size());
      CHECK(check_omap_valid(g, *r.omap).pass);
    } else {
      ++failed;
      CHECK(check_cycle(g, *r.counterexample) == "");
    }
  }
  CHECK(ok > 50);
  CHECK(failed > 50);
}

TEST_CASE("shortest non-decreasing cycle matches brute force") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 150; ++i) {
    auto g = test::random_graph(rng, 2 + i % 3, 1 + i % 2, 0.35);
    std::vector<std::size_t> all(g.nodes.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    auto c = find_min_nondec_cycle(g, all);
    const auto want = brute_min_cycle(g, 8);
    if (want == 0) {
      CHECK((!c || c->length() > 8));
    } else {
      REQUIRE(c);
      CHECK(c->length() == want);
      CHECK(check_cycle(g, *c).empty());
    }
  }
}

TEST_CASE("rank synthesis reproduces the reference omap") {
  auto m = test::bakery();
  ExhaustiveBackend b;
  const auto abs = abstraction_of(m, m.map("rank"));
  auto r = synthesize_omap(tagged_graph(m, "rank", b));
  REQUIRE(r.ok());
  const auto ref = test::reference_rank_omap(abs.node_sort());
  CHECK(ref.size() == 21);
  for (const auto& [node, d] : ref) {
    CAPTURE(node.to_string());
    REQUIRE(r.omap->count(node));
    CHECK(to_string(r.omap->at(node)) == to_string(d));
  }
  CHECK(r.omap->size() == ref.size());
}

TEST_CASE("omap JSON round-trips") {
  auto m = test::bakery();
  ExhaustiveBackend b;
  const auto abs = abstraction_of(m, m.map("nlock"));
  auto r = synthesize_omap(tagged_graph(m, "nlock", b));
  REQUIRE(r.ok());
  const auto j = omap_to_json(*r.omap);
  CHECK(omap_from_json(j, abs.node_sort()) == *r.omap);
  CHECK(omap_to_json(omap_from_json(j, abs.node_sort())).dump() == j.dump());
}

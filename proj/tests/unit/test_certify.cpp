#include "support.hpp"

#include "wfg/bakery.hpp"
#include "wfg/certify.hpp"
#include "wfg/error.hpp"
#include "wfg/pipeline.hpp"

#include <doctest.h>

#include <random>

using namespace wfg;
namespace bk = wfg::bakery;

namespace {

struct Rank {
  Model model = test::bakery({{"w", 2}});
  ExhaustiveBackend backend;
  const MapDecl& map = model.map("rank");
  Relation rel = relation_of(model, map);
  Abstraction abs = abstraction_of(model, map);
  Graph g = tagged_graph(rel, abs, backend);
  Omap omap = test::reference_rank_omap(abs.node_sort());

  std::size_t node_at(std::uint64_t loc) const {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.nodes[i].field("loc").as_nat() == loc) return i;
    }
    FAIL("no node at loc " << loc);
    return 0;
  }
  std::size_t arc(std::size_t u, std::uint64_t dst_loc) const {
    for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
      if (g.nodes[g.succ[u][k]].field("loc").as_nat() == dst_loc) return k;
    }
    FAIL("no arc to loc " << dst_loc);
    return 0;
  }
};

const Verdict& find(const std::vector<Verdict>& vs, const std::string& name) {
  for (const auto& v : vs) {
    if (v.check == name) return v;
  }
  throw Error("no verdict " + name);
}

bk::Tr tr(std::uint64_t loc, std::uint64_t runs, std::uint64_t loop, bool done = false) {
  bk::Tr a;
  a.loc = loc;
  a.runs = runs;
  a.loop = loop;
  a.done = done;
  a.ndx = 1;
  return a;
}

} // namespace

TEST_CASE("reference omap certifies the step relation at width 2") {
  Rank r;
  auto cert = certify(r.model, "rank", r.g, r.omap, r.backend);
  for (const auto& v : cert.verdicts) {
    CAPTURE(v.check);
    CAPTURE(v.detail);
    CHECK(v.pass);
  }
  CHECK(cert.pass());
  const auto j = certificate_to_json(cert);
  CHECK(j["verdict"] == "pass");
  CHECK(j["model-hash"].get<std::string>().size() == 64);
  CHECK(certificate_to_json(certify(r.model, "rank", r.g, r.omap, r.backend)).dump() == j.dump());
}

TEST_CASE("valid-omap scans descriptor entries") {
  Rank r;
  CHECK(check_omap_valid(r.g, r.omap).pass);
  auto bad = r.omap;
  bad.at(r.g.nodes[r.node_at(0)]) = Descriptor{4u, std::string("runs"), 10u, 0u};
  auto v = check_omap_valid(r.g, bad);
  CHECK_FALSE(v.pass);
  CHECK(v.detail.find("(:LOC 0)") != std::string::npos);
  CHECK(v.detail.find("(:LOC 1)") != std::string::npos);

  auto partial = r.omap;
  partial.erase(partial.begin());
  CHECK_FALSE(check_omap_valid(r.g, partial).pass);
}

TEST_CASE("deleting an arc breaks membership in nexts") {
  Rank r;
  const auto u = r.node_at(0);
  const auto k = r.arc(u, 1);
  r.g.succ[u].erase(r.g.succ[u].begin() + static_cast<std::ptrdiff_t>(k));
  r.g.tags[u].erase(r.g.tags[u].begin() + static_cast<std::ptrdiff_t>(k));
  auto vs = check_assumptions(r.rel, r.abs, r.g, r.backend);
  const auto& v = find(vs, "map-e-member-nexts");
  CHECK_FALSE(v.pass);
  REQUIRE(v.witness);
  CHECK(v.witness->dump().find("1") != std::string::npos);
  CHECK(find(vs, "map-o-decrement-strict").pass);
}

TEST_CASE("a forced strict tag is refuted") {
  Rank r;
  const auto u = r.node_at(10);
  const auto k = r.arc(u, 11);
  REQUIRE(r.g.tags[u][k][1] == OrderTag::NonInc);
  r.g.tags[u][k][1] = OrderTag::StrictDec;
  auto vs = check_assumptions(r.rel, r.abs, r.g, r.backend);
  CHECK(find(vs, "map-e-member-nexts").pass);
  CHECK_FALSE(find(vs, "map-o-decrement-strict").pass);
  CHECK(find(vs, "map-o-decrement-non-strict").pass);
}

TEST_CASE("a forced non-increase tag is refuted") {
  Rank r;
  const auto u = r.node_at(2);
  const auto k = r.arc(u, 3);
  REQUIRE(r.g.tags[u][k][1] == OrderTag::MayInc);
  r.g.tags[u][k][1] = OrderTag::NonInc;
  auto vs = check_assumptions(r.rel, r.abs, r.g, r.backend);
  CHECK_FALSE(find(vs, "map-o-decrement-non-strict").pass);
}

TEST_CASE("measure decrease catches an omap that only looks valid") {
  Rank r;
  auto v = check_measure_decrease(r.rel, r.abs, r.omap, r.g, r.backend);
  CHECK(v.pass);
  // Claiming runs strictly decreases 15->0 lets a wrong omap pass valid-omap.
  auto g = r.g;
  auto m = r.omap;
  const auto u = r.node_at(0);
  for (auto& tags : g.tags)
    for (auto& t : tags) t[0] = OrderTag::StrictDec;
  m.at(g.nodes[u]) = Descriptor{4u, std::string("runs"), 20u, 0u};
  auto bad = check_measure_decrease(r.rel, r.abs, m, g, r.backend);
  CHECK_FALSE(bad.pass);
  CHECK(bad.witness);
}

TEST_CASE("mk-bnl and msr of concrete states") {
  auto m = test::bakery();
  const auto abs = abstraction_of(m, m.map("rank"));
  const auto omap = test::reference_rank_omap(abs.node_sort());
  OmapMeasure msr(abs, omap);
  CHECK(msr.bound() == 6);
  CHECK(msr.bnl(bk::to_value(tr(14, 2, 0), m.state_sort())) == Bnl{4, 2, 1, 0, 0, 0});
  CHECK(msr.bnl(bk::to_value(tr(8, 1, 2), m.state_sort())) == Bnl{4, 1, 4, 2, 4, 0});
  CHECK(msr.bnl(bk::to_value(tr(17, 0, 0, true), m.state_sort())) == Bnl{1, 0, 0, 0, 0, 0});
  CHECK(to_string(msr.ordinal(bk::to_value(tr(17, 0, 0, true), m.state_sort()))) == "w^5*1");
  // loc 1 with loop=1 is not a reachable node
  CHECK_THROWS_AS(msr.bnl(bk::to_value(tr(1, 2, 1), m.state_sort())), Error);
}

TEST_CASE("descent from init reaches the done state") {
  auto m = test::bakery();
  const auto abs = abstraction_of(m, m.map("rank"));
  const auto omap = test::reference_rank_omap(abs.node_sort());
  OmapMeasure msr(abs, omap);
  const bk::Params p;
  auto measure = [&](const Value& x) { return msr.ordinal(x); };

  auto step = [&](const Value& x) -> std::optional<Value> {
    const auto a = bk::from_value(x);
    if (a.done) return std::nullopt;
    return bk::to_value(bk::tr_next(p, a, bk::Sh{}), m.state_sort());
  };
  auto trace = iterate_descent(bk::to_value(bk::tr_init(p, 1), m.state_sort()), step, measure, 1000);
  CHECK(bk::from_value(trace.back().state).loc == 17);
  CHECK(trace.size() > 20);

  auto done = iterate_descent(bk::to_value(tr(17, 0, 0, true), m.state_sort()), step, measure, 1000);
  CHECK(done.size() == 1);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    auto any = [&](const Value& x) -> std::optional<Value> {
      const auto a = bk::from_value(x);
      if (a.done) return std::nullopt;
      return bk::to_value(bk::tr_next(p, a, bk::Sh{rng() % 8}), m.state_sort());
    };
    CHECK_NOTHROW(iterate_descent(bk::to_value(bk::tr_init(p, 1 + seed % 2), m.state_sort()), any, measure, 1000));
  }

  auto stuck = [&](const Value& x) -> std::optional<Value> { return x; };
  CHECK_THROWS_AS(iterate_descent(bk::to_value(tr(0, 2, 0), m.state_sort()), stuck, measure, 10), MonitorError);
}

TEST_CASE("state invariants") {
  auto m = test::bakery({{"w", 2}});
  ExhaustiveBackend b;
  auto rank = certify_state_invariant(m, m.invariant("rank-inv"), b);
  CHECK(rank.pass);
  CHECK(rank.nodes >= 18);
  CHECK(certify_state_invariant(m, m.invariant("nlock-inv"), b).pass);
  auto never = m.invariant("rank-inv");
  never.body = ex::boolean(false);
  auto v = certify_state_invariant(m, never, b);
  CHECK_FALSE(v.pass);
  CHECK(v.failing.front().find("(:LOC 0)") != std::string::npos);
}

TEST_CASE("blok relation certifies with a synthesized omap") {
  auto m = test::bakery({{"w", 2}});
  ExhaustiveBackend b;
  const auto g = tagged_graph(m, "nlock", b);
  auto r = synthesize_omap(g);
  REQUIRE(r.ok());
  auto cert = certify(m, "nlock", g, *r.omap, b);
  for (const auto& v : cert.verdicts) {
    CAPTURE(v.check);
    CAPTURE(v.detail);
    CHECK(v.pass);
  }
  CHECK(find(cert.verdicts, "state-invariant").pass);
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

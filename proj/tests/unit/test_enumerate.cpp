#include "support.hpp"

#include "wfg/bitblast.hpp"
#include "wfg/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>

using namespace wfg;

namespace {

// A truncated result is `num` distinct members of the full set.
void check_against(const EnumResult& got, const EnumResult& full, std::size_t num) {
  if (full.is_total) {
    CHECK(got == full);
    return;
  }
  CHECK_FALSE(got.is_total);
  CHECK(got.values.size() == num);
  CHECK(std::is_sorted(got.values.begin(), got.values.end()));
  for (const auto& v : got.values) CHECK(std::binary_search(full.values.begin(), full.values.end(), v));
}

} // namespace

TEST_CASE("num boundary decides totality") {
  const auto x = ex::var("x", Sort::nat(2));
  Query q{x, ex::lt(x, ex::nat(3, 2)), {{"x", Sort::nat(2)}}, 3};
  ExhaustiveBackend b;
  auto r = b.enumerate(q);
  CHECK_FALSE(r.is_total);
  CHECK(r.values.size() == 3);
  q.num = 4;
  r = b.enumerate(q);
  CHECK(r.is_total);
  CHECK(r.values == std::vector<Value>{Value::nat(0, 2), Value::nat(1, 2), Value::nat(2, 2)});
}

TEST_CASE("empty hypothesis gives the empty total result") {
  const auto x = ex::var("x", Sort::nat(3));
  Query q{x, ex::and_({ex::lt(x, ex::nat(2, 3)), ex::lt(ex::nat(4, 3), x)}), {{"x", Sort::nat(3)}}, 1};
  std::vector<std::unique_ptr<Backend>> backends;
  backends.push_back(std::make_unique<ExhaustiveBackend>());
  backends.push_back(test::dpll_backend());
  for (const auto& b : backends) {
    auto r = b->enumerate(q);
    CHECK(r.is_total);
    CHECK(r.values.empty());
  }
}

TEST_CASE("num must be positive") {
  Query q{ex::boolean(true), ex::boolean(true), {}, 0};
  CHECK_THROWS_AS(ExhaustiveBackend{}.enumerate(q), Error);
}

TEST_CASE("exhaustive backend matches brute force") {
  test::QueryGen gen(11);
  ExhaustiveBackend b;
  for (int i = 0; i < 300; ++i) {
    const std::size_t num = i % 3 == 0 ? 1 + i % 5 : 4096;
    auto q = gen.query(12, num);
    check_against(b.enumerate(q), test::brute_force(q), num);
  }
}

TEST_CASE("SAT enumeration with a reference DPLL solver matches brute force") {
  test::QueryGen gen(12);
  auto b = test::dpll_backend();
  for (int i = 0; i < 120; ++i) {
    const std::size_t num = i % 4 == 0 ? 2 : 4096;
    auto q = gen.query(7, num);
    check_against(b->enumerate(q), test::brute_force(q), num);
  }
}

TEST_CASE("SAT enumeration with the IPASIR library matches brute force") {
  auto b = test::ipasir_backend();
  if (!b) {
    MESSAGE("WFG_IPASIR_LIB unset; skipped");
    return;
  }
  test::QueryGen gen(13);
  for (int i = 0; i < 300; ++i) {
    const std::size_t num = i % 5 == 0 ? 3 : 4096;
    auto q = gen.query(14, num);
    check_against(b->enumerate(q), test::brute_force(q), num);
  }
}

TEST_CASE("bit-blasted circuit decodes inputs and terms") {
  const auto s = Sort::record("pair", {{"x", Sort::nat(2)}, {"f", Sort::boolean()}});
  const auto p = ex::var("p", s);
  auto c = bitblast(ex::field(p, "x"), ex::field(p, "f"), {{"p", s}});
  CHECK(c.inputs.size() == 1);
  CHECK(c.inputs[0].second.size() == 2);
  CHECK(c.output_widths == std::vector<unsigned>{2});
  std::vector<bool> a(static_cast<std::size_t>(c.num_vars) + 1, false);
  // x = 2, f = t
  a[static_cast<std::size_t>(c.inputs[0].second[0][1])] = true;
  a[static_cast<std::size_t>(c.inputs[0].second[1][0])] = true;
  CHECK(decode_input(c, 0, s, a).field("x").as_nat() == 2);
  const auto dimacs = to_dimacs(c);
  CHECK(dimacs.rfind("p cnf " + std::to_string(c.num_vars) + " ", 0) == 0);
}

TEST_CASE("enum inputs are restricted to their symbols") {
  const auto color = Sort::enumeration("color", {"red", "green", "blue"});
  const auto v = ex::var("c", color);
  Query q{v, ex::boolean(true), {{"c", color}}, 10};
  auto r = test::dpll_backend()->enumerate(q);
  CHECK(r.is_total);
  CHECK(r.values.size() == 3);
}

TEST_CASE("dumping backend writes one CNF per query") {
  const auto dir = std::filesystem::temp_directory_path() / "wfg-dump-test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ExhaustiveBackend inner;
  DumpingBackend b(inner, dir.string());
  const auto x = ex::var("x", Sort::nat(2));
  b.enumerate(Query{x, ex::boolean(true), {{"x", Sort::nat(2)}}, 8});
  b.enumerate(Query{x, ex::boolean(false), {{"x", Sort::nat(2)}}, 8});
  CHECK(std::filesystem::exists(dir / "query-00000.cnf"));
  CHECK(std::filesystem::exists(dir / "query-00001.cnf"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown backend names are rejected") {
  CHECK_THROWS_AS(make_backend("minisat"), Error);
}

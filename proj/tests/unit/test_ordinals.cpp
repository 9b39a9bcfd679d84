#include "support.hpp"

#include "wfg/error.hpp"
#include "wfg/ordinals.hpp"

#include <doctest.h>

#include <map>

using namespace wfg;

namespace {

// Every bnl of length `bound` with entries below `base`.
std::vector<Bnl> all_bnls(std::size_t bound, std::uint64_t base) {
  std::vector<Bnl> out{Bnl(bound, 0)};
  for (;;) {
    Bnl next = out.back();
    std::size_t k = bound;
    while (k > 0 && ++next[k - 1] == base) next[--k] = 0;
    if (k == 0) break;
    out.push_back(next);
  }
  return out;
}

Ordinal omega_pow(std::uint64_t e, std::uint64_t c = 1) { return Ordinal{{{e, c}}}; }

} // namespace

TEST_CASE("bnl comparison") {
  CHECK(bnl_lt({1, 5}, {2, 0}));
  CHECK_FALSE(bnl_lt({2, 0}, {2, 0}));
  CHECK(bnl_le({2, 0}, {2, 0}));
  CHECK(bnl_le({0, 0, 0}, {0, 0, 1}));
  CHECK_THROWS_AS(bnl_lt({1}, {1, 0}), Error);
}

TEST_CASE("bnll comparison is length dominant") {
  CHECK(bnll_lt({}, {{0, 0}}));
  CHECK(bnll_lt({{1, 0}, {0, 9}}, {{1, 0}, {1, 0}}));
  CHECK(bnll_lt({{5, 5}}, {{0, 0}, {0, 0}}));
  CHECK_FALSE(bnll_lt({{0, 0}, {0, 0}}, {{5, 5}}));
  CHECK_THROWS_AS(bnll_lt({{1}}, {{1, 0}}), Error);
}

TEST_CASE("bnl to ordinal") {
  CHECK(bnl_to_o({0, 0, 0}).terms.empty());
  CHECK(to_string(bnl_to_o({0, 0, 0})) == "0");
  CHECK(to_string(bnl_to_o({2, 1, 3})) == "w^2*2 + w*1 + 3");
  CHECK(bnll_to_o(2, {{1, 0}, {0, 2}}) == Ordinal{{{3, 1}, {0, 2}}});
  CHECK_THROWS_AS(bnll_to_o(3, {{1, 0}}), Error);
}

TEST_CASE("ordinal comparison and well-formedness") {
  CHECK(o_lt(Ordinal{}, omega_pow(1)));
  CHECK(o_lt(Ordinal{{{1, 2}, {0, 1}}}, omega_pow(1, 3)));
  CHECK_FALSE(o_lt(omega_pow(1, 3), omega_pow(1, 3)));
  CHECK(o_p(Ordinal{{{2, 1}, {0, 4}}}));
  CHECK_FALSE(o_p(Ordinal{{{0, 1}, {2, 1}}}));
  CHECK_FALSE(o_p(Ordinal{{{1, 0}}}));
}

TEST_CASE("bnl order embeds into the ordinals") {
  for (std::size_t bound = 1; bound <= 3; ++bound) {
    const auto xs = all_bnls(bound, 4);
    std::size_t pairs = 0;
    for (const auto& a : xs) {
      CHECK(o_p(bnl_to_o(a)));
      for (const auto& b : xs) {
        REQUIRE(bnl_lt(a, b) == o_lt(bnl_to_o(a), bnl_to_o(b)));
        ++pairs;
      }
    }
    if (bound == 3) CHECK(pairs == 4096);
  }
}

TEST_CASE("bnll order embeds at a fixed length and across lengths") {
  for (std::size_t bound = 1; bound <= 2; ++bound) {
    const auto xs = all_bnls(bound, 4);
    std::vector<Bnll> lists{{}};
    for (const auto& a : xs) lists.push_back({a});
    for (const auto& a : xs)
      for (const auto& b : xs) lists.push_back({a, b});
    for (const auto& a : lists) {
      for (const auto& b : lists) {
        const bool lt = bnll_lt(a, b);
        REQUIRE(lt == o_lt(bnll_to_o_graded(a, bound), bnll_to_o_graded(b, bound)));
        if (a.size() == b.size()) REQUIRE(lt == o_lt(bnll_to_o(a.size(), a), bnll_to_o(b.size(), b)));
      }
    }
  }
}

TEST_CASE("descending chains at tiny bounds are finite") {
  // Longest strictly descending chain from the top bnl, by dynamic programming
  // over the ascending enumeration; it equals the number of smaller bnls.
  const auto xs = all_bnls(2, 3);
  std::vector<std::size_t> longest(xs.size(), 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (bnl_lt(xs[j], xs[i])) longest[i] = std::max(longest[i], longest[j] + 1);
    }
  }
  CHECK(longest.back() == xs.size() - 1);
}

TEST_CASE("bnl bound of an omap") {
  Omap one{{Value::nat(0, 8), Descriptor{1u, 0u}}};
  CHECK(bnl_bnd(one, {}) == 2);
  Omap wide{{Value::nat(0, 8), Descriptor{std::string("o"), 0u}}};
  CHECK(bnl_bnd(wide, {{"o", 3}}) == 4);
  CHECK_THROWS_AS(bnl_bnd(wide, {}), Error);
}

TEST_CASE("mk-bnl expands and pads") {
  const Descriptor d{4u, std::string("runs"), 4u, std::string("loop"), 4u, 0u};
  auto ord = [](const std::string& name) -> std::vector<std::uint64_t> {
    return name == "runs" ? std::vector<std::uint64_t>{1} : std::vector<std::uint64_t>{2};
  };
  CHECK(mk_bnl(d, ord, 6) == Bnl{4, 1, 4, 2, 4, 0});
  CHECK(mk_bnl(Descriptor{1u, 0u}, ord, 6) == Bnl{1, 0, 0, 0, 0, 0});
  CHECK(msr(Descriptor{1u, 0u}, ord, 6) == omega_pow(5));
  CHECK(to_string(msr(Descriptor{1u, 0u}, ord, 6)) == "w^5*1");
  CHECK_THROWS_AS(mk_bnl(d, ord, 5), Error);
}

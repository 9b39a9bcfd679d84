#include "support.hpp"

#include "wfg/error.hpp"
#include "wfg/sexpr.hpp"

#include <doctest.h>

using namespace wfg;

TEST_CASE("reader folds case and keeps positions") {
  auto forms = read_sexprs("(Foo :Bar 12\n  (baz))");
  REQUIRE(forms.size() == 1);
  const auto& f = forms[0];
  CHECK(f.is_form("foo"));
  CHECK(f.items[1].is_keyword());
  CHECK(f.items[1].text == "bar");
  CHECK(f.items[2].integer == 12);
  CHECK(f.items[3].line == 2);
  CHECK(f.items[3].column == 3);
  CHECK(to_string(f) == "(foo :bar 12 (baz))");
}

TEST_CASE("reader skips comments") {
  auto forms = read_sexprs("; header\n(a ; inline\n b)\n");
  REQUIRE(forms.size() == 1);
  CHECK(forms[0].items.size() == 2);
}

TEST_CASE("reader errors carry line and column") {
  try {
    read_sexprs("(a\n  (b c)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
    CHECK(std::string(e.what()).find(':') != std::string::npos);
  }
  CHECK_THROWS_AS(read_sexprs("(a))"), ParseError);
  try {
    read_sexprs("(a\n   ))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("pretty printing round-trips") {
  auto forms = read_sexprs("(define f ((a (nat 3)) (b bool)) bool (and b (= a 1) (< a 2) (<= a 3) (not b) (or b b)))");
  const auto text = pretty(forms[0], 30);
  CHECK(text.find('\n') != std::string::npos);
  CHECK(read_sexprs(text) == forms);
}

TEST_CASE("shipped model loads with its parameters") {
  auto m = test::bakery();
  CHECK(m.name() == "bakery");
  CHECK(m.param("n") == 2);
  CHECK(m.param("r") == 2);
  CHECK(m.param("w") == 3);
  CHECK(m.maps().size() == 2);
  CHECK(m.map("rank").relation == RelationKind::Step);
  CHECK(m.map("nlock").relation == RelationKind::Blok);
  CHECK(m.map("nlock").invariant == "nlock-inv");
  const auto& s = m.state_sort();
  CHECK(s->fields().at(*s->field_index("temp")).sort->width() == 3);
  CHECK(m.map("rank").measures.at(0).name == "runs");
}

TEST_CASE("parameter overrides resize sorts") {
  auto m = test::bakery({{"w", 2}, {"n", 3}});
  const auto& s = m.state_sort();
  CHECK(s->fields().at(*s->field_index("pos")).sort->width() == 2);
  CHECK(s->fields().at(*s->field_index("ndx")).sort->width() == 2);
  CHECK(m.param("n") == 3);
  CHECK_THROWS_AS(test::bakery({{"nope", 1}}), Error);
}

TEST_CASE("canonical text reparses to itself") {
  auto m = test::bakery({{"r", 1}});
  auto again = parse_model(m.canonical_text());
  CHECK(again.canonical_text() == m.canonical_text());
  CHECK(again.param("r") == 1);
}

namespace {

const char* kSmall = R"((model small
  (param w 2)
  (record st (x (nat w)) (done bool))
  (record sh (m (nat w)))
  (state st)
  (shared sh)
  (define nx ((a st) (s sh)) st (update a :x (+ a.x 1) :done (= a.x 3)))
  (define snx ((s sh) (a st)) sh s)
  (define dn ((a st)) bool a.done)
  (next nx)
  (shared-next snx)
  (done dn)
  (init () t (make st :x 0 :done nil))
  (map m (a) :node (tuple (:x a.x)) :measures ((x a.x)) :relation step)))";

std::string with(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

} // namespace

TEST_CASE("small model elaborates") {
  auto m = parse_model(kSmall);
  CHECK(m.functions().size() == 3);
  CHECK(m.role("blok") == std::nullopt);
  CHECK(m.maps().at(0).measures.at(0).components.size() == 1);
}

TEST_CASE("sort errors") {
  CHECK_THROWS_AS(parse_model(with(kSmall, "(x (nat w))", "(x (nat q))")), Error);
  CHECK_THROWS_AS(parse_model(with(kSmall, "(= a.x 3)", "(= a.x a.done)")), SortError);
  CHECK_THROWS_AS(parse_model(with(kSmall, "(state st)", "(state nosuch)")), SortError);
  CHECK_THROWS_AS(parse_model(with(kSmall, "(define dn", "(define nx")), SortError);
  CHECK_THROWS_AS(parse_model(with(kSmall, "a.done)\n", "a.nosuch)\n")), SortError);
}

TEST_CASE("syntax errors in models report a position") {
  try {
    parse_model(with(kSmall, "(shared sh)", "(shared sh"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
  }
}

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wfg {

/// One node of the s-expression syntax tree. Symbols and keywords are
/// case-folded to lower case by the reader.
struct SExpr {
  enum class Kind { Symbol, Keyword, Integer, List };

  Kind kind = Kind::List;
  std::string text;           // symbol name, keyword name without ':'
  std::uint64_t integer = 0;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_keyword() const { return kind == Kind::Keyword; }
  bool is_integer() const { return kind == Kind::Integer; }
  bool is_list() const { return kind == Kind::List; }
  /// True for a non-empty list whose head is the symbol `head`.
  bool is_form(std::string_view head) const;

  static SExpr symbol(std::string name);
  static SExpr keyword(std::string name);
  static SExpr number(std::uint64_t v);
  static SExpr list(std::vector<SExpr> items);

  friend bool operator==(const SExpr& a, const SExpr& b);
};

/// Reads every top-level form. Throws ParseError with line/column.
std::vector<SExpr> read_sexprs(std::string_view text);

/// Single-line rendering.
std::string to_string(const SExpr& e);

/// Canonical multi-line rendering: a list that fits in `width` columns is
/// printed flat, otherwise its head stays on the first line and each child
/// goes on its own line indented by two spaces.
std::string pretty(const SExpr& e, std::size_t width = 80);

} // namespace wfg

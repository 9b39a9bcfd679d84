#pragma once

#include "wfg/sexpr.hpp"
#include "wfg/sort.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wfg {

/// A concrete value of some Sort. Values have a canonical strict total order
/// (by kind, then content) used wherever a set of values is listed.
class Value {
public:
  Value() : Value(boolean(false)) {}

  static Value boolean(bool b);
  static Value nat(std::uint64_t v, unsigned width);
  static Value enumeration(SortPtr sort, std::size_t code);
  static Value tuple(SortPtr sort, std::vector<Value> items);
  static Value record(SortPtr sort, std::vector<Value> fields);
  /// Builds a keyword tuple and its sort from (keyword, value) pairs.
  static Value make_tuple(std::vector<std::pair<std::string, Value>> items);

  SortKind kind() const noexcept { return sort_->kind(); }
  const SortPtr& sort() const noexcept { return sort_; }

  bool as_bool() const;
  std::uint64_t as_nat() const;
  std::size_t enum_code() const;
  const std::string& enum_symbol() const;
  const std::vector<Value>& items() const noexcept { return items_; }
  const Value& field(std::string_view name) const;

  /// Encoding of a scalar as an unsigned integer (bool 0/1, nat value, enum code).
  std::uint64_t scalar() const noexcept { return bits_; }

  /// Canonical Lisp-style text, e.g. ((:LOC 0) (:DONE NIL)).
  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

private:
  Value(SortPtr sort, std::uint64_t bits) : sort_(std::move(sort)), bits_(bits) {}

  SortPtr sort_;
  std::uint64_t bits_ = 0;
  std::vector<Value> items_;
};

/// Variable bindings for evaluation.
using Env = std::map<std::string, Value, std::less<>>;

/// Flattens a value into its scalar leaves (see Sort::scalar_leaves).
void append_scalars(const Value& v, std::vector<std::uint64_t>& out);
/// Rebuilds a value of `sort` from scalar leaves. Throws Error if a scalar is
/// out of its sort's range.
Value value_from_scalars(const SortPtr& sort, std::span<const std::uint64_t> scalars);

/// Parses the canonical text form (as produced by to_string) against a sort.
Value parse_value(const SExpr& e, const SortPtr& sort);
Value parse_value(std::string_view text, const SortPtr& sort);

/// Lower-cased Lisp-style upper-casing helper used by printers.
std::string upcase(std::string_view s);

} // namespace wfg

#include "wfg/value.hpp"

#include "wfg/error.hpp"

#include <algorithm>
#include <cctype>

namespace wfg {

Value Value::boolean(bool b) {
  Value v(Sort::boolean(), b ? 1u : 0u);
  return v;
}

Value Value::nat(std::uint64_t x, unsigned width) {
  if (width < 1 || width > Sort::kMaxNatWidth) throw SortError("bad nat width " + std::to_string(width));
  if (width < 64 && (x >> width) != 0) {
    throw SortError("natural " + std::to_string(x) + " does not fit in " + std::to_string(width) + " bits");
  }
  return Value(Sort::nat(width), x);
}

Value Value::enumeration(SortPtr sort, std::size_t code) {
  if (!sort || sort->kind() != SortKind::Enum) throw SortError("enum value needs an enum sort");
  if (code >= sort->symbols().size()) throw SortError("enum code out of range for " + sort->name());
  return Value(std::move(sort), code);
}

Value Value::tuple(SortPtr sort, std::vector<Value> items) {
  if (!sort || sort->kind() != SortKind::Tuple) throw SortError("tuple value needs a tuple sort");
  if (items.size() != sort->fields().size()) throw SortError("tuple arity mismatch");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!same_sort(items[i].sort(), sort->fields()[i].sort)) {
      throw SortError("tuple item '" + sort->fields()[i].name + "' has the wrong sort");
    }
  }
  Value v(std::move(sort), 0);
  v.items_ = std::move(items);
  return v;
}

Value Value::record(SortPtr sort, std::vector<Value> fields) {
  if (!sort || sort->kind() != SortKind::Record) throw SortError("record value needs a record sort");
  if (fields.size() != sort->fields().size()) throw SortError("record arity mismatch for " + sort->name());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (!same_sort(fields[i].sort(), sort->fields()[i].sort)) {
      throw SortError("record field '" + sort->fields()[i].name + "' has the wrong sort");
    }
  }
  Value v(std::move(sort), 0);
  v.items_ = std::move(fields);
  return v;
}

Value Value::make_tuple(std::vector<std::pair<std::string, Value>> items) {
  std::vector<Field> fields;
  std::vector<Value> values;
  for (auto& [k, v] : items) {
    fields.push_back({k, v.sort()});
    values.push_back(std::move(v));
  }
  return tuple(Sort::tuple(std::move(fields)), std::move(values));
}

bool Value::as_bool() const {
  if (kind() != SortKind::Bool) throw SortError("expected bool value, got " + to_string());
  return bits_ != 0;
}

std::uint64_t Value::as_nat() const {
  if (kind() != SortKind::Nat) throw SortError("expected nat value, got " + to_string());
  return bits_;
}

std::size_t Value::enum_code() const {
  if (kind() != SortKind::Enum) throw SortError("expected enum value, got " + to_string());
  return static_cast<std::size_t>(bits_);
}

const std::string& Value::enum_symbol() const { return sort_->symbols().at(enum_code()); }

const Value& Value::field(std::string_view name) const {
  auto idx = sort_->field_index(name);
  if (!idx) throw SortError("no field '" + std::string(name) + "' in " + to_string());
  return items_[*idx];
}

std::string upcase(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string Value::to_string() const {
  switch (kind()) {
  case SortKind::Bool: return bits_ ? "T" : "NIL";
  case SortKind::Nat: return std::to_string(bits_);
  case SortKind::Enum: return upcase(enum_symbol());
  case SortKind::Tuple:
  case SortKind::Record: {
    std::string s = "(";
    bool first = true;
    if (kind() == SortKind::Record) {
      s += upcase(sort_->name());
      first = false;
    }
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (!first) s += ' ';
      first = false;
      const auto& key = sort_->fields()[i].name;
      if (key.empty()) {
        s += items_[i].to_string();
      } else {
        s += "(:" + upcase(key) + " " + items_[i].to_string() + ")";
      }
    }
    return s + ")";
  }
  }
  return "?";
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
  case SortKind::Bool: return a.bits_ <=> b.bits_;
  case SortKind::Nat:
    if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
    return a.sort_->width() <=> b.sort_->width();
  case SortKind::Enum:
    if (auto c = a.sort_->name() <=> b.sort_->name(); c != 0) return c;
    if (auto c = a.bits_ <=> b.bits_; c != 0) return c;
    return a.sort_->symbols() <=> b.sort_->symbols();
  case SortKind::Tuple:
  case SortKind::Record: {
    if (auto c = a.sort_->name() <=> b.sort_->name(); c != 0) return c;
    const std::size_t n = std::min(a.items_.size(), b.items_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a.items_[i] <=> b.items_[i]; c != 0) return c;
    }
    if (auto c = a.items_.size() <=> b.items_.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.items_.size(); ++i) {
      if (auto c = a.sort_->fields()[i].name <=> b.sort_->fields()[i].name; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  }
  return std::strong_ordering::equal;
}

void append_scalars(const Value& v, std::vector<std::uint64_t>& out) {
  if (v.sort()->is_scalar()) {
    out.push_back(v.scalar());
    return;
  }
  for (const auto& item : v.items()) append_scalars(item, out);
}

namespace {

Value build(const SortPtr& sort, std::span<const std::uint64_t> scalars, std::size_t& pos) {
  switch (sort->kind()) {
  case SortKind::Bool: {
    auto x = scalars[pos++];
    if (x > 1) throw Error("bool scalar out of range: " + std::to_string(x));
    return Value::boolean(x != 0);
  }
  case SortKind::Nat: return Value::nat(scalars[pos++], sort->width());
  case SortKind::Enum: {
    auto x = scalars[pos++];
    if (x >= sort->symbols().size()) {
      throw Error("enum code " + std::to_string(x) + " out of range for sort " + sort->name());
    }
    return Value::enumeration(sort, static_cast<std::size_t>(x));
  }
  case SortKind::Tuple:
  case SortKind::Record: {
    std::vector<Value> items;
    items.reserve(sort->fields().size());
    for (const auto& f : sort->fields()) items.push_back(build(f.sort, scalars, pos));
    return sort->kind() == SortKind::Tuple ? Value::tuple(sort, std::move(items))
                                           : Value::record(sort, std::move(items));
  }
  }
  throw Error("unreachable");
}

[[noreturn]] void value_error(const SExpr& e, const std::string& msg) {
  throw ParseError(msg, e.line, e.column);
}

} // namespace

Value value_from_scalars(const SortPtr& sort, std::span<const std::uint64_t> scalars) {
  if (scalars.size() != sort->scalar_count()) throw Error("scalar count mismatch for " + sort->to_string());
  std::size_t pos = 0;
  return build(sort, scalars, pos);
}

Value parse_value(const SExpr& e, const SortPtr& sort) {
  switch (sort->kind()) {
  case SortKind::Bool:
    if (e.is_symbol("t") || e.is_symbol("true")) return Value::boolean(true);
    if (e.is_symbol("nil") || e.is_symbol("false")) return Value::boolean(false);
    value_error(e, "expected boolean, got " + to_string(e));
  case SortKind::Nat:
    if (!e.is_integer()) value_error(e, "expected natural, got " + to_string(e));
    if (sort->width() < 64 && (e.integer >> sort->width()) != 0) value_error(e, "natural out of range");
    return Value::nat(e.integer, sort->width());
  case SortKind::Enum: {
    if (!e.is_symbol()) value_error(e, "expected enum symbol");
    auto idx = sort->symbol_index(e.text);
    if (!idx) value_error(e, "unknown symbol '" + e.text + "' for enum " + sort->name());
    return Value::enumeration(sort, *idx);
  }
  case SortKind::Tuple:
  case SortKind::Record: {
    if (!e.is_list()) value_error(e, "expected list for " + sort->to_string());
    std::size_t start = 0;
    if (sort->kind() == SortKind::Record) {
      if (e.items.empty() || !e.items[0].is_symbol(sort->name())) value_error(e, "expected record " + sort->name());
      start = 1;
    }
    if (e.items.size() - start != sort->fields().size()) value_error(e, "arity mismatch for " + sort->to_string());
    std::vector<Value> items;
    for (std::size_t i = 0; i < sort->fields().size(); ++i) {
      const auto& f = sort->fields()[i];
      const SExpr& item = e.items[start + i];
      if (f.name.empty()) {
        items.push_back(parse_value(item, f.sort));
        continue;
      }
      if (!item.is_list() || item.items.size() != 2 || !item.items[0].is_keyword() || item.items[0].text != f.name) {
        value_error(item, "expected (:" + f.name + " <value>)");
      }
      items.push_back(parse_value(item.items[1], f.sort));
    }
    return sort->kind() == SortKind::Tuple ? Value::tuple(sort, std::move(items))
                                           : Value::record(sort, std::move(items));
  }
  }
  throw Error("unreachable");
}

Value parse_value(std::string_view text, const SortPtr& sort) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1) throw ParseError("expected exactly one value", 1, 1);
  return parse_value(forms.front(), sort);
}

} // namespace wfg

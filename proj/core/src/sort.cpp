#include "wfg/sort.hpp"

#include "wfg/error.hpp"

#include <set>

namespace wfg {

SortPtr Sort::boolean() {
  static const SortPtr instance = [] {
    auto s = std::shared_ptr<Sort>(new Sort());
    s->kind_ = SortKind::Bool;
    return SortPtr(s);
  }();
  return instance;
}

SortPtr Sort::nat(unsigned width) {
  if (width < 1 || width > kMaxNatWidth) {
    throw SortError("nat width must be in [1, " + std::to_string(kMaxNatWidth) + "], got " +
                    std::to_string(width));
  }
  static const std::vector<SortPtr> cache = [] {
    std::vector<SortPtr> v(kMaxNatWidth + 1);
    for (unsigned w = 1; w <= kMaxNatWidth; ++w) {
      auto s = std::shared_ptr<Sort>(new Sort());
      s->kind_ = SortKind::Nat;
      s->width_ = w;
      v[w] = s;
    }
    return v;
  }();
  return cache[width];
}

SortPtr Sort::enumeration(std::string name, std::vector<std::string> symbols) {
  if (symbols.empty()) throw SortError("enum sort '" + name + "' has no symbols");
  std::set<std::string> seen;
  for (const auto& sym : symbols) {
    if (!seen.insert(sym).second) throw SortError("enum sort '" + name + "' repeats symbol '" + sym + "'");
  }
  auto s = std::shared_ptr<Sort>(new Sort());
  s->kind_ = SortKind::Enum;
  s->name_ = std::move(name);
  s->symbols_ = std::move(symbols);
  return s;
}

namespace {

std::size_t count_leaves(const std::vector<Field>& fields) {
  std::size_t n = 0;
  for (const auto& f : fields) n += f.sort->scalar_count();
  return n;
}

void check_distinct(const std::vector<Field>& fields, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& f : fields) {
    if (!f.sort) throw SortError(what + ": field '" + f.name + "' has no sort");
    if (!f.name.empty() && !seen.insert(f.name).second) {
      throw SortError(what + ": duplicate field '" + f.name + "'");
    }
  }
}

} // namespace

SortPtr Sort::tuple(std::vector<Field> items) {
  check_distinct(items, "tuple");
  auto s = std::shared_ptr<Sort>(new Sort());
  s->kind_ = SortKind::Tuple;
  s->scalar_count_ = count_leaves(items);
  s->fields_ = std::move(items);
  return s;
}

SortPtr Sort::record(std::string name, std::vector<Field> fields) {
  if (fields.empty()) throw SortError("record '" + name + "' has no fields");
  check_distinct(fields, "record '" + name + "'");
  auto s = std::shared_ptr<Sort>(new Sort());
  s->kind_ = SortKind::Record;
  s->name_ = std::move(name);
  s->scalar_count_ = count_leaves(fields);
  s->fields_ = std::move(fields);
  return s;
}

std::optional<std::size_t> Sort::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Sort::symbol_index(std::string_view sym) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == sym) return i;
  }
  return std::nullopt;
}

std::size_t Sort::scalar_offset(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < i; ++k) off += fields_[k].sort->scalar_count();
  return off;
}

void Sort::scalar_leaves(std::vector<SortPtr>& out) const {
  if (is_scalar()) {
    out.push_back(shared_from_this());
    return;
  }
  for (const auto& f : fields_) {
    if (f.sort->is_scalar()) {
      out.push_back(f.sort);
    } else {
      f.sort->scalar_leaves(out);
    }
  }
}

unsigned Sort::bit_width() const {
  switch (kind_) {
  case SortKind::Bool: return 1;
  case SortKind::Nat: return width_;
  case SortKind::Enum: return symbols_.size() <= 1 ? 1 : bits_for(symbols_.size() - 1);
  default: throw SortError("bit_width of non-scalar sort " + to_string());
  }
}

std::uint64_t Sort::domain_size() const {
  switch (kind_) {
  case SortKind::Bool: return 2;
  case SortKind::Nat: return std::uint64_t{1} << width_;
  case SortKind::Enum: return symbols_.size();
  default: throw SortError("domain_size of non-scalar sort " + to_string());
  }
}

std::string Sort::to_string() const {
  switch (kind_) {
  case SortKind::Bool: return "bool";
  case SortKind::Nat: return "(nat " + std::to_string(width_) + ")";
  case SortKind::Enum: {
    std::string s = "(enum";
    for (const auto& sym : symbols_) s += " " + sym;
    return s + ")";
  }
  case SortKind::Tuple: {
    std::string s = "(tuple";
    for (const auto& f : fields_) s += " (:" + f.name + " " + f.sort->to_string() + ")";
    return s + ")";
  }
  case SortKind::Record: return name_;
  }
  return "?";
}

bool same_sort(const Sort& a, const Sort& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
  case SortKind::Bool: return true;
  case SortKind::Nat: return a.width() == b.width();
  case SortKind::Enum: return a.name() == b.name() && a.symbols() == b.symbols();
  case SortKind::Tuple:
  case SortKind::Record:
    if (a.name() != b.name() || a.fields().size() != b.fields().size()) return false;
    for (std::size_t i = 0; i < a.fields().size(); ++i) {
      if (a.fields()[i].name != b.fields()[i].name) return false;
      if (!same_sort(*a.fields()[i].sort, *b.fields()[i].sort)) return false;
    }
    return true;
  }
  return false;
}

unsigned bits_for(std::uint64_t v) {
  unsigned n = 1;
  while (n < 64 && (v >> n) != 0) ++n;
  return n;
}

} // namespace wfg

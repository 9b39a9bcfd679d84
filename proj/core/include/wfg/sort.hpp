#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wfg {

class Sort;
using SortPtr = std::shared_ptr<const Sort>;

enum class SortKind { Bool, Nat, Enum, Tuple, Record };

struct Field {
  std::string name;
  SortPtr sort;
};

/// Finite sorts of the model language. Scalars are Bool, Nat (fixed bit
/// width) and Enum; Tuple (keyword-labelled) and Record are products.
class Sort : public std::enable_shared_from_this<Sort> {
public:
  static constexpr unsigned kMaxNatWidth = 32;

  static SortPtr boolean();
  static SortPtr nat(unsigned width);
  static SortPtr enumeration(std::string name, std::vector<std::string> symbols);
  static SortPtr tuple(std::vector<Field> items);
  static SortPtr record(std::string name, std::vector<Field> fields);

  SortKind kind() const noexcept { return kind_; }
  bool is_scalar() const noexcept { return kind_ == SortKind::Bool || kind_ == SortKind::Nat || kind_ == SortKind::Enum; }

  unsigned width() const noexcept { return width_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  const std::vector<Field>& fields() const noexcept { return fields_; }

  std::optional<std::size_t> field_index(std::string_view name) const;
  std::optional<std::size_t> symbol_index(std::string_view sym) const;

  /// Number of scalar leaves in the flattened sort.
  std::size_t scalar_count() const noexcept { return scalar_count_; }
  /// Offset of field `i` among the scalar leaves.
  std::size_t scalar_offset(std::size_t i) const;
  /// Scalar leaves in flattening order (record/tuple fields depth first).
  void scalar_leaves(std::vector<SortPtr>& out) const;

  /// Bits used to encode a scalar (Bool 1, Nat width, Enum ceil(log2 n)).
  unsigned bit_width() const;
  /// Number of values of a scalar sort.
  std::uint64_t domain_size() const;

  std::string to_string() const;

private:
  Sort() = default;

  SortKind kind_ = SortKind::Bool;
  unsigned width_ = 0;
  std::string name_;
  std::vector<std::string> symbols_;
  std::vector<Field> fields_;
  std::size_t scalar_count_ = 1;
};

bool same_sort(const Sort& a, const Sort& b);
inline bool same_sort(const SortPtr& a, const SortPtr& b) { return a == b || same_sort(*a, *b); }

/// Minimum number of bits needed to write `v` (at least 1).
unsigned bits_for(std::uint64_t v);

/// Free variables of a query together with their sorts, in declaration order.
using VarDecls = std::vector<std::pair<std::string, SortPtr>>;

} // namespace wfg

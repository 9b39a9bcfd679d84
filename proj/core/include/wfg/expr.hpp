#pragma once

#include "wfg/sort.hpp"
#include "wfg/value.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace wfg {

enum class Op {
  Var,
  Const,
  Field,   // args[0].field(index)
  Update,  // args[0] with fields `indices` replaced by args[1..]
  Make,    // record constructor, args in field order
  Tuple,   // keyword tuple constructor, args in item order
  Ite,
  Case,    // args[0] scrutinee, args[1..k] arms (keys per arm), args.back() default
  Eq,
  Lt,
  Le,
  Add,     // wrap-around addition within the operands' width
  Sub,     // subtraction floored at 0
  Not,
  And,
  Or,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// A well-sorted expression. Instances are immutable and only built through
/// the checked constructors in namespace `ex`.
class Expr {
public:
  Op op() const noexcept { return op_; }
  const SortPtr& sort() const noexcept { return sort_; }
  const std::string& name() const noexcept { return name_; }
  const Value& constant() const noexcept { return constant_; }
  const std::vector<ExprPtr>& args() const noexcept { return args_; }
  /// Field index for Field; updated field indices for Update.
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  /// Key sets of the keyed arms of a Case.
  const std::vector<std::vector<std::uint64_t>>& case_keys() const noexcept { return case_keys_; }

  struct Init;
  explicit Expr(Init init);

private:
  Op op_;
  SortPtr sort_;
  std::string name_;
  Value constant_;
  std::vector<ExprPtr> args_;
  std::vector<std::size_t> indices_;
  std::vector<std::vector<std::uint64_t>> case_keys_;
};

struct Expr::Init {
  Op op;
  SortPtr sort;
  std::string name;
  Value constant;
  std::vector<ExprPtr> args;
  std::vector<std::size_t> indices;
  std::vector<std::vector<std::uint64_t>> case_keys;
};

namespace ex {

ExprPtr var(std::string name, SortPtr sort);
ExprPtr constant(Value v);
ExprPtr boolean(bool b);
ExprPtr nat(std::uint64_t v, unsigned width);
ExprPtr field(ExprPtr record, std::string_view name);
ExprPtr update(ExprPtr record, std::vector<std::pair<std::string, ExprPtr>> changes);
ExprPtr make(SortPtr record_sort, std::vector<ExprPtr> fields);
ExprPtr tuple(std::vector<std::pair<std::string, ExprPtr>> items);
ExprPtr ite(ExprPtr c, ExprPtr a, ExprPtr b);
ExprPtr case_nat(ExprPtr scrutinee, std::vector<std::pair<std::vector<std::uint64_t>, ExprPtr>> arms,
                 ExprPtr otherwise);
ExprPtr eq(ExprPtr a, ExprPtr b);
ExprPtr lt(ExprPtr a, ExprPtr b);
ExprPtr le(ExprPtr a, ExprPtr b);
inline ExprPtr gt(ExprPtr a, ExprPtr b) { return lt(std::move(b), std::move(a)); }
inline ExprPtr ge(ExprPtr a, ExprPtr b) { return le(std::move(b), std::move(a)); }
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr not_(ExprPtr a);
ExprPtr and_(std::vector<ExprPtr> xs);
ExprPtr or_(std::vector<ExprPtr> xs);
ExprPtr implies(ExprPtr a, ExprPtr b);
ExprPtr iff(ExprPtr a, ExprPtr b);

/// Strict / non-strict lexicographic comparison of equal-length natural
/// tuples given as component lists, leftmost significant.
ExprPtr lex_lt(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b);
ExprPtr lex_le(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b);

} // namespace ex

std::set<std::string> free_vars(const ExprPtr& e);

/// Replaces free variables by expressions of the same sort.
ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& subst);

/// Renders in the surface syntax of the model language.
std::string to_string(const ExprPtr& e);

/// Structural equality (sorts, operators, constants, variable names).
bool same_expr(const ExprPtr& a, const ExprPtr& b);

} // namespace wfg

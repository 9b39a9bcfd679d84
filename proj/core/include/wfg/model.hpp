#pragma once

#include "wfg/expr.hpp"
#include "wfg/sexpr.hpp"
#include "wfg/sort.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wfg {

struct FunctionDef {
  std::string name;
  VarDecls params;
  SortPtr result;
  ExprPtr body;
};

struct InitDecl {
  VarDecls vars;
  ExprPtr hyp;
  ExprPtr term;  // state-sorted
};

struct InvariantDecl {
  std::string name;
  std::string var;                    // bound state variable
  std::vector<ExprPtr> split;         // extra node fields for the invariant reach graph
  ExprPtr body;
};

struct MeasureDecl {
  std::string name;
  std::vector<ExprPtr> components;    // natural tuple, leftmost significant
};

enum class RelationKind {
  Step,  // y = next(x, sh) and not done(x); graph by reachability from init
  Blok,  // blok(x, y) and inv(x) and inv(y); graph over the invariant domain
};

struct MapDecl {
  std::string name;
  std::string var;                    // bound state variable
  ExprPtr node;                       // tuple-sorted abstraction of `var`
  std::vector<MeasureDecl> measures;  // declaration order is the synthesis search order
  RelationKind relation = RelationKind::Step;
  std::string invariant;              // Blok only
};

/// A parsed and sort-checked model.
class Model {
public:
  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, std::int64_t>& params() const noexcept { return params_; }
  std::int64_t param(std::string_view name) const;
  const SortPtr& state_sort() const noexcept { return state_sort_; }
  const SortPtr& shared_sort() const noexcept { return shared_sort_; }
  const std::map<std::string, SortPtr>& sorts() const noexcept { return sorts_; }

  const FunctionDef& function(std::string_view name) const;
  bool has_function(std::string_view name) const;
  const std::vector<FunctionDef>& functions() const noexcept { return functions_; }

  const InitDecl& init() const;
  /// Role bindings: next(state, shared) -> state, shared-next(shared, state)
  /// -> shared, blok(state, state) -> bool, done(state) -> bool.
  const std::optional<std::string>& role(std::string_view role) const;

  /// Instantiates a function body with argument expressions.
  ExprPtr apply(std::string_view function, std::vector<ExprPtr> args) const;
  ExprPtr next(ExprPtr state, ExprPtr shared) const;
  ExprPtr shared_next(ExprPtr shared, ExprPtr state) const;
  ExprPtr blok(ExprPtr a, ExprPtr b) const;
  ExprPtr done(ExprPtr state) const;

  const std::vector<InvariantDecl>& invariants() const noexcept { return invariants_; }
  const InvariantDecl& invariant(std::string_view name) const;
  ExprPtr invariant_of(std::string_view name, ExprPtr state) const;

  const std::vector<MapDecl>& maps() const noexcept { return maps_; }
  const MapDecl& map(std::string_view name) const;
  ExprPtr node_of(const MapDecl& m, ExprPtr state) const;
  std::vector<ExprPtr> measure_of(const MapDecl& m, std::size_t measure, ExprPtr state) const;

  /// Top-level forms as read, with parameter overrides applied to the
  /// `param` forms. `canonical_text` pretty-prints them.
  const std::vector<SExpr>& forms() const noexcept { return forms_; }
  std::string canonical_text() const;

private:
  friend class ModelBuilder;

  std::string name_;
  std::map<std::string, std::int64_t> params_;
  std::map<std::string, SortPtr> sorts_;
  SortPtr state_sort_;
  SortPtr shared_sort_;
  std::vector<FunctionDef> functions_;
  std::optional<InitDecl> init_;
  std::map<std::string, std::optional<std::string>, std::less<>> roles_;
  std::vector<InvariantDecl> invariants_;
  std::vector<MapDecl> maps_;
  std::vector<SExpr> forms_;
};

using ParamOverrides = std::map<std::string, std::int64_t>;

/// Parses model source. Throws ParseError (syntax, with line/column) or
/// SortError (unknown sort, sort mismatch, duplicate definition), both
/// carrying a position when one is known.
Model parse_model(std::string_view text, const ParamOverrides& overrides = {});
Model load_model(const std::string& path, const ParamOverrides& overrides = {});

} // namespace wfg

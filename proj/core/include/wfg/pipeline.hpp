#pragma once

#include "wfg/absgraph.hpp"
#include "wfg/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wfg {

/// rel(src, dst) over `vars`: pairs of states related by `hyp`. Step
/// relations carry the init declaration (graph by reachability); blok
/// relations carry a domain predicate over `dom_var` (graph over the domain).
struct Relation {
  RelationKind kind = RelationKind::Step;
  VarDecls vars;
  ExprPtr hyp;
  ExprPtr src;
  ExprPtr dst;
  std::optional<InitDecl> init;
  std::string dom_var;
  ExprPtr dom_hyp;
};

/// y = next(x, sh) and not done(x).
Relation step_relation(const Model& model);
/// blok(x, y) and inv(x) and inv(y), over the states satisfying inv.
Relation blok_relation(const Model& model, const std::string& invariant);
Relation relation_of(const Model& model, const MapDecl& map);

/// map-e and the map-o family, as functions of a state expression.
struct Abstraction {
  std::function<ExprPtr(ExprPtr)> node;
  std::vector<std::string> measures;
  std::function<std::vector<ExprPtr>(std::size_t, ExprPtr)> measure;
  std::vector<std::size_t> widths;
  SortPtr state_sort;

  Value node_value(const Value& state) const;
  std::vector<std::uint64_t> measure_value(std::size_t m, const Value& state) const;
  SortPtr node_sort() const;
};

Abstraction abstraction_of(const Model& model, const MapDecl& map);

ReachSpec reach_spec(const Relation& rel, const Abstraction& abs);
RelSpec rel_spec(const Relation& rel, const Abstraction& abs);
OrderSpec order_spec(const Relation& rel, const Abstraction& abs);

/// Untagged abstract graph of the relation under the abstraction.
Graph abstract_graph(const Relation& rel, const Abstraction& abs, const Backend& backend, const GraphOptions& opts = {});
/// abstract_graph followed by comp-map-order.
Graph tagged_graph(const Relation& rel, const Abstraction& abs, const Backend& backend, const GraphOptions& opts = {});
Graph tagged_graph(const Model& model, const std::string& map, const Backend& backend, const GraphOptions& opts = {});

} // namespace wfg

#include "wfg/pipeline.hpp"

#include "wfg/error.hpp"
#include "wfg/eval.hpp"

namespace wfg {

Relation step_relation(const Model& model) {
  for (const char* role : {"next", "done"}) {
    if (!model.role(role)) throw Error(std::string("the step relation needs a '") + role + "' binding");
  }
  Relation r;
  r.kind = RelationKind::Step;
  auto x = ex::var("x", model.state_sort());
  auto sh = ex::var("sh", model.shared_sort());
  r.vars = {{"x", model.state_sort()}, {"sh", model.shared_sort()}};
  r.hyp = ex::not_(model.done(x));
  r.src = x;
  r.dst = model.next(x, sh);
  r.init = model.init();
  return r;
}

Relation blok_relation(const Model& model, const std::string& invariant) {
  if (!model.role("blok")) throw Error("the blok relation needs a 'blok' binding");
  Relation r;
  r.kind = RelationKind::Blok;
  auto x = ex::var("x", model.state_sort());
  auto y = ex::var("y", model.state_sort());
  r.vars = {{"x", model.state_sort()}, {"y", model.state_sort()}};
  r.hyp = ex::and_({model.blok(x, y), model.invariant_of(invariant, x), model.invariant_of(invariant, y)});
  r.src = x;
  r.dst = y;
  r.dom_var = "x";
  r.dom_hyp = model.invariant_of(invariant, x);
  return r;
}

Relation relation_of(const Model& model, const MapDecl& map) {
  return map.relation == RelationKind::Step ? step_relation(model) : blok_relation(model, map.invariant);
}

Value Abstraction::node_value(const Value& state) const {
  return eval_expr(node(ex::var("x", state_sort)), Env{{"x", state}});
}

std::vector<std::uint64_t> Abstraction::measure_value(std::size_t m, const Value& state) const {
  std::vector<std::uint64_t> out;
  const Env env{{"x", state}};
  for (const auto& c : measure(m, ex::var("x", state_sort))) out.push_back(eval_expr(c, env).scalar());
  return out;
}

SortPtr Abstraction::node_sort() const { return node(ex::var("x", state_sort))->sort(); }

Abstraction abstraction_of(const Model& model, const MapDecl& map) {
  Abstraction a;
  const Model* m = &model;
  const MapDecl* d = &map;
  a.node = [m, d](ExprPtr s) { return m->node_of(*d, std::move(s)); };
  a.measure = [m, d](std::size_t k, ExprPtr s) { return m->measure_of(*d, k, std::move(s)); };
  for (const auto& ms : map.measures) {
    a.measures.push_back(ms.name);
    a.widths.push_back(ms.components.size());
  }
  a.state_sort = model.state_sort();
  return a;
}

namespace {

ExprPtr src_var(const SortPtr& s) { return ex::var("*src-var*", s); }
ExprPtr dst_var(const SortPtr& s) { return ex::var("*dst-var*", s); }

} // namespace

ReachSpec reach_spec(const Relation& rel, const Abstraction& abs) {
  if (!rel.init) throw Error("reachability needs an init declaration");
  ReachSpec s;
  s.init_hyp = rel.init->hyp;
  s.init_trm = abs.node(rel.init->term);
  s.init_vars = rel.init->vars;
  auto src_node = abs.node(rel.src);
  s.step_hyp = ex::and_({ex::eq(src_node, src_var(src_node->sort())), rel.hyp});
  s.step_trm = abs.node(rel.dst);
  s.step_vars = rel.vars;
  return s;
}

RelSpec rel_spec(const Relation& rel, const Abstraction& abs) {
  if (!rel.dom_hyp) throw Error("a relation graph needs a domain predicate");
  RelSpec s;
  s.dom_hyp = rel.dom_hyp;
  s.dom_trm = abs.node(ex::var(rel.dom_var, abs.state_sort));
  s.dom_vars = {{rel.dom_var, abs.state_sort}};
  s.rel_hyp = rel.hyp;
  s.src_trm = abs.node(rel.src);
  s.dst_trm = abs.node(rel.dst);
  s.rel_vars = rel.vars;
  return s;
}

OrderSpec order_spec(const Relation& rel, const Abstraction& abs) {
  OrderSpec s;
  auto src_node = abs.node(rel.src);
  auto dst_node = abs.node(rel.dst);
  s.ordr_hyp = ex::and_({rel.hyp, ex::eq(src_node, src_var(src_node->sort())), ex::eq(dst_node, dst_var(dst_node->sort()))});
  s.vars = rel.vars;
  for (std::size_t m = 0; m < abs.measures.size(); ++m) {
    s.measures.push_back({abs.measures[m], abs.measure(m, rel.src), abs.measure(m, rel.dst)});
  }
  return s;
}

Graph abstract_graph(const Relation& rel, const Abstraction& abs, const Backend& backend, const GraphOptions& opts) {
  if (rel.kind == RelationKind::Step) return comp_map_reach(reach_spec(rel, abs), backend, opts);
  return comp_map_rel(rel_spec(rel, abs), backend, opts);
}

Graph tagged_graph(const Relation& rel, const Abstraction& abs, const Backend& backend, const GraphOptions& opts) {
  return comp_map_order(abstract_graph(rel, abs, backend, opts), order_spec(rel, abs), backend, opts);
}

Graph tagged_graph(const Model& model, const std::string& map, const Backend& backend, const GraphOptions& opts) {
  const auto& m = model.map(map);
  return tagged_graph(relation_of(model, m), abstraction_of(model, m), backend, opts);
}

} // namespace wfg

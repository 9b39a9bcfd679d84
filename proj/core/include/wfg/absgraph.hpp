#pragma once

#include "wfg/enumerate.hpp"
#include "wfg/expr.hpp"
#include "wfg/value.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace wfg {

/// Per-arc, per-measure ordering verdict.
enum class OrderTag { StrictDec, NonInc, MayInc };

/// "strict-dec", "non-inc", "may-inc".
std::string tag_name(OrderTag t);
OrderTag parse_tag(std::string_view s);

/// Abstract graph with canonically ordered nodes and successor lists. When
/// tagged, `tags[u][k][m]` is the tag of arc (u, succ[u][k]) for measure m.
struct Graph {
  std::vector<Value> nodes;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::string> measures;
  std::vector<std::size_t> widths;
  std::vector<std::vector<std::vector<OrderTag>>> tags;
  std::vector<std::string> warnings;
  bool tagged = false;

  std::optional<std::size_t> index_of(const Value& node) const;
  std::size_t arc_count() const;
  bool has_arc(std::size_t u, std::size_t v) const;
  std::optional<std::size_t> measure_index(std::string_view name) const;
  /// chk-ord-arc: the stored tag; throws Error for a missing arc or measure.
  OrderTag tag(std::size_t u, std::size_t v, std::size_t measure) const;
  OrderTag tag(const Value& u, const Value& v, std::string_view measure) const;
};

struct GraphOptions {
  std::size_t num = 4096;  // per-query value budget
  unsigned jobs = 1;       // concurrent queries
};

/// comp-map-reach. `src` is the reserved variable bound to the current node
/// inside `step_hyp`; it must not be among `step_vars`.
struct ReachSpec {
  ExprPtr init_hyp;
  ExprPtr init_trm;
  VarDecls init_vars;
  ExprPtr step_hyp;
  ExprPtr step_trm;
  VarDecls step_vars;
  std::string src = "*src-var*";
};

Graph comp_map_reach(const ReachSpec& spec, const Backend& backend, const GraphOptions& opts = {});

/// comp-map-rel: nodes are the values of `dom_trm` under `dom_hyp`; arcs
/// (u, v) whenever rel_hyp[src := u] and src_trm = u admit dst_trm = v.
struct RelSpec {
  ExprPtr dom_hyp;
  ExprPtr dom_trm;
  VarDecls dom_vars;
  ExprPtr rel_hyp;
  ExprPtr src_trm;
  ExprPtr dst_trm;
  VarDecls rel_vars;
  std::string src = "*src-var*";
};

Graph comp_map_rel(const RelSpec& spec, const Backend& backend, const GraphOptions& opts = {});

/// One component measure given over the source and destination states.
struct OrderMeasure {
  std::string name;
  std::vector<ExprPtr> src;
  std::vector<ExprPtr> dst;
};

/// comp-map-order. `ordr_hyp` relates a concrete pair on the arc from the
/// node bound to `src` to the node bound to `dst`.
struct OrderSpec {
  ExprPtr ordr_hyp;
  VarDecls vars;
  std::vector<OrderMeasure> measures;
  std::string src = "*src-var*";
  std::string dst = "*dst-var*";
};

Graph comp_map_order(const Graph& g, const OrderSpec& spec, const Backend& backend, const GraphOptions& opts = {});

nlohmann::ordered_json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::ordered_json& j, const SortPtr& node_sort);
std::string graph_to_dot(const Graph& g);

} // namespace wfg

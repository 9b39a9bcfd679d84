#include "wfg/absgraph.hpp"

#include "parallel.hpp"
#include "wfg/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace wfg {

std::string tag_name(OrderTag t) {
  switch (t) {
  case OrderTag::StrictDec: return "strict-dec";
  case OrderTag::NonInc: return "non-inc";
  case OrderTag::MayInc: return "may-inc";
  }
  return "?";
}

OrderTag parse_tag(std::string_view s) {
  if (s == "strict-dec") return OrderTag::StrictDec;
  if (s == "non-inc") return OrderTag::NonInc;
  if (s == "may-inc") return OrderTag::MayInc;
  throw Error("unknown order tag '" + std::string(s) + "'");
}

std::optional<std::size_t> Graph::index_of(const Value& node) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || !(*it == node)) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

std::size_t Graph::arc_count() const {
  std::size_t n = 0;
  for (const auto& s : succ) n += s.size();
  return n;
}

bool Graph::has_arc(std::size_t u, std::size_t v) const {
  return u < succ.size() && std::binary_search(succ[u].begin(), succ[u].end(), v);
}

std::optional<std::size_t> Graph::measure_index(std::string_view name) const {
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (measures[i] == name) return i;
  }
  return std::nullopt;
}

OrderTag Graph::tag(std::size_t u, std::size_t v, std::size_t measure) const {
  if (!tagged) throw Error("graph carries no ordering tags");
  if (measure >= measures.size()) throw Error("measure index out of range");
  if (u >= succ.size()) throw Error("no such arc");
  auto it = std::lower_bound(succ[u].begin(), succ[u].end(), v);
  if (it == succ[u].end() || *it != v) {
    throw Error("no arc " + nodes[u].to_string() + " -> " + (v < nodes.size() ? nodes[v].to_string() : "?"));
  }
  return tags[u][static_cast<std::size_t>(it - succ[u].begin())][measure];
}

OrderTag Graph::tag(const Value& u, const Value& v, std::string_view measure) const {
  auto iu = index_of(u), iv = index_of(v);
  auto m = measure_index(measure);
  if (!iu || !iv) throw Error("no arc " + u.to_string() + " -> " + v.to_string());
  if (!m) throw Error("unknown measure '" + std::string(measure) + "'");
  return tag(*iu, *iv, *m);
}

namespace {

Graph index_graph(const std::set<Value>& nodes, const std::map<Value, std::set<Value>>& arcs) {
  Graph g;
  g.nodes.assign(nodes.begin(), nodes.end());
  g.succ.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    auto it = arcs.find(g.nodes[i]);
    if (it == arcs.end()) continue;
    for (const auto& v : it->second) g.succ[i].push_back(*g.index_of(v));
  }
  for (const auto& n : g.nodes) {
    if (n.kind() != SortKind::Tuple) continue;
    auto idx = n.sort()->field_index("inv");
    if (idx && n.items()[*idx].kind() == SortKind::Bool && !n.items()[*idx].as_bool()) {
      g.warnings.push_back("reached node with :inv false: " + n.to_string());
    }
  }
  return g;
}

ExprPtr bind(const ExprPtr& e, const std::string& var, const Value& v) {
  return substitute(e, {{var, ex::constant(v)}});
}

void check_reserved(const VarDecls& vars, const std::string& name) {
  for (const auto& [v, _] : vars) {
    if (v == name) throw Error("reserved variable '" + name + "' may not be declared in the query");
  }
}

} // namespace

Graph comp_map_reach(const ReachSpec& spec, const Backend& backend, const GraphOptions& opts) {
  check_reserved(spec.step_vars, spec.src);
  auto init = backend.enumerate({spec.init_trm, spec.init_hyp, spec.init_vars, opts.num});
  if (!init.is_total) throw NotTotalError("init", opts.num);

  std::set<Value> nodes(init.values.begin(), init.values.end());
  std::map<Value, std::set<Value>> arcs;
  std::vector<Value> frontier(nodes.begin(), nodes.end());
  while (!frontier.empty()) {
    std::vector<EnumResult> results(frontier.size());
    detail::parallel_for(frontier.size(), opts.jobs, [&](std::size_t i) {
      const Value& u = frontier[i];
      results[i] = backend.enumerate({spec.step_trm, bind(spec.step_hyp, spec.src, u), spec.step_vars, opts.num});
      if (!results[i].is_total) throw NotTotalError(u.to_string(), opts.num);
    });
    std::vector<Value> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      auto& out = arcs[frontier[i]];
      for (auto& v : results[i].values) {
        out.insert(v);
        if (nodes.insert(v).second) next.push_back(v);
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return index_graph(nodes, arcs);
}

Graph comp_map_rel(const RelSpec& spec, const Backend& backend, const GraphOptions& opts) {
  check_reserved(spec.rel_vars, spec.src);
  auto dom = backend.enumerate({spec.dom_trm, spec.dom_hyp, spec.dom_vars, opts.num});
  if (!dom.is_total) throw NotTotalError("domain", opts.num);
  std::set<Value> nodes(dom.values.begin(), dom.values.end());
  const std::vector<Value> sources(nodes.begin(), nodes.end());
  std::vector<EnumResult> results(sources.size());
  detail::parallel_for(sources.size(), opts.jobs, [&](std::size_t i) {
    const Value& u = sources[i];
    auto hyp = ex::and_({bind(spec.rel_hyp, spec.src, u), ex::eq(spec.src_trm, ex::constant(u))});
    results[i] = backend.enumerate({spec.dst_trm, hyp, spec.rel_vars, opts.num});
    if (!results[i].is_total) throw NotTotalError(u.to_string(), opts.num);
  });
  std::map<Value, std::set<Value>> arcs;
  std::vector<std::string> outside;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (auto& v : results[i].values) {
      arcs[sources[i]].insert(v);
      if (nodes.insert(v).second) outside.push_back(v.to_string());
    }
  }
  Graph g = index_graph(nodes, arcs);
  for (auto& s : outside) g.warnings.push_back("arc target outside the domain: " + s);
  return g;
}

Graph comp_map_order(const Graph& g, const OrderSpec& spec, const Backend& backend, const GraphOptions& opts) {
  check_reserved(spec.vars, spec.src);
  check_reserved(spec.vars, spec.dst);
  Graph out = g;
  out.measures.clear();
  out.widths.clear();
  for (const auto& m : spec.measures) {
    if (m.src.size() != m.dst.size()) throw Error("measure '" + m.name + "' has mismatched component lists");
    out.measures.push_back(m.name);
    out.widths.push_back(m.src.size());
  }
  struct Task {
    std::size_t u, k, m;
  };
  std::vector<Task> tasks;
  out.tags.assign(g.nodes.size(), {});
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    out.tags[u].assign(g.succ[u].size(), std::vector<OrderTag>(spec.measures.size(), OrderTag::MayInc));
    for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
      for (std::size_t m = 0; m < spec.measures.size(); ++m) tasks.push_back({u, k, m});
    }
  }
  detail::parallel_for(tasks.size(), opts.jobs, [&](std::size_t i) {
    const auto [u, k, m] = tasks[i];
    const Value& src = g.nodes[u];
    const Value& dst = g.nodes[g.succ[u][k]];
    auto base = substitute(spec.ordr_hyp, {{spec.src, ex::constant(src)}, {spec.dst, ex::constant(dst)}});
    const auto& om = spec.measures[m];
    auto exists = [&](ExprPtr extra) {
      auto r = backend.enumerate({ex::boolean(true), ex::and_({base, std::move(extra)}), spec.vars, 1});
      return !r.values.empty();
    };
    OrderTag t = OrderTag::StrictDec;
    if (exists(ex::lex_le(om.src, om.dst))) {
      t = exists(ex::lex_lt(om.src, om.dst)) ? OrderTag::MayInc : OrderTag::NonInc;
    }
    out.tags[u][k][m] = t;
  });
  out.tagged = true;
  return out;
}

nlohmann::ordered_json graph_to_json(const Graph& g) {
  nlohmann::ordered_json j;
  j["measures"] = nlohmann::ordered_json::array();
  for (std::size_t m = 0; m < g.measures.size(); ++m) {
    j["measures"].push_back({{"name", g.measures[m]}, {"width", g.widths[m]}});
  }
  j["tagged"] = g.tagged;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) j["nodes"].push_back(n.to_string());
  j["arcs"] = nlohmann::ordered_json::array();
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
      nlohmann::ordered_json a{{"src", u}, {"dst", g.succ[u][k]}};
      if (g.tagged) {
        nlohmann::ordered_json t = nlohmann::ordered_json::object();
        for (std::size_t m = 0; m < g.measures.size(); ++m) t[g.measures[m]] = tag_name(g.tags[u][k][m]);
        a["tags"] = std::move(t);
      }
      j["arcs"].push_back(std::move(a));
    }
  }
  j["warnings"] = g.warnings;
  return j;
}

Graph graph_from_json(const nlohmann::ordered_json& j, const SortPtr& node_sort) {
  try {
    Graph g;
    for (const auto& m : j.at("measures")) {
      g.measures.push_back(m.at("name").get<std::string>());
      g.widths.push_back(m.at("width").get<std::size_t>());
    }
    g.tagged = j.at("tagged").get<bool>();
    for (const auto& n : j.at("nodes")) g.nodes.push_back(parse_value(n.get<std::string>(), node_sort));
    if (!std::is_sorted(g.nodes.begin(), g.nodes.end()) ||
        std::adjacent_find(g.nodes.begin(), g.nodes.end()) != g.nodes.end()) {
      throw Error("graph nodes are not in canonical order");
    }
    g.succ.assign(g.nodes.size(), {});
    if (g.tagged) g.tags.assign(g.nodes.size(), {});
    for (const auto& a : j.at("arcs")) {
      const auto u = a.at("src").get<std::size_t>(), v = a.at("dst").get<std::size_t>();
      if (u >= g.nodes.size() || v >= g.nodes.size()) throw Error("arc endpoint out of range");
      if (!g.succ[u].empty() && g.succ[u].back() >= v) throw Error("arcs are not in canonical order");
      g.succ[u].push_back(v);
      if (g.tagged) {
        std::vector<OrderTag> t;
        for (const auto& m : g.measures) t.push_back(parse_tag(a.at("tags").at(m).get<std::string>()));
        g.tags[u].push_back(std::move(t));
      }
    }
    if (j.contains("warnings")) g.warnings = j.at("warnings").get<std::vector<std::string>>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed graph JSON: ") + e.what());
  }
}

std::string graph_to_dot(const Graph& g) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::string out = "digraph wfgraph {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out += "  n" + std::to_string(i) + " [label=" + quote(g.nodes[i].to_string()) + "];\n";
  }
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
      out += "  n" + std::to_string(u) + " -> n" + std::to_string(g.succ[u][k]);
      if (g.tagged && !g.measures.empty()) {
        std::string label;
        for (std::size_t m = 0; m < g.measures.size(); ++m) {
          if (m) label += ", ";
          label += g.measures[m] + ":" + tag_name(g.tags[u][k][m]);
        }
        out += " [label=" + quote(label) + "]";
      }
      out += ";\n";
    }
  }
  return out + "}\n";
}

} // namespace wfg

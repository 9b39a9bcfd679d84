#include "wfg/certify.hpp"

#include "parallel.hpp"
#include "wfg/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

namespace wfg {

namespace {

// One enumerated related pair, projected onto what the checks read.
struct Fact {
  Value dst;
  std::vector<std::vector<std::uint64_t>> src_ord;
  std::vector<std::vector<std::uint64_t>> dst_ord;
};

ExprPtr at_node(const Abstraction& abs, const ExprPtr& state, const Value& node) {
  return ex::eq(abs.node(state), ex::constant(node));
}

struct Sweep {
  std::vector<std::vector<Fact>> facts;  // per graph node
  std::size_t queries = 0;
};

Sweep sweep(const Relation& rel, const Abstraction& abs, const Graph& g, const Backend& backend,
            const GraphOptions& opts) {
  std::vector<std::pair<std::string, ExprPtr>> items{{"dst", abs.node(rel.dst)}};
  for (std::size_t m = 0; m < abs.measures.size(); ++m) {
    auto s = abs.measure(m, rel.src);
    auto d = abs.measure(m, rel.dst);
    for (std::size_t i = 0; i < s.size(); ++i) items.push_back({"s" + std::to_string(m) + "-" + std::to_string(i), s[i]});
    for (std::size_t i = 0; i < d.size(); ++i) items.push_back({"d" + std::to_string(m) + "-" + std::to_string(i), d[i]});
  }
  auto trm = ex::tuple(std::move(items));
  Sweep out;
  out.facts.resize(g.nodes.size());
  detail::parallel_for(g.nodes.size(), opts.jobs, [&](std::size_t u) {
    auto r = backend.enumerate({trm, ex::and_({rel.hyp, at_node(abs, rel.src, g.nodes[u])}), rel.vars, opts.num});
    if (!r.is_total) throw NotTotalError(g.nodes[u].to_string(), opts.num);
    for (const auto& v : r.values) {
      Fact f;
      f.dst = v.items()[0];
      std::size_t pos = 1;
      for (std::size_t m = 0; m < abs.measures.size(); ++m) {
        std::vector<std::uint64_t> s, d;
        for (std::size_t i = 0; i < abs.widths[m]; ++i) s.push_back(v.items()[pos++].scalar());
        for (std::size_t i = 0; i < abs.widths[m]; ++i) d.push_back(v.items()[pos++].scalar());
        f.src_ord.push_back(std::move(s));
        f.dst_ord.push_back(std::move(d));
      }
      out.facts[u].push_back(std::move(f));
    }
  });
  out.queries = g.nodes.size();
  return out;
}

// A concrete related pair matching the fact, as JSON keyed by variable.
nlohmann::ordered_json witness(const Relation& rel, const Abstraction& abs, const Value& src, const Fact& f,
                               const Backend& backend) {
  std::vector<ExprPtr> hyp{rel.hyp, at_node(abs, rel.src, src), at_node(abs, rel.dst, f.dst)};
  for (std::size_t m = 0; m < abs.measures.size(); ++m) {
    auto s = abs.measure(m, rel.src);
    auto d = abs.measure(m, rel.dst);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::uint64_t sv[] = {f.src_ord[m][i]}, dv[] = {f.dst_ord[m][i]};
      hyp.push_back(ex::eq(s[i], ex::constant(value_from_scalars(s[i]->sort(), sv))));
      hyp.push_back(ex::eq(d[i], ex::constant(value_from_scalars(d[i]->sort(), dv))));
    }
  }
  std::vector<std::pair<std::string, ExprPtr>> vars;
  for (const auto& [name, sort] : rel.vars) vars.push_back({name, ex::var(name, sort)});
  auto r = backend.enumerate({ex::tuple(std::move(vars)), ex::and_(std::move(hyp)), rel.vars, 1});
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (r.values.empty()) return j;
  for (std::size_t i = 0; i < rel.vars.size(); ++i) j[rel.vars[i].first] = r.values[0].items()[i].to_string();
  return j;
}

std::string arc_text(const Value& u, const Value& v) { return u.to_string() + " -> " + v.to_string(); }

std::string ord_text(const std::vector<std::uint64_t>& xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + std::to_string(xs[i]);
  return out + ")";
}

std::string method_of(const Backend& backend) {
  return backend.name() == "exhaustive" ? "exhaustive" : "sat-emptiness";
}

} // namespace

std::vector<Verdict> check_assumptions(const Relation& rel, const Abstraction& abs, const Graph& g,
                                       const Backend& backend, const GraphOptions& opts) {
  if (!g.tagged) throw Error("assumption checks need a tagged graph");
  if (g.measures != abs.measures) throw Error("graph measures differ from the model's");
  Verdict member{"map-e-member-nexts", true, method_of(backend), {}, {}, 0};
  Verdict strict{"map-o-decrement-strict", true, method_of(backend), {}, {}, 0};
  Verdict nonstrict{"map-o-decrement-non-strict", true, method_of(backend), {}, {}, 0};

  // Coverage: every start state maps into the graph.
  EnumResult starts;
  if (rel.kind == RelationKind::Step) {
    if (!rel.init) throw Error("step relation without init");
    starts = backend.enumerate({abs.node(rel.init->term), rel.init->hyp, rel.init->vars, opts.num});
    if (!starts.is_total) throw NotTotalError("init", opts.num);
  } else {
    starts = backend.enumerate({abs.node(ex::var(rel.dom_var, abs.state_sort)), rel.dom_hyp,
                                {{rel.dom_var, abs.state_sort}}, opts.num});
    if (!starts.is_total) throw NotTotalError("domain", opts.num);
  }
  ++member.queries;
  for (const auto& n : starts.values) {
    if (!g.index_of(n)) {
      member.pass = false;
      member.detail = "start node missing from the graph: " + n.to_string();
      break;
    }
  }

  auto sw = sweep(rel, abs, g, backend, opts);
  member.queries += sw.queries;
  strict.queries = nonstrict.queries = sw.queries;
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (const auto& f : sw.facts[u]) {
      auto v = g.index_of(f.dst);
      if (!v || !g.has_arc(u, *v)) {
        if (member.pass) {
          member.pass = false;
          member.detail = "related pair leaves the graph: " + arc_text(g.nodes[u], f.dst);
          member.witness = witness(rel, abs, g.nodes[u], f, backend);
        }
        continue;
      }
      for (std::size_t m = 0; m < g.measures.size(); ++m) {
        const OrderTag t = g.tag(u, *v, m);
        if (t == OrderTag::StrictDec && !bnl_lt(f.dst_ord[m], f.src_ord[m]) && strict.pass) {
          strict.pass = false;
          strict.detail = g.measures[m] + " does not strictly decrease on " + arc_text(g.nodes[u], f.dst) + ": " +
                          ord_text(f.src_ord[m]) + " to " + ord_text(f.dst_ord[m]);
          strict.witness = witness(rel, abs, g.nodes[u], f, backend);
        }
        if (t == OrderTag::NonInc && !bnl_le(f.dst_ord[m], f.src_ord[m]) && nonstrict.pass) {
          nonstrict.pass = false;
          nonstrict.detail = g.measures[m] + " increases on " + arc_text(g.nodes[u], f.dst) + ": " +
                             ord_text(f.src_ord[m]) + " to " + ord_text(f.dst_ord[m]);
          nonstrict.witness = witness(rel, abs, g.nodes[u], f, backend);
        }
      }
    }
  }
  return {member, strict, nonstrict};
}

Verdict check_omap_valid(const Graph& g, const Omap& m) {
  Verdict v{"valid-omap", true, "symbolic", {}, {}, 0};
  auto fail = [&](std::string why) {
    if (v.pass) {
      v.pass = false;
      v.detail = std::move(why);
    }
  };
  for (const auto& n : g.nodes) {
    auto it = m.find(n);
    if (it == m.end()) {
      fail("node missing from the omap: " + n.to_string());
      continue;
    }
    const auto& d = it->second;
    if (d.empty() || !std::holds_alternative<std::uint64_t>(d.back()) || std::get<std::uint64_t>(d.back()) != 0) {
      fail("descriptor " + to_string(d) + " does not end in 0");
    }
    for (const auto& e : d) {
      if (auto s = std::get_if<std::string>(&e); s && !g.measure_index(*s)) {
        fail("descriptor " + to_string(d) + " names unknown measure " + *s);
      }
    }
  }
  if (m.size() != g.nodes.size()) fail("omap domain differs from the graph nodes");
  if (!v.pass) return v;

  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    const auto& du = m.at(g.nodes[u]);
    for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
      const std::size_t w = g.succ[u][k];
      const auto& dv = m.at(g.nodes[w]);
      bool strict = false;
      std::string why;
      for (std::size_t i = 0; i < std::min(du.size(), dv.size()) && !strict && why.empty(); ++i) {
        const auto* nu = std::get_if<std::uint64_t>(&du[i]);
        const auto* nv = std::get_if<std::uint64_t>(&dv[i]);
        if (nu && nv) {
          if (*nu > *nv) strict = true;
          else if (*nu < *nv) why = "entry " + std::to_string(i) + " increases";
        } else if (!nu && !nv && std::get<std::string>(du[i]) == std::get<std::string>(dv[i])) {
          const auto& name = std::get<std::string>(du[i]);
          const OrderTag t = g.tags[u][k][*g.measure_index(name)];
          if (t == OrderTag::StrictDec) strict = true;
          else if (t == OrderTag::MayInc) why = "measure " + name + " may increase";
        } else {
          why = "entry " + std::to_string(i) + " differs in kind";
        }
      }
      if (!strict && why.empty()) why = "no strict decrease";
      if (!strict) {
        fail(why + " on " + arc_text(g.nodes[u], g.nodes[w]) + ": " + to_string(du) + " vs " + to_string(dv));
        return v;
      }
    }
  }
  return v;
}

Verdict check_measure_decrease(const Relation& rel, const Abstraction& abs, const Omap& m, const Graph& g,
                               const Backend& backend, const GraphOptions& opts) {
  Verdict v{"measure-decrease", true, method_of(backend), {}, {}, 0};
  std::map<std::string, std::size_t> widths;
  for (std::size_t i = 0; i < abs.measures.size(); ++i) widths[abs.measures[i]] = abs.widths[i];
  const std::size_t bound = bnl_bnd(m, widths);
  auto sw = sweep(rel, abs, g, backend, opts);
  v.queries = sw.queries;
  auto index = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(abs.measures.begin(), abs.measures.end(), name) - abs.measures.begin());
  };
  for (std::size_t u = 0; u < g.nodes.size() && v.pass; ++u) {
    auto du = m.find(g.nodes[u]);
    for (const auto& f : sw.facts[u]) {
      auto dv = m.find(f.dst);
      if (du == m.end() || dv == m.end()) {
        v.pass = false;
        v.detail = "node missing from the omap on " + arc_text(g.nodes[u], f.dst);
        break;
      }
      const Bnl bx = mk_bnl(du->second, [&](const std::string& n) { return f.src_ord.at(index(n)); }, bound);
      const Bnl by = mk_bnl(dv->second, [&](const std::string& n) { return f.dst_ord.at(index(n)); }, bound);
      if (!bnl_lt(by, bx) || !o_lt(bnl_to_o(by), bnl_to_o(bx))) {
        v.pass = false;
        v.detail = "measure does not decrease on " + arc_text(g.nodes[u], f.dst) + ": " + to_string(bnl_to_o(bx)) +
                   " to " + to_string(bnl_to_o(by));
        v.witness = witness(rel, abs, g.nodes[u], f, backend);
        break;
      }
    }
  }
  return v;
}

OmapMeasure::OmapMeasure(const Abstraction& abs, const Omap& m) : abs_(abs), omap_(m) {
  std::map<std::string, std::size_t> widths;
  for (std::size_t i = 0; i < abs.measures.size(); ++i) widths[abs.measures[i]] = abs.widths[i];
  bound_ = bnl_bnd(m, widths);
}

Bnl OmapMeasure::bnl(const Value& state) const {
  const Value node = abs_.node_value(state);
  auto it = omap_.find(node);
  if (it == omap_.end()) throw Error("abstraction unsound: node " + node.to_string() + " is not in the omap");
  return mk_bnl(
      it->second,
      [&](const std::string& name) {
        auto k = std::find(abs_.measures.begin(), abs_.measures.end(), name) - abs_.measures.begin();
        return abs_.measure_value(static_cast<std::size_t>(k), state);
      },
      bound_);
}

std::vector<DescentStep> iterate_descent(const Value& x0, const std::function<std::optional<Value>(const Value&)>& successor,
                                         const std::function<Ordinal(const Value&)>& measure, std::size_t max_steps) {
  std::vector<DescentStep> trace{{x0, measure(x0)}};
  for (std::size_t step = 0;; ++step) {
    auto y = successor(trace.back().state);
    if (!y) return trace;
    if (step == max_steps) throw MonitorError("descent exceeded " + std::to_string(max_steps) + " steps");
    Ordinal my = measure(*y);
    if (!o_lt(my, trace.back().measure)) {
      throw MonitorError("measure did not decrease from " + trace.back().state.to_string() + " (" +
                         to_string(trace.back().measure) + ") to " + y->to_string() + " (" + to_string(my) + ")");
    }
    trace.push_back({std::move(*y), std::move(my)});
  }
}

InvariantVerdict certify_state_invariant(const Model& model, const InvariantDecl& inv, const Backend& backend,
                                         const GraphOptions& opts) {
  Abstraction abs;
  abs.state_sort = model.state_sort();
  abs.node = [&inv](ExprPtr s) {
    std::vector<std::pair<std::string, ExprPtr>> items;
    for (std::size_t i = 0; i < inv.split.size(); ++i) {
      const auto& e = inv.split[i];
      std::string name = e->op() == Op::Field ? e->name() : "e" + std::to_string(i);
      for (const auto& [n, _] : items) {
        if (n == name) name += "-" + std::to_string(i);
      }
      items.push_back({name, substitute(e, {{inv.var, s}})});
    }
    items.push_back({"inv", substitute(inv.body, {{inv.var, s}})});
    return ex::tuple(std::move(items));
  };
  abs.measure = [](std::size_t, ExprPtr) { return std::vector<ExprPtr>{}; };
  Graph g = abstract_graph(step_relation(model), abs, backend, opts);
  InvariantVerdict v;
  v.nodes = g.nodes.size();
  for (const auto& n : g.nodes) {
    if (!n.field("inv").as_bool()) {
      v.pass = false;
      v.failing.push_back(n.to_string());
    }
  }
  return v;
}

bool Certificate::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw Error("SHA-256 failed");
  std::string out;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

Certificate certify(const Model& model, const std::string& map, const Graph& g, const Omap& m, const Backend& backend,
                    const GraphOptions& opts) {
  const auto& decl = model.map(map);
  const Relation rel = relation_of(model, decl);
  const Abstraction abs = abstraction_of(model, decl);
  Certificate c;
  c.model = model.name();
  c.map = map;
  c.relation = decl.relation == RelationKind::Step ? "step" : "blok";
  c.params = model.params();
  c.model_hash = sha256_hex(model.canonical_text());
  c.graph_hash = sha256_hex(graph_to_json(g).dump());
  c.omap_hash = sha256_hex(omap_to_json(m).dump());
  c.backend = backend.name();
  if (decl.relation == RelationKind::Blok) {
    auto iv = certify_state_invariant(model, model.invariant(decl.invariant), backend, opts);
    Verdict v{"state-invariant", iv.pass, method_of(backend), {}, {}, 1};
    if (!iv.pass) v.detail = decl.invariant + " fails at " + iv.failing.front();
    c.verdicts.push_back(std::move(v));
  }
  for (auto& v : check_assumptions(rel, abs, g, backend, opts)) c.verdicts.push_back(std::move(v));
  c.verdicts.push_back(check_omap_valid(g, m));
  c.verdicts.push_back(check_measure_decrease(rel, abs, m, g, backend, opts));
  return c;
}

nlohmann::ordered_json certificate_to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["model"] = c.model;
  j["map"] = c.map;
  j["relation"] = c.relation;
  j["params"] = c.params;
  j["model-hash"] = c.model_hash;
  j["graph-hash"] = c.graph_hash;
  j["omap-hash"] = c.omap_hash;
  j["backend"] = c.backend;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& v : c.verdicts) {
    nlohmann::ordered_json e{{"check", v.check}, {"verdict", v.pass ? "pass" : "fail"}, {"method", v.method},
                             {"queries", v.queries}};
    if (!v.detail.empty()) e["detail"] = v.detail;
    if (v.witness) e["witness"] = *v.witness;
    j["checks"].push_back(std::move(e));
  }
  j["verdict"] = c.pass() ? "pass" : "fail";
  return j;
}

} // namespace wfg

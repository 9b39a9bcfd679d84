#include "wfg/measure.hpp"

#include "wfg/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace wfg {

std::string to_string(const Descriptor& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += ' ';
    if (auto n = std::get_if<std::uint64_t>(&d[i])) {
      out += std::to_string(*n);
    } else {
      out += upcase(std::get<std::string>(d[i]));
    }
  }
  return out + ")";
}

namespace {

// An arc as (source, position in succ[source]).
using Arc = std::pair<std::size_t, std::size_t>;

struct Sub {
  std::vector<std::size_t> nodes;  // ascending
  std::vector<Arc> arcs;
};

std::vector<std::vector<std::size_t>> tarjan(const Graph& g, const Sub& s) {
  const std::size_t n = s.nodes.size();
  auto local = [&](std::size_t v) {
    return static_cast<std::size_t>(std::lower_bound(s.nodes.begin(), s.nodes.end(), v) - s.nodes.begin());
  };
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, k] : s.arcs) adj[local(u)].push_back(local(g.succ[u][k]));
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0), stack;
  std::vector<char> on(n, 0);
  std::vector<std::vector<std::size_t>> out;
  std::size_t counter = 0;
  // Iterative to keep deep chains off the call stack.
  struct Frame {
    std::size_t v, next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != SIZE_MAX) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.next++];
        if (index[w] == SIZE_MAX) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = 1;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = 0;
          comp.push_back(s.nodes[w]);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return out;
}

Sub restrict(const Graph& g, const Sub& s, const std::vector<std::size_t>& nodes) {
  Sub r{nodes, {}};
  for (auto [u, k] : s.arcs) {
    if (std::binary_search(nodes.begin(), nodes.end(), u) && std::binary_search(nodes.begin(), nodes.end(), g.succ[u][k])) {
      r.arcs.push_back({u, k});
    }
  }
  return r;
}

bool strongly_connected(const Graph& g, const Sub& s) {
  return !s.arcs.empty() && tarjan(g, s).size() == 1;
}

struct Synth {
  const Graph& g;
  std::map<std::size_t, Descriptor> desc;
  std::optional<CycleCounterexample> cex;

  bool scc_phase(const Sub& s) {
    for (std::size_t m = 0; m < g.measures.size(); ++m) {
      bool may_inc = false, strict = false;
      for (auto [u, k] : s.arcs) {
        const OrderTag t = g.tags[u][k][m];
        may_inc |= t == OrderTag::MayInc;
        strict |= t == OrderTag::StrictDec;
      }
      if (may_inc || !strict) continue;
      Sub rest{s.nodes, {}};
      for (auto [u, k] : s.arcs) {
        if (g.tags[u][k][m] != OrderTag::StrictDec) rest.arcs.push_back({u, k});
      }
      if (!run(rest, false)) return false;
      for (auto v : s.nodes) desc[v].insert(desc[v].begin(), g.measures[m]);
      return true;
    }
    cex = find_min_nondec_cycle(g, s.nodes);
    if (!cex) throw Error("internal: SCC without a non-decreasing cycle");
    return false;
  }

  bool partition_phase(const Sub& s) {
    auto sccs = tarjan(g, s);
    for (std::size_t i = 0; i < sccs.size(); ++i) {
      Sub part = restrict(g, s, sccs[i]);
      if (part.nodes.size() == 1 && part.arcs.empty()) {
        desc[part.nodes[0]] = {std::uint64_t{0}};
      } else if (!run(part, false)) {
        return false;
      }
      for (auto v : part.nodes) desc[v].insert(desc[v].begin(), std::uint64_t{i + 1});
    }
    return true;
  }

  bool run(const Sub& s, bool top) {
    if (!top && strongly_connected(g, s)) return scc_phase(s);
    return partition_phase(s);
  }
};

Sub whole(const Graph& g) {
  Sub s;
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    s.nodes.push_back(u);
    for (std::size_t k = 0; k < g.succ[u].size(); ++k) s.arcs.push_back({u, k});
  }
  return s;
}

} // namespace

std::vector<std::vector<std::size_t>> scc_partition(const Graph& g) { return tarjan(g, whole(g)); }

SynthResult synthesize_omap(const Graph& g) {
  if (!g.tagged) throw Error("synthesis needs a tagged graph");
  Synth s{g, {}, {}};
  SynthResult r;
  if (!s.run(whole(g), true)) {
    r.counterexample = std::move(s.cex);
    return r;
  }
  Omap m;
  for (auto& [v, d] : s.desc) m.emplace(g.nodes[v], std::move(d));
  r.omap = std::move(m);
  return r;
}

std::optional<CycleCounterexample> find_min_nondec_cycle(const Graph& g, const std::vector<std::size_t>& nodes) {
  std::vector<std::size_t> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t nm = g.measures.size();
  // Status per measure: 0 only non-inc so far, 1 strict-dec seen, 2 may-inc seen.
  auto step = [&](std::size_t code, std::size_t u, std::size_t k) {
    std::size_t out = 0, mul = 1;
    for (std::size_t m = 0; m < nm; ++m, mul *= 3) {
      std::size_t st = code / mul % 3;
      const OrderTag t = g.tags[u][k][m];
      if (t == OrderTag::MayInc) st = 2;
      else if (t == OrderTag::StrictDec && st == 0) st = 1;
      out += st * mul;
    }
    return out;
  };
  auto accepting = [&](std::size_t code) {
    for (std::size_t m = 0; m < nm; ++m, code /= 3) {
      if (code % 3 == 1) return false;
    }
    return true;
  };
  auto member = [&](std::size_t v) { return std::binary_search(sorted.begin(), sorted.end(), v); };

  std::optional<CycleCounterexample> best;
  for (std::size_t start : sorted) {
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> parent;
    std::deque<std::pair<std::size_t, std::size_t>> queue{{start, 0}};
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> dist{{{start, 0}, 0}};
    std::optional<std::pair<std::pair<std::size_t, std::size_t>, std::size_t>> hit;  // (last state, arc k)
    while (!queue.empty() && !hit) {
      auto cur = queue.front();
      queue.pop_front();
      const std::size_t d = dist[cur];
      if (best && d + 1 >= best->length()) break;
      const auto [u, code] = cur;
      for (std::size_t k = 0; k < g.succ[u].size(); ++k) {
        const std::size_t v = g.succ[u][k];
        if (!member(v)) continue;
        const std::size_t nc = step(code, u, k);
        if (v == start && accepting(nc)) {
          hit = {{cur, k}};
          break;
        }
        std::pair<std::size_t, std::size_t> nx{v, nc};
        if (dist.emplace(nx, d + 1).second) {
          parent[nx] = {cur, k};
          queue.push_back(nx);
        }
      }
    }
    if (!hit) continue;
    std::vector<std::pair<std::size_t, std::size_t>> arcs{{hit->first.first, hit->second}};
    for (auto st = hit->first; st != std::pair<std::size_t, std::size_t>{start, 0};) {
      auto& [prev, k] = parent.at(st);
      arcs.push_back({prev.first, k});
      st = prev;
    }
    std::reverse(arcs.begin(), arcs.end());
    CycleCounterexample c;
    for (auto [u, k] : arcs) {
      c.cycle.push_back(u);
      c.tags.push_back(g.tags[u][k]);
    }
    c.cycle.push_back(start);
    if (!best || c.length() < best->length()) best = std::move(c);
  }
  return best;
}

std::string check_cycle(const Graph& g, const CycleCounterexample& c) {
  if (c.cycle.size() < 2) return "cycle has no arcs";
  if (c.cycle.front() != c.cycle.back()) return "cycle is not closed";
  if (c.tags.size() != c.length()) return "tag list does not match the cycle length";
  for (std::size_t i = 0; i < c.length(); ++i) {
    const std::size_t u = c.cycle[i], v = c.cycle[i + 1];
    if (u >= g.nodes.size() || v >= g.nodes.size() || !g.has_arc(u, v)) {
      return "arc " + std::to_string(i) + " is not in the graph";
    }
    for (std::size_t m = 0; m < g.measures.size(); ++m) {
      if (c.tags[i].size() != g.measures.size() || c.tags[i][m] != g.tag(u, v, m)) {
        return "arc " + std::to_string(i) + " carries a wrong tag";
      }
    }
  }
  for (std::size_t m = 0; m < g.measures.size(); ++m) {
    bool may_inc = false, strict = false;
    for (const auto& t : c.tags) {
      may_inc |= t[m] == OrderTag::MayInc;
      strict |= t[m] == OrderTag::StrictDec;
    }
    if (strict && !may_inc) return "measure " + g.measures[m] + " decreases along the cycle";
  }
  return {};
}

nlohmann::ordered_json omap_to_json(const Omap& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [node, d] : m) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& e : d) {
      if (auto n = std::get_if<std::uint64_t>(&e)) list.push_back(*n);
      else list.push_back(std::get<std::string>(e));
    }
    j[node.to_string()] = std::move(list);
  }
  return j;
}

Omap omap_from_json(const nlohmann::ordered_json& j, const SortPtr& node_sort) {
  if (!j.is_object()) throw Error("omap JSON must be an object");
  Omap m;
  for (const auto& [key, list] : j.items()) {
    if (!list.is_array()) throw Error("descriptor for " + key + " is not a list");
    Descriptor d;
    for (const auto& e : list) {
      if (e.is_number_unsigned()) d.push_back(e.get<std::uint64_t>());
      else if (e.is_string()) d.push_back(e.get<std::string>());
      else throw Error("descriptor for " + key + " has an entry that is neither a natural nor a name");
    }
    if (!m.emplace(parse_value(key, node_sort), std::move(d)).second) throw Error("duplicate omap node " + key);
  }
  return m;
}

nlohmann::ordered_json cycle_to_json(const Graph& g, const CycleCounterexample& c) {
  nlohmann::ordered_json j;
  j["length"] = c.length();
  j["cycle"] = nlohmann::ordered_json::array();
  for (auto v : c.cycle) j["cycle"].push_back(g.nodes[v].to_string());
  j["tags"] = nlohmann::ordered_json::array();
  for (const auto& t : c.tags) {
    nlohmann::ordered_json arc = nlohmann::ordered_json::object();
    for (std::size_t m = 0; m < g.measures.size(); ++m) arc[g.measures[m]] = tag_name(t[m]);
    j["tags"].push_back(std::move(arc));
  }
  return j;
}

std::string cycle_report(const Graph& g, const CycleCounterexample& c) {
  std::string out = "non-decreasing cycle of " + std::to_string(c.length()) + " arc(s):\n";
  for (std::size_t i = 0; i < c.length(); ++i) {
    out += "  " + g.nodes[c.cycle[i]].to_string() + "\n    ->";
    for (std::size_t m = 0; m < g.measures.size(); ++m) out += " " + g.measures[m] + ":" + tag_name(c.tags[i][m]);
    out += "\n";
  }
  out += "  " + g.nodes[c.cycle.back()].to_string() + "\n";
  if (g.measures.empty()) out += "  (no component measures declared)\n";
  return out;
}

} // namespace wfg

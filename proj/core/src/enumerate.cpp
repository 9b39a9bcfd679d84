#include "wfg/enumerate.hpp"

#include "wfg/error.hpp"
#include "wfg/ipasir.hpp"
#include "wfg/lower.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

namespace wfg {

namespace {

void flatten_and(const Dag& dag, NodeId n, std::vector<NodeId>& out) {
  const Node& x = dag.node(n);
  if (x.op == NodeOp::And) {
    for (auto a : x.args) flatten_and(dag, a, out);
  } else if (!dag.is_const(n, 1)) {
    out.push_back(n);
  }
}

// A conjunct `slot = e` (or a bare boolean slot) that can be solved by
// substitution.
bool find_definition(const Dag& dag, NodeId c, std::size_t& slot, NodeId& value, Dag& mdag) {
  const Node& x = dag.node(c);
  if (x.op == NodeOp::Slot) {
    slot = static_cast<std::size_t>(x.value);
    value = mdag.truth(true);
    return true;
  }
  if (x.op == NodeOp::Not && dag.node(x.args[0]).op == NodeOp::Slot) {
    slot = static_cast<std::size_t>(dag.node(x.args[0]).value);
    value = mdag.truth(false);
    return true;
  }
  if (x.op == NodeOp::Eq) {
    for (int side = 0; side < 2; ++side) {
      const NodeId s = x.args[side];
      const NodeId e = x.args[1 - side];
      if (dag.node(s).op != NodeOp::Slot) continue;
      const auto idx = static_cast<std::size_t>(dag.node(s).value);
      auto sup = dag.support(e);
      if (std::binary_search(sup.begin(), sup.end(), idx)) continue;
      slot = idx;
      value = e;
      return true;
    }
  }
  return false;
}

struct Search {
  const Dag& dag;
  const std::vector<SlotInfo>& slots;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::vector<NodeId>>> checks;  // per depth: cones of conjuncts to test
  std::vector<NodeId> trm_cone;
  std::vector<NodeId> trm;
  std::size_t num;

  std::vector<std::uint64_t> assignment;
  std::vector<std::uint64_t> scratch;
  std::set<std::vector<std::uint64_t>> found;
  bool stopped = false;

  std::uint64_t eval_cone(const std::vector<NodeId>& cone) {
    for (NodeId n : cone) {
      const Node& x = dag.node(n);
      auto a = [&](std::size_t i) { return scratch[x.args[i]]; };
      std::uint64_t v = 0;
      switch (x.op) {
      case NodeOp::Const: v = x.value; break;
      case NodeOp::Slot: v = assignment[x.value]; break;
      case NodeOp::Ite: v = a(0) ? a(1) : a(2); break;
      case NodeOp::Eq: v = a(0) == a(1); break;
      case NodeOp::Lt: v = a(0) < a(1); break;
      case NodeOp::Add: {
        const std::uint64_t m = x.width >= 64 ? ~0ULL : ((1ULL << x.width) - 1);
        v = (a(0) + a(1)) & m;
        break;
      }
      case NodeOp::Sub: v = a(0) > a(1) ? a(0) - a(1) : 0; break;
      case NodeOp::Not: v = a(0) == 0; break;
      case NodeOp::And:
        v = 1;
        for (std::size_t i = 0; i < x.args.size() && v; ++i) v = a(i) != 0;
        break;
      case NodeOp::Or:
        v = 0;
        for (std::size_t i = 0; i < x.args.size() && !v; ++i) v = a(i) != 0;
        break;
      }
      scratch[n] = v;
    }
    return cone.empty() ? 0 : scratch[cone.back()];
  }

  bool passes(std::size_t depth) {
    for (const auto& cone : checks[depth]) {
      if (!eval_cone(cone)) return false;
    }
    return true;
  }

  void leaf() {
    eval_cone(trm_cone);
    std::vector<std::uint64_t> v;
    v.reserve(trm.size());
    for (NodeId t : trm) v.push_back(scratch[t]);
    found.insert(std::move(v));
    if (found.size() >= num) stopped = true;
  }

  void run(std::size_t depth) {
    if (depth == order.size()) {
      leaf();
      return;
    }
    const std::size_t s = order[depth];
    for (std::uint64_t v = 0; v < slots[s].domain && !stopped; ++v) {
      assignment[s] = v;
      if (passes(depth + 1)) run(depth + 1);
    }
  }
};

EnumResult finish(const SortPtr& sort, const std::set<std::vector<std::uint64_t>>& found, bool total) {
  EnumResult r;
  for (const auto& s : found) r.values.push_back(value_from_scalars(sort, s));
  std::sort(r.values.begin(), r.values.end());
  r.is_total = total;
  r.solve_calls = r.values.size() + (total ? 1 : 0);
  return r;
}

} // namespace

EnumResult ExhaustiveBackend::enumerate(const Query& q) const {
  if (q.num < 1) throw Error("num must be at least 1");
  auto lq = lower_query(q.trm, q.hyp, q.vars);
  Dag& dag = lq.dag;

  std::vector<NodeId> conj;
  flatten_and(dag, lq.hyp, conj);
  std::vector<NodeId> trm = lq.trm;

  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId c : conj) {
      if (dag.is_const(c, 0)) return finish(lq.trm_sort, {}, true);
    }
    for (std::size_t i = 0; i < conj.size(); ++i) {
      std::size_t slot;
      NodeId value;
      if (!find_definition(dag, conj[i], slot, value, dag)) continue;
      std::map<std::size_t, NodeId> def{{slot, value}};
      std::unordered_map<NodeId, NodeId> memo;
      std::vector<NodeId> next;
      for (std::size_t j = 0; j < conj.size(); ++j) {
        if (j != i) flatten_and(dag, dag.replace(conj[j], def, memo), next);
      }
      for (auto& t : trm) t = dag.replace(t, def, memo);
      conj = std::move(next);
      changed = true;
      break;
    }
  }
  for (NodeId c : conj) {
    if (dag.is_const(c, 0)) return finish(lq.trm_sort, {}, true);
  }

  Search s{dag, lq.slots, {}, {}, {}, trm, q.num, {}, {}, {}, false};
  std::vector<std::vector<std::size_t>> sup;
  for (NodeId c : conj) sup.push_back(dag.support(c));
  std::vector<char> assigned(lq.slots.size(), 0);
  std::vector<char> scheduled(conj.size(), 0);
  s.checks.emplace_back();
  auto schedule_ready = [&] {
    for (std::size_t i = 0; i < conj.size(); ++i) {
      if (scheduled[i]) continue;
      bool ready = std::all_of(sup[i].begin(), sup[i].end(), [&](std::size_t x) { return assigned[x] != 0; });
      if (!ready) continue;
      scheduled[i] = 1;
      NodeId root[] = {conj[i]};
      s.checks.back().push_back(dag.cone(root));
    }
  };
  auto assign = [&](std::size_t x) {
    if (assigned[x]) return;
    assigned[x] = 1;
    s.order.push_back(x);
    s.checks.emplace_back();
    schedule_ready();
  };
  schedule_ready();
  for (;;) {
    std::size_t best = conj.size(), best_missing = 0;
    for (std::size_t i = 0; i < conj.size(); ++i) {
      if (scheduled[i]) continue;
      std::size_t missing = 0;
      for (auto x : sup[i]) missing += assigned[x] ? 0 : 1;
      if (best == conj.size() || missing < best_missing) {
        best = i;
        best_missing = missing;
      }
    }
    if (best == conj.size()) break;
    for (auto x : sup[best]) assign(x);
  }
  std::set<std::size_t> trm_support;
  for (NodeId t : trm) {
    auto ts = dag.support(t);
    trm_support.insert(ts.begin(), ts.end());
  }
  for (auto x : trm_support) assign(x);

  s.trm_cone = dag.cone(trm);
  s.assignment.assign(lq.slots.size(), 0);
  s.scratch.assign(dag.size(), 0);
  if (s.passes(0)) s.run(0);
  return finish(lq.trm_sort, s.found, !s.stopped);
}

EnumResult compute_finite_values(const Circuit& c, std::size_t num, SatSolver& solver) {
  if (num < 1) throw Error("num must be at least 1");
  for (const auto& cl : c.clauses) solver.add_clause(cl);
  const int hyp[] = {c.hyp};
  solver.add_clause(hyp);
  std::set<Value> seen;
  EnumResult r;
  r.is_total = false;
  std::vector<bool> assignment(static_cast<std::size_t>(c.num_vars) + 1, false);
  while (seen.size() < num) {
    ++r.solve_calls;
    if (!solver.solve()) {
      r.is_total = true;
      break;
    }
    for (int v = 1; v <= c.num_vars; ++v) assignment[static_cast<std::size_t>(v)] = solver.value(v);
    Value val = decode(c, assignment);
    if (!seen.insert(val).second) throw BackendError("solver returned a blocked value " + val.to_string());
    std::vector<int> block;
    for (int l : c.outputs) {
      const bool bit = l < 0 ? !assignment[static_cast<std::size_t>(-l)] : assignment[static_cast<std::size_t>(l)];
      block.push_back(bit ? -l : l);
    }
    solver.add_clause(block);
  }
  r.values.assign(seen.begin(), seen.end());
  return r;
}

EnumResult SatBackend::enumerate(const Query& q) const {
  auto circuit = bitblast(q.trm, q.hyp, q.vars);
  auto solver = factory_();
  try {
    return compute_finite_values(circuit, q.num, *solver);
  } catch (const BackendError& e) {
    throw BackendError(name_ + " backend failed on term " + to_string(q.trm) + ": " + e.what());
  }
}

EnumResult DumpingBackend::enumerate(const Query& q) const {
  const auto n = counter_.fetch_add(1);
  char name[32];
  std::snprintf(name, sizeof name, "query-%05zu.cnf", n);
  std::ofstream out(dir_ + "/" + name, std::ios::binary);
  if (!out) throw Error("cannot write CNF dump to " + dir_);
  out << "c trm " << to_string(q.trm) << "\nc hyp " << to_string(q.hyp) << '\n';
  out << to_dimacs(bitblast(q.trm, q.hyp, q.vars));
  return inner_.enumerate(q);
}

EnumResult compute_finite_values(const ExprPtr& trm, const ExprPtr& hyp, const VarDecls& vars, std::size_t num,
                                 const Backend& backend) {
  return backend.enumerate(Query{trm, hyp, vars, num});
}

std::unique_ptr<Backend> make_backend(std::string_view name) {
  if (name == "exhaustive") return std::make_unique<ExhaustiveBackend>();
  if (name == "ipasir") {
    auto path = IpasirLibrary::env_path();
    if (path.empty()) throw BackendError("the ipasir backend needs WFG_IPASIR_LIB to name a solver library");
    auto lib = IpasirLibrary::load(path);
    return std::make_unique<SatBackend>([lib] { return lib->make_solver(); }, "ipasir");
  }
  throw Error("unknown backend '" + std::string(name) + "' (expected exhaustive or ipasir)");
}

} // namespace wfg

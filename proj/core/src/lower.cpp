#include "wfg/lower.hpp"

#include "wfg/error.hpp"

#include <algorithm>
#include <set>

namespace wfg {

namespace {

std::uint64_t mask(unsigned width) { return width >= 64 ? ~0ULL : ((1ULL << width) - 1); }

} // namespace

std::size_t Dag::KeyHash::operator()(const Node& n) const noexcept {
  std::size_t h = static_cast<std::size_t>(n.op) * 0x9e3779b97f4a7c15ULL;
  h ^= n.width + 0x9e3779b9 + (h << 6) + (h >> 2);
  h ^= std::hash<std::uint64_t>{}(n.value) + 0x9e3779b9 + (h << 6) + (h >> 2);
  for (auto a : n.args) h ^= a + 0x9e3779b9 + (h << 6) + (h >> 2);
  return h;
}

NodeId Dag::intern(NodeOp op, unsigned width, std::uint64_t value, std::vector<NodeId> args) {
  Node n{op, width, value, std::move(args)};
  if (auto it = table_.find(n); it != table_.end()) return it->second;
  if (nodes_.size() >= 0xfffffff0u) throw Error("scalar DAG too large");
  auto id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(n);
  table_.emplace(std::move(n), id);
  return id;
}

NodeId Dag::constant(std::uint64_t v, unsigned width) { return intern(NodeOp::Const, width, v & mask(width), {}); }

NodeId Dag::slot(std::size_t index, unsigned width) { return intern(NodeOp::Slot, width, index, {}); }

NodeId Dag::ite(NodeId c, NodeId a, NodeId b) {
  if (is_const(c)) return node(c).value ? a : b;
  if (a == b) return a;
  if (node(c).op == NodeOp::Not) return ite(node(c).args[0], b, a);
  if (node(a).width == 1) {
    if (is_const(a, 1) && is_const(b, 0)) return c;
    if (is_const(a, 0) && is_const(b, 1)) return not_(c);
    if (is_const(b, 0)) return and_({c, a});
    if (is_const(a, 1)) return or_({c, b});
  }
  return intern(NodeOp::Ite, node(a).width, 0, {c, a, b});
}

NodeId Dag::eq(NodeId a, NodeId b) {
  if (a == b) return truth(true);
  if (a > b) std::swap(a, b);
  if (is_const(a) && is_const(b)) return truth(node(a).value == node(b).value);
  if (is_const(b)) std::swap(a, b);
  if (is_const(a)) {
    const auto k = node(a).value;
    const Node& x = node(b);
    if (x.width == 1) return k ? b : not_(b);
    if (x.op == NodeOp::Ite) {
      const NodeId c = x.args[0], t = x.args[1], e = x.args[2];
      auto foldable = [&](NodeId n) { return is_const(n) || node(n).op == NodeOp::Ite; };
      if (foldable(t) && foldable(e)) return ite(c, eq(t, a), eq(e, a));
    }
  }
  return intern(NodeOp::Eq, 1, 0, {a, b});
}

NodeId Dag::lt(NodeId a, NodeId b) {
  if (a == b) return truth(false);
  if (is_const(a) && is_const(b)) return truth(node(a).value < node(b).value);
  if (is_const(b, 0)) return truth(false);
  if (is_const(a, mask(node(a).width))) return truth(false);
  if (is_const(a, 0)) return not_(eq(b, a));
  return intern(NodeOp::Lt, 1, 0, {a, b});
}

NodeId Dag::le(NodeId a, NodeId b) { return not_(lt(b, a)); }

NodeId Dag::add(NodeId a, NodeId b) {
  const unsigned w = node(a).width;
  if (is_const(a) && is_const(b)) return constant(node(a).value + node(b).value, w);
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  if (a > b) std::swap(a, b);
  return intern(NodeOp::Add, w, 0, {a, b});
}

NodeId Dag::sub(NodeId a, NodeId b) {
  const unsigned w = node(a).width;
  if (is_const(a) && is_const(b)) {
    const auto x = node(a).value, y = node(b).value;
    return constant(x > y ? x - y : 0, w);
  }
  if (is_const(b, 0)) return a;
  if (is_const(a, 0) || a == b) return constant(0, w);
  return intern(NodeOp::Sub, w, 0, {a, b});
}

NodeId Dag::not_(NodeId a) {
  if (is_const(a)) return truth(node(a).value == 0);
  if (node(a).op == NodeOp::Not) return node(a).args[0];
  return intern(NodeOp::Not, 1, 0, {a});
}

NodeId Dag::and_(std::vector<NodeId> xs) {
  std::vector<NodeId> flat;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const NodeId x = xs[i];
    if (is_const(x)) {
      if (node(x).value == 0) return truth(false);
      continue;
    }
    if (node(x).op == NodeOp::And) {
      flat.insert(flat.end(), node(x).args.begin(), node(x).args.end());
    } else {
      flat.push_back(x);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  for (auto x : flat) {
    if (node(x).op == NodeOp::Not && std::binary_search(flat.begin(), flat.end(), node(x).args[0])) {
      return truth(false);
    }
  }
  if (flat.empty()) return truth(true);
  if (flat.size() == 1) return flat[0];
  return intern(NodeOp::And, 1, 0, std::move(flat));
}

NodeId Dag::or_(std::vector<NodeId> xs) {
  std::vector<NodeId> flat;
  for (const NodeId x : xs) {
    if (is_const(x)) {
      if (node(x).value != 0) return truth(true);
      continue;
    }
    if (node(x).op == NodeOp::Or) {
      flat.insert(flat.end(), node(x).args.begin(), node(x).args.end());
    } else {
      flat.push_back(x);
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  for (auto x : flat) {
    if (node(x).op == NodeOp::Not && std::binary_search(flat.begin(), flat.end(), node(x).args[0])) {
      return truth(true);
    }
  }
  if (flat.empty()) return truth(false);
  if (flat.size() == 1) return flat[0];
  return intern(NodeOp::Or, 1, 0, std::move(flat));
}

std::vector<NodeId> Dag::cone(std::span<const NodeId> roots) const {
  std::vector<NodeId> order;
  std::vector<char> mark(nodes_.size(), 0);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  for (auto r : roots) {
    if (mark[r]) continue;
    stack.emplace_back(r, 0);
    mark[r] = 1;
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      const auto& args = nodes_[n].args;
      if (i < args.size()) {
        NodeId a = args[i++];
        if (!mark[a]) {
          mark[a] = 1;
          stack.emplace_back(a, 0);
        }
      } else {
        order.push_back(n);
        stack.pop_back();
      }
    }
  }
  return order;
}

std::vector<std::size_t> Dag::support(NodeId id) const {
  std::set<std::size_t> s;
  NodeId roots[] = {id};
  for (auto n : cone(roots)) {
    if (nodes_[n].op == NodeOp::Slot) s.insert(static_cast<std::size_t>(nodes_[n].value));
  }
  return {s.begin(), s.end()};
}

std::uint64_t Dag::eval(NodeId id, std::span<const std::uint64_t> slots) const {
  NodeId roots[] = {id};
  std::unordered_map<NodeId, std::uint64_t> val;
  for (NodeId n : cone(roots)) {
    const Node& x = nodes_[n];
    auto arg = [&](std::size_t i) { return val.at(x.args[i]); };
    std::uint64_t v = 0;
    switch (x.op) {
    case NodeOp::Const: v = x.value; break;
    case NodeOp::Slot: v = slots[x.value]; break;
    case NodeOp::Ite: v = arg(0) ? arg(1) : arg(2); break;
    case NodeOp::Eq: v = arg(0) == arg(1); break;
    case NodeOp::Lt: v = arg(0) < arg(1); break;
    case NodeOp::Add: v = (arg(0) + arg(1)) & mask(x.width); break;
    case NodeOp::Sub: v = arg(0) > arg(1) ? arg(0) - arg(1) : 0; break;
    case NodeOp::Not: v = arg(0) == 0; break;
    case NodeOp::And:
      v = 1;
      for (std::size_t i = 0; i < x.args.size(); ++i) v = v && arg(i);
      break;
    case NodeOp::Or:
      v = 0;
      for (std::size_t i = 0; i < x.args.size(); ++i) v = v || arg(i);
      break;
    }
    val.emplace(n, v);
  }
  return val.at(id);
}

NodeId Dag::replace(NodeId id, const std::map<std::size_t, NodeId>& defs, std::unordered_map<NodeId, NodeId>& memo) {
  NodeId roots[] = {id};
  for (NodeId n : cone(roots)) {
    if (memo.count(n)) continue;
    const Node x = nodes_[n];  // copy: interning may reallocate
    NodeId out = n;
    auto arg = [&](std::size_t i) { return memo.at(x.args[i]); };
    switch (x.op) {
    case NodeOp::Const: break;
    case NodeOp::Slot:
      if (auto it = defs.find(static_cast<std::size_t>(x.value)); it != defs.end()) out = it->second;
      break;
    case NodeOp::Ite: out = ite(arg(0), arg(1), arg(2)); break;
    case NodeOp::Eq: out = eq(arg(0), arg(1)); break;
    case NodeOp::Lt: out = lt(arg(0), arg(1)); break;
    case NodeOp::Add: out = add(arg(0), arg(1)); break;
    case NodeOp::Sub: out = sub(arg(0), arg(1)); break;
    case NodeOp::Not: out = not_(arg(0)); break;
    case NodeOp::And:
    case NodeOp::Or: {
      std::vector<NodeId> args;
      for (std::size_t i = 0; i < x.args.size(); ++i) args.push_back(arg(i));
      out = x.op == NodeOp::And ? and_(std::move(args)) : or_(std::move(args));
      break;
    }
    }
    memo.emplace(n, out);
  }
  return memo.at(id);
}

std::vector<NodeId> Lowerer::lower(const ExprPtr& e) {
  if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
  std::vector<NodeId> out;
  const auto& args = e->args();
  switch (e->op()) {
  case Op::Var: {
    auto it = env_.find(e->name());
    if (it == env_.end()) throw SortError("variable '" + e->name() + "' is not declared in the query");
    out = it->second;
    if (out.size() != e->sort()->scalar_count()) throw SortError("variable '" + e->name() + "' has the wrong sort");
    std::vector<SortPtr> leaves;
    e->sort()->scalar_leaves(leaves);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (dag_.node(out[i]).width != leaves[i]->bit_width()) {
        throw SortError("variable '" + e->name() + "' has the wrong sort");
      }
    }
    break;
  }
  case Op::Const: {
    std::vector<std::uint64_t> scalars;
    append_scalars(e->constant(), scalars);
    std::vector<SortPtr> leaves;
    e->sort()->scalar_leaves(leaves);
    for (std::size_t i = 0; i < scalars.size(); ++i) out.push_back(dag_.constant(scalars[i], leaves[i]->bit_width()));
    break;
  }
  case Op::Field: {
    auto r = lower(args[0]);
    const auto off = args[0]->sort()->scalar_offset(e->indices()[0]);
    out.assign(r.begin() + static_cast<std::ptrdiff_t>(off),
               r.begin() + static_cast<std::ptrdiff_t>(off + e->sort()->scalar_count()));
    break;
  }
  case Op::Update: {
    out = lower(args[0]);
    for (std::size_t i = 0; i < e->indices().size(); ++i) {
      auto v = lower(args[i + 1]);
      const auto off = e->sort()->scalar_offset(e->indices()[i]);
      std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
    }
    break;
  }
  case Op::Make:
  case Op::Tuple:
    for (const auto& a : args) {
      auto v = lower(a);
      out.insert(out.end(), v.begin(), v.end());
    }
    break;
  case Op::Ite: {
    auto c = lower(args[0])[0];
    auto a = lower(args[1]);
    auto b = lower(args[2]);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(dag_.ite(c, a[i], b[i]));
    break;
  }
  case Op::Case: {
    auto x = lower(args[0])[0];
    const unsigned w = dag_.node(x).width;
    out = lower(args.back());
    for (std::size_t k = e->case_keys().size(); k-- > 0;) {
      std::vector<NodeId> hits;
      for (auto key : e->case_keys()[k]) hits.push_back(dag_.eq(x, dag_.constant(key, w)));
      auto c = dag_.or_(std::move(hits));
      auto arm = lower(args[k + 1]);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = dag_.ite(c, arm[i], out[i]);
    }
    break;
  }
  case Op::Eq: {
    auto a = lower(args[0]);
    auto b = lower(args[1]);
    std::vector<NodeId> eqs;
    for (std::size_t i = 0; i < a.size(); ++i) eqs.push_back(dag_.eq(a[i], b[i]));
    out.push_back(dag_.and_(std::move(eqs)));
    break;
  }
  case Op::Lt: out.push_back(dag_.lt(lower(args[0])[0], lower(args[1])[0])); break;
  case Op::Le: out.push_back(dag_.le(lower(args[0])[0], lower(args[1])[0])); break;
  case Op::Add: out.push_back(dag_.add(lower(args[0])[0], lower(args[1])[0])); break;
  case Op::Sub: out.push_back(dag_.sub(lower(args[0])[0], lower(args[1])[0])); break;
  case Op::Not: out.push_back(dag_.not_(lower(args[0])[0])); break;
  case Op::And:
  case Op::Or: {
    std::vector<NodeId> xs;
    for (const auto& a : args) xs.push_back(lower(a)[0]);
    out.push_back(e->op() == Op::And ? dag_.and_(std::move(xs)) : dag_.or_(std::move(xs)));
    break;
  }
  }
  memo_.emplace(e.get(), out);
  return out;
}

LoweredQuery lower_query(const ExprPtr& trm, const ExprPtr& hyp, const VarDecls& vars) {
  if (hyp->sort()->kind() != SortKind::Bool) throw SortError("hypothesis must be boolean");
  for (const auto* e : {&trm, &hyp}) {
    for (const auto& v : free_vars(*e)) {
      auto it = std::find_if(vars.begin(), vars.end(), [&](const auto& d) { return d.first == v; });
      if (it == vars.end()) throw SortError("variable '" + v + "' is not declared in the query");
    }
  }
  LoweredQuery q;
  std::map<std::string, std::vector<NodeId>> env;
  for (const auto& [name, sort] : vars) {
    if (env.count(name)) throw SortError("variable '" + name + "' declared twice");
    q.var_offset.push_back(q.slots.size());
    std::vector<SortPtr> leaves;
    sort->scalar_leaves(leaves);
    std::vector<NodeId> ids;
    for (const auto& leaf : leaves) {
      const unsigned w = leaf->bit_width();
      ids.push_back(q.dag.slot(q.slots.size(), w));
      q.slots.push_back({name, leaf, w, leaf->domain_size()});
    }
    env.emplace(name, std::move(ids));
  }
  Lowerer lw(q.dag, std::move(env));
  q.hyp = lw.lower(hyp)[0];
  q.trm = lw.lower(trm);
  q.trm_sort = trm->sort();
  return q;
}

} // namespace wfg

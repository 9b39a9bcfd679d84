#include "wfg/bitblast.hpp"

#include "wfg/error.hpp"

#include <limits>
#include <sstream>
#include <unordered_map>

namespace wfg {

namespace {

class Blaster {
public:
  explicit Blaster(Circuit& c) : c_(c) {}

  int fresh() {
    if (c_.num_vars == std::numeric_limits<int>::max()) throw BackendError("CNF variable count overflow");
    return ++c_.num_vars;
  }

  void make_true() {
    t_ = fresh();
    c_.clauses.push_back({t_});
  }

  int top() const { return t_; }
  bool is_true(int l) const { return l == t_; }
  bool is_false(int l) const { return l == -t_; }

  int and_n(std::vector<int> ls) {
    std::vector<int> xs;
    for (int l : ls) {
      if (is_false(l)) return -t_;
      if (is_true(l)) continue;
      xs.push_back(l);
    }
    if (xs.empty()) return t_;
    if (xs.size() == 1) return xs[0];
    int v = fresh();
    std::vector<int> big{v};
    for (int l : xs) {
      c_.clauses.push_back({-v, l});
      big.push_back(-l);
    }
    c_.clauses.push_back(std::move(big));
    return v;
  }

  int or_n(std::vector<int> ls) {
    for (auto& l : ls) l = -l;
    return -and_n(std::move(ls));
  }

  int xor2(int a, int b) {
    if (is_false(a)) return b;
    if (is_false(b)) return a;
    if (is_true(a)) return -b;
    if (is_true(b)) return -a;
    if (a == b) return -t_;
    if (a == -b) return t_;
    int v = fresh();
    c_.clauses.push_back({-v, a, b});
    c_.clauses.push_back({-v, -a, -b});
    c_.clauses.push_back({v, -a, b});
    c_.clauses.push_back({v, a, -b});
    return v;
  }

  int mux(int c, int a, int b) {
    if (is_true(c)) return a;
    if (is_false(c)) return b;
    if (a == b) return a;
    if (is_true(a) && is_false(b)) return c;
    if (is_false(a) && is_true(b)) return -c;
    int v = fresh();
    c_.clauses.push_back({-c, -a, v});
    c_.clauses.push_back({-c, a, -v});
    c_.clauses.push_back({c, -b, v});
    c_.clauses.push_back({c, b, -v});
    return v;
  }

  int lt(const std::vector<int>& a, const std::vector<int>& b) {
    int r = -t_;
    for (std::size_t i = 0; i < a.size(); ++i) {
      int here = and_n({-a[i], b[i]});
      int same = -xor2(a[i], b[i]);
      r = or_n({here, and_n({same, r})});
    }
    return r;
  }

  std::vector<int> add(const std::vector<int>& a, const std::vector<int>& b, int carry) {
    std::vector<int> s;
    for (std::size_t i = 0; i < a.size(); ++i) {
      int axb = xor2(a[i], b[i]);
      s.push_back(xor2(axb, carry));
      if (i + 1 < a.size()) carry = or_n({and_n({a[i], b[i]}), and_n({axb, carry})});
    }
    return s;
  }

  std::vector<int> constant(std::uint64_t v, unsigned width) {
    std::vector<int> bits;
    for (unsigned i = 0; i < width; ++i) bits.push_back(((v >> i) & 1) ? t_ : -t_);
    return bits;
  }

private:
  Circuit& c_;
  int t_ = 0;
};

} // namespace

Circuit bitblast(const LoweredQuery& q, const VarDecls& vars) {
  Circuit c;
  Blaster b(c);
  std::vector<std::vector<int>> slot_bits(q.slots.size());
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const std::size_t first = q.var_offset[v];
    const std::size_t last = v + 1 < vars.size() ? q.var_offset[v + 1] : q.slots.size();
    std::vector<std::vector<int>> leaves;
    for (std::size_t s = first; s < last; ++s) {
      for (unsigned i = 0; i < q.slots[s].width; ++i) slot_bits[s].push_back(b.fresh());
      leaves.push_back(slot_bits[s]);
    }
    c.inputs.emplace_back(vars[v].first, std::move(leaves));
  }
  b.make_true();

  for (std::size_t s = 0; s < q.slots.size(); ++s) {
    const auto& info = q.slots[s];
    if (info.width < 64 && info.domain < (1ULL << info.width)) {
      c.clauses.push_back({b.lt(slot_bits[s], b.constant(info.domain, info.width))});
    }
  }

  const Dag& dag = q.dag;
  std::vector<NodeId> roots{q.hyp};
  roots.insert(roots.end(), q.trm.begin(), q.trm.end());
  std::unordered_map<NodeId, std::vector<int>> bits;
  for (NodeId n : dag.cone(roots)) {
    const Node& x = dag.node(n);
    auto arg = [&](std::size_t i) -> const std::vector<int>& { return bits.at(x.args[i]); };
    std::vector<int> out;
    switch (x.op) {
    case NodeOp::Const: out = b.constant(x.value, x.width); break;
    case NodeOp::Slot: out = slot_bits.at(static_cast<std::size_t>(x.value)); break;
    case NodeOp::Ite: {
      int cnd = arg(0)[0];
      for (std::size_t i = 0; i < x.width; ++i) out.push_back(b.mux(cnd, arg(1)[i], arg(2)[i]));
      break;
    }
    case NodeOp::Eq: {
      std::vector<int> same;
      for (std::size_t i = 0; i < arg(0).size(); ++i) same.push_back(-b.xor2(arg(0)[i], arg(1)[i]));
      out.push_back(b.and_n(std::move(same)));
      break;
    }
    case NodeOp::Lt: out.push_back(b.lt(arg(0), arg(1))); break;
    case NodeOp::Add: out = b.add(arg(0), arg(1), -b.top()); break;
    case NodeOp::Sub: {
      std::vector<int> nb;
      for (int l : arg(1)) nb.push_back(-l);
      auto diff = b.add(arg(0), nb, b.top());
      int borrow = b.lt(arg(0), arg(1));
      for (int d : diff) out.push_back(b.and_n({-borrow, d}));
      break;
    }
    case NodeOp::Not: out.push_back(-arg(0)[0]); break;
    case NodeOp::And:
    case NodeOp::Or: {
      std::vector<int> ls;
      for (std::size_t i = 0; i < x.args.size(); ++i) ls.push_back(arg(i)[0]);
      out.push_back(x.op == NodeOp::And ? b.and_n(std::move(ls)) : b.or_n(std::move(ls)));
      break;
    }
    }
    bits.emplace(n, std::move(out));
  }
  c.hyp = bits.at(q.hyp)[0];
  for (NodeId t : q.trm) {
    const auto& tb = bits.at(t);
    c.outputs.insert(c.outputs.end(), tb.begin(), tb.end());
    c.output_widths.push_back(static_cast<unsigned>(tb.size()));
  }
  c.trm_sort = q.trm_sort;
  return c;
}

Circuit bitblast(const ExprPtr& trm, const ExprPtr& hyp, const VarDecls& vars) {
  auto q = lower_query(trm, hyp, vars);
  return bitblast(q, vars);
}

namespace {

bool lit_value(const std::vector<bool>& a, int lit) {
  const auto v = static_cast<std::size_t>(lit < 0 ? -lit : lit);
  if (v >= a.size()) throw Error("assignment does not cover variable " + std::to_string(v));
  return lit < 0 ? !a[v] : a[v];
}

std::uint64_t read_bits(const std::vector<bool>& a, const std::vector<int>& bits, std::size_t from, std::size_t n) {
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (lit_value(a, bits[from + i])) x |= 1ULL << i;
  }
  return x;
}

} // namespace

Value decode(const Circuit& c, const std::vector<bool>& assignment) {
  std::vector<std::uint64_t> scalars;
  std::size_t pos = 0;
  for (unsigned w : c.output_widths) {
    scalars.push_back(read_bits(assignment, c.outputs, pos, w));
    pos += w;
  }
  return value_from_scalars(c.trm_sort, scalars);
}

Value decode_input(const Circuit& c, std::size_t var, const SortPtr& sort, const std::vector<bool>& assignment) {
  std::vector<std::uint64_t> scalars;
  for (const auto& leaf : c.inputs.at(var).second) scalars.push_back(read_bits(assignment, leaf, 0, leaf.size()));
  return value_from_scalars(sort, scalars);
}

std::string to_dimacs(const Circuit& c) {
  std::ostringstream out;
  out << "p cnf " << c.num_vars << ' ' << c.clauses.size() + 1 << '\n';
  for (const auto& cl : c.clauses) {
    for (int l : cl) out << l << ' ';
    out << "0\n";
  }
  out << c.hyp << " 0\n";
  return out.str();
}

} // namespace wfg

#include "support.hpp"

#include "wfg/error.hpp"
#include "wfg/eval.hpp"
#include "wfg/ipasir.hpp"
#include "wfg/sexpr.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace wfg::test {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Descriptor descriptor(const SExpr& e) {
  Descriptor d;
  for (const auto& it : e.items) {
    if (it.is_integer()) d.emplace_back(it.integer);
    else d.emplace_back(it.text);
  }
  return d;
}

} // namespace

std::string models_dir() { return WFG_MODELS_DIR; }
std::string data_path(const std::string& name) { return std::string(WFG_TEST_DATA_DIR) + "/" + name; }

Model bakery(const ParamOverrides& o) { return load_model(models_dir() + "/bakery.wfm", o); }
Model mutant(const std::string& name, const ParamOverrides& o) {
  return load_model(models_dir() + "/mutants/" + name + ".wfm", o);
}

std::vector<Value> reference_rank_nodes(const SortPtr& node_sort) {
  auto forms = read_sexprs(slurp(data_path("bakery-rank-nodes.lisp")));
  std::vector<Value> out;
  for (const auto& n : forms.at(0).items) out.push_back(parse_value(n, node_sort));
  return out;
}

Omap reference_rank_omap(const SortPtr& node_sort) {
  auto forms = read_sexprs(slurp(data_path("bakery-rank-omap.lisp")));
  Omap m;
  for (const auto& pair : forms.at(0).items) {
    if (pair.items.size() != 3 || !pair.items[1].is_symbol(".")) throw Error("bad omap entry " + to_string(pair));
    m.emplace(parse_value(pair.items[0], node_sort), descriptor(pair.items[2]));
  }
  return m;
}

void DpllSolver::add_clause(std::span<const int> lits) {
  if (lits.empty()) empty_ = true;
  for (int l : lits) vars_ = std::max(vars_, std::abs(l));
  clauses_.emplace_back(lits.begin(), lits.end());
}

bool DpllSolver::propagate(std::vector<signed char>& a) const {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : clauses_) {
      int open = 0, last = 0;
      bool sat = false;
      for (int l : c) {
        const signed char v = a[static_cast<std::size_t>(std::abs(l))];
        if (v == 0) {
          ++open;
          last = l;
        } else if ((v > 0) == (l > 0)) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (open == 0) return false;
      if (open == 1) {
        a[static_cast<std::size_t>(std::abs(last))] = last > 0 ? 1 : -1;
        changed = true;
      }
    }
  }
  return true;
}

bool DpllSolver::search(std::vector<signed char> a) {
  if (!propagate(a)) return false;
  auto it = std::find(a.begin() + 1, a.end(), 0);
  if (it == a.end()) {
    model_ = std::move(a);
    return true;
  }
  for (signed char s : {1, -1}) {
    *it = s;
    if (search(a)) return true;
  }
  return false;
}

bool DpllSolver::solve() {
  if (empty_) return false;
  return search(std::vector<signed char>(static_cast<std::size_t>(vars_) + 1, 0));
}

std::unique_ptr<Backend> dpll_backend() {
  return std::make_unique<SatBackend>([] { return std::make_unique<DpllSolver>(); }, "dpll");
}

std::unique_ptr<Backend> ipasir_backend() {
  if (IpasirLibrary::env_path().empty()) return nullptr;
  return make_backend("ipasir");
}

std::uint64_t domain_size(const VarDecls& vars) {
  std::uint64_t n = 1;
  for (const auto& [name, s] : vars) {
    std::vector<SortPtr> leaves;
    s->scalar_leaves(leaves);
    for (const auto& l : leaves) n *= l->domain_size();
  }
  return n;
}

EnumResult brute_force(const Query& q) {
  std::vector<std::vector<SortPtr>> leaves(q.vars.size());
  std::vector<std::uint64_t> radix;
  for (std::size_t i = 0; i < q.vars.size(); ++i) {
    q.vars[i].second->scalar_leaves(leaves[i]);
    for (const auto& l : leaves[i]) radix.push_back(l->domain_size());
  }
  std::vector<std::uint64_t> digits(radix.size(), 0);
  std::set<Value> found;
  for (;;) {
    Env env;
    std::size_t at = 0;
    for (std::size_t i = 0; i < q.vars.size(); ++i) {
      std::span<const std::uint64_t> part(digits.data() + at, leaves[i].size());
      env.emplace(q.vars[i].first, value_from_scalars(q.vars[i].second, part));
      at += leaves[i].size();
    }
    if (eval_expr(q.hyp, env).as_bool()) found.insert(eval_expr(q.trm, env));
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == radix[k]) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  EnumResult r;
  r.values.assign(found.begin(), found.end());
  r.is_total = found.size() < q.num;
  return r;
}

QueryGen::QueryGen(std::uint64_t seed)
    : nat2(Sort::nat(2)), nat3(Sort::nat(3)), boolean(Sort::boolean()),
      color(Sort::enumeration("color", {"red", "green", "blue"})),
      pair(Sort::record("pair", {{"x", Sort::nat(2)}, {"f", Sort::boolean()}})), rng(seed) {}

ExprPtr QueryGen::leaf(const SortPtr& s) {
  std::vector<const std::pair<std::string, SortPtr>*> fit;
  for (const auto& v : vars_) {
    if (same_sort(v.second, s)) fit.push_back(&v);
  }
  if (!fit.empty() && pick(4) != 0) return ex::var(fit[pick(fit.size())]->first, s);
  std::vector<SortPtr> leaves;
  s->scalar_leaves(leaves);
  std::vector<std::uint64_t> xs;
  for (const auto& l : leaves) xs.push_back(pick(static_cast<std::size_t>(l->domain_size())));
  return ex::constant(value_from_scalars(s, xs));
}

ExprPtr QueryGen::nat_expr(unsigned w, int depth) {
  const auto s = w == 2 ? nat2 : nat3;
  if (depth <= 0) return leaf(s);
  switch (pick(7)) {
  case 0: return ex::add(nat_expr(w, depth - 1), nat_expr(w, depth - 1));
  case 1: return ex::sub(nat_expr(w, depth - 1), nat_expr(w, depth - 1));
  case 2: return ex::ite(bool_expr(depth - 1), nat_expr(w, depth - 1), nat_expr(w, depth - 1));
  case 3:
    if (w == 2) return ex::field(expr(pair, depth - 1), "x");
    return leaf(s);
  case 4: {
    auto k = pick(1u << w);
    return ex::case_nat(nat_expr(w, depth - 1), {{{k}, nat_expr(w, depth - 1)}}, nat_expr(w, depth - 1));
  }
  default: return leaf(s);
  }
}

ExprPtr QueryGen::bool_expr(int depth) {
  if (depth <= 0) return leaf(boolean);
  const unsigned w = pick(2) ? 2 : 3;
  switch (pick(10)) {
  case 0: return ex::not_(bool_expr(depth - 1));
  case 1: return ex::and_({bool_expr(depth - 1), bool_expr(depth - 1)});
  case 2: return ex::or_({bool_expr(depth - 1), bool_expr(depth - 1)});
  case 3: return ex::eq(nat_expr(w, depth - 1), nat_expr(w, depth - 1));
  case 4: return ex::lt(nat_expr(w, depth - 1), nat_expr(w, depth - 1));
  case 5: return ex::le(nat_expr(w, depth - 1), nat_expr(w, depth - 1));
  case 6: return ex::eq(expr(color, depth - 1), expr(color, depth - 1));
  case 7: return ex::field(expr(pair, depth - 1), "f");
  case 8: return ex::implies(bool_expr(depth - 1), bool_expr(depth - 1));
  default: return leaf(boolean);
  }
}

ExprPtr QueryGen::expr(const SortPtr& s, int depth) {
  if (s->kind() == SortKind::Bool) return bool_expr(depth);
  if (s->kind() == SortKind::Nat) return nat_expr(s->width(), depth);
  if (depth <= 0) return leaf(s);
  if (s->kind() == SortKind::Enum) {
    if (pick(2)) return ex::ite(bool_expr(depth - 1), expr(s, depth - 1), expr(s, depth - 1));
    return leaf(s);
  }
  switch (pick(4)) {
  case 0: return ex::update(expr(s, depth - 1), {{"x", nat_expr(2, depth - 1)}});
  case 1: return ex::make(s, {nat_expr(2, depth - 1), bool_expr(depth - 1)});
  case 2: return ex::ite(bool_expr(depth - 1), expr(s, depth - 1), expr(s, depth - 1));
  default: return leaf(s);
  }
}

Query QueryGen::query(unsigned max_bits, std::size_t num) {
  const std::vector<std::pair<SortPtr, unsigned>> vocab{{nat2, 2}, {nat3, 3}, {boolean, 1}, {color, 2}, {pair, 3}};
  vars_.clear();
  unsigned bits = 0;
  const std::size_t want = 1 + pick(5);
  for (std::size_t i = 0; i < want; ++i) {
    const auto& [s, b] = vocab[pick(vocab.size())];
    if (bits + b > max_bits) continue;
    bits += b;
    vars_.emplace_back("v" + std::to_string(i), s);
  }
  Query q;
  q.vars = vars_;
  q.num = num;
  const int depth = 1 + static_cast<int>(pick(3));
  q.hyp = pick(5) == 0 ? ex::boolean(true) : bool_expr(depth);
  switch (pick(6)) {
  case 0: q.trm = expr(nat2, depth); break;
  case 1: q.trm = expr(nat3, depth); break;
  case 2: q.trm = expr(color, depth); break;
  case 3: q.trm = expr(pair, depth); break;
  case 4: q.trm = ex::tuple({{"a", expr(nat3, depth)}, {"b", expr(boolean, depth)}}); break;
  default:
    if (vars_.empty()) q.trm = expr(boolean, depth);
    else q.trm = ex::var(vars_[0].first, vars_[0].second);
  }
  return q;
}

Graph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t measures, double p) {
  Graph g;
  std::bernoulli_distribution arc(p);
  std::uniform_int_distribution<int> tag(0, 2);
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back(Value::nat(i, 8));
  for (std::size_t m = 0; m < measures; ++m) {
    g.measures.push_back("m" + std::to_string(m));
    g.widths.push_back(1);
  }
  g.succ.resize(n);
  g.tags.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!arc(rng)) continue;
      g.succ[u].push_back(v);
      std::vector<OrderTag> t;
      for (std::size_t m = 0; m < measures; ++m) t.push_back(static_cast<OrderTag>(tag(rng)));
      g.tags[u].push_back(std::move(t));
    }
  }
  g.tagged = true;
  return g;
}

} // namespace wfg::test

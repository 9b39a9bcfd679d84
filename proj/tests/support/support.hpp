#pragma once

#include "wfg/absgraph.hpp"
#include "wfg/enumerate.hpp"
#include "wfg/measure.hpp"
#include "wfg/model.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace wfg::test {

std::string models_dir();
std::string data_path(const std::string& name);

Model bakery(const ParamOverrides& o = {});
Model mutant(const std::string& name, const ParamOverrides& o = {});

/// Reference node list and omap of the rank map at n = 2, r = 2, w = 3.
std::vector<Value> reference_rank_nodes(const SortPtr& node_sort);
Omap reference_rank_omap(const SortPtr& node_sort);

/// Plain DPLL with unit propagation. Slow, but independent of any library.
class DpllSolver : public SatSolver {
public:
  void add_clause(std::span<const int> lits) override;
  bool solve() override;
  bool value(int var) override { return var < static_cast<int>(model_.size()) && model_[var] > 0; }

private:
  bool propagate(std::vector<signed char>& a) const;
  bool search(std::vector<signed char> a);

  std::vector<std::vector<int>> clauses_;
  int vars_ = 0;
  bool empty_ = false;
  std::vector<signed char> model_;
};

std::unique_ptr<Backend> dpll_backend();
/// Null when WFG_IPASIR_LIB is unset.
std::unique_ptr<Backend> ipasir_backend();

/// Every assignment of the query's variables, evaluated with eval_expr.
/// Returns the full value set; is_total follows the num rule.
EnumResult brute_force(const Query& q);

/// Product of the scalar domains of the declared variables.
std::uint64_t domain_size(const VarDecls& vars);

/// Random well-sorted queries over a small fixed sort vocabulary.
class QueryGen {
public:
  explicit QueryGen(std::uint64_t seed);

  /// Variables with at most `max_bits` input bits in total.
  Query query(unsigned max_bits, std::size_t num);
  ExprPtr expr(const SortPtr& s, int depth);

  SortPtr nat2, nat3, boolean, color, pair;
  std::mt19937_64 rng;

private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  ExprPtr leaf(const SortPtr& s);
  ExprPtr nat_expr(unsigned w, int depth);
  ExprPtr bool_expr(int depth);

  VarDecls vars_;
};

/// Random tagged graph: nodes 0..n-1 as 8-bit naturals, arcs with
/// probability p, tags uniform over the three verdicts.
Graph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t measures, double p);

} // namespace wfg::test

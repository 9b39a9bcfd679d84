#pragma once

#include "wfg/bitblast.hpp"
#include "wfg/expr.hpp"
#include "wfg/value.hpp"

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wfg {

/// compute-finite-values input: values of `trm` over assignments to `vars`
/// satisfying `hyp`, at most `num` of them.
struct Query {
  ExprPtr trm;
  ExprPtr hyp;
  VarDecls vars;
  std::size_t num = 1;
};

struct EnumResult {
  std::vector<Value> values;  // distinct, canonically ordered
  bool is_total = true;       // false iff the search stopped at `num` values
  std::size_t solve_calls = 0;

  friend bool operator==(const EnumResult& a, const EnumResult& b) {
    return a.is_total == b.is_total && a.values == b.values;
  }
};

/// Incremental SAT contract: clauses are never retracted.
class SatSolver {
public:
  virtual ~SatSolver() = default;
  virtual void add_clause(std::span<const int> lits) = 0;
  /// True for SAT, false for UNSAT; throws BackendError otherwise.
  virtual bool solve() = 0;
  /// Model value of a variable after a SAT answer.
  virtual bool value(int var) = 0;
};

using SolverFactory = std::function<std::unique_ptr<SatSolver>()>;

/// Enumeration backend. Implementations are safe to call concurrently; each
/// call runs in its own session.
class Backend {
public:
  virtual ~Backend() = default;
  virtual EnumResult enumerate(const Query& q) const = 0;
  virtual std::string name() const = 0;
};

/// Reference oracle: depth-first search over the scalar slots in the
/// support of the query, evaluating hypothesis conjuncts as soon as their
/// slots are assigned. Conjuncts of the form `slot = e` are solved by
/// substitution instead of search.
class ExhaustiveBackend : public Backend {
public:
  EnumResult enumerate(const Query& q) const override;
  std::string name() const override { return "exhaustive"; }
};

/// Blocking-clause enumeration on an incremental SAT solver.
class SatBackend : public Backend {
public:
  SatBackend(SolverFactory factory, std::string name) : factory_(std::move(factory)), name_(std::move(name)) {}
  EnumResult enumerate(const Query& q) const override;
  std::string name() const override { return name_; }

private:
  SolverFactory factory_;
  std::string name_;
};

/// Writes the CNF of every query to `dir/query-NNNNN.cnf`, then delegates.
class DumpingBackend : public Backend {
public:
  DumpingBackend(const Backend& inner, std::string dir) : inner_(inner), dir_(std::move(dir)) {}
  EnumResult enumerate(const Query& q) const override;
  std::string name() const override { return inner_.name(); }

private:
  const Backend& inner_;
  std::string dir_;
  mutable std::atomic<std::size_t> counter_{0};
};

/// The solver loop on an already translated circuit: install clauses and the
/// hypothesis, then repeat {solve; decode; block} until UNSAT or `num` values.
EnumResult compute_finite_values(const Circuit& c, std::size_t num, SatSolver& solver);

EnumResult compute_finite_values(const ExprPtr& trm, const ExprPtr& hyp, const VarDecls& vars, std::size_t num,
                                 const Backend& backend);

/// "exhaustive", or "ipasir" (library from WFG_IPASIR_LIB).
std::unique_ptr<Backend> make_backend(std::string_view name);

} // namespace wfg

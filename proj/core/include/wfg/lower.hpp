#pragma once

#include "wfg/expr.hpp"
#include "wfg/sort.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

namespace wfg {

using NodeId = std::uint32_t;

enum class NodeOp : std::uint8_t { Const, Slot, Ite, Eq, Lt, Add, Sub, Not, And, Or };

/// A scalar operation over unsigned integers of a fixed bit width. Booleans
/// are width-1 numbers and enum values are their codes.
struct Node {
  NodeOp op;
  unsigned width;
  std::uint64_t value;  // Const: the constant; Slot: the slot index
  std::vector<NodeId> args;
};

/// Hash-consed scalar DAG. Constructors fold constants and apply a few
/// local identities, so structurally equal results share one id.
class Dag {
public:
  NodeId constant(std::uint64_t v, unsigned width);
  NodeId truth(bool b) { return constant(b ? 1 : 0, 1); }
  NodeId slot(std::size_t index, unsigned width);
  NodeId ite(NodeId c, NodeId a, NodeId b);
  NodeId eq(NodeId a, NodeId b);
  NodeId lt(NodeId a, NodeId b);
  NodeId le(NodeId a, NodeId b);  // built as not(lt(b, a))
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId not_(NodeId a);
  NodeId and_(std::vector<NodeId> xs);
  NodeId or_(std::vector<NodeId> xs);

  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool is_const(NodeId id) const { return nodes_[id].op == NodeOp::Const; }
  bool is_const(NodeId id, std::uint64_t v) const { return is_const(id) && nodes_[id].value == v; }

  /// Slot indices the node depends on, ascending.
  std::vector<std::size_t> support(NodeId id) const;
  /// Nodes of the cone of `roots` in topological order (arguments first).
  std::vector<NodeId> cone(std::span<const NodeId> roots) const;
  /// Evaluates a node given values for every slot in its support.
  std::uint64_t eval(NodeId id, std::span<const std::uint64_t> slots) const;

  /// Rebuilds `id` with slots replaced by nodes. `memo` may be shared
  /// between calls using the same replacement map.
  NodeId replace(NodeId id, const std::map<std::size_t, NodeId>& defs, std::unordered_map<NodeId, NodeId>& memo);

private:
  NodeId intern(NodeOp op, unsigned width, std::uint64_t value, std::vector<NodeId> args);

  struct KeyHash {
    std::size_t operator()(const Node& n) const noexcept;
  };
  struct KeyEq {
    bool operator()(const Node& a, const Node& b) const noexcept {
      return a.op == b.op && a.width == b.width && a.value == b.value && a.args == b.args;
    }
  };

  std::vector<Node> nodes_;
  std::unordered_map<Node, NodeId, KeyHash, KeyEq> table_;
};

/// One scalar leaf of a declared variable.
struct SlotInfo {
  std::string var;
  SortPtr sort;  // scalar sort of the leaf
  unsigned width;
  std::uint64_t domain;  // number of admissible codes
};

/// A query lowered to scalars: slot table (declared variables flattened
/// in declaration order), the hypothesis and the term's scalar outputs.
struct LoweredQuery {
  Dag dag;
  std::vector<SlotInfo> slots;
  std::vector<std::size_t> var_offset;  // first slot of each declared variable
  NodeId hyp = 0;
  std::vector<NodeId> trm;
  SortPtr trm_sort;
};

/// Lowers an expression to scalar nodes with variables bound to slot
/// ranges. Throws SortError for variables missing from `env`.
class Lowerer {
public:
  Lowerer(Dag& dag, std::map<std::string, std::vector<NodeId>> env) : dag_(dag), env_(std::move(env)) {}
  std::vector<NodeId> lower(const ExprPtr& e);

private:
  Dag& dag_;
  std::map<std::string, std::vector<NodeId>> env_;
  std::unordered_map<const Expr*, std::vector<NodeId>> memo_;
};

LoweredQuery lower_query(const ExprPtr& trm, const ExprPtr& hyp, const VarDecls& vars);

} // namespace wfg

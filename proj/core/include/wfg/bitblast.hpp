#pragma once

#include "wfg/expr.hpp"
#include "wfg/lower.hpp"
#include "wfg/value.hpp"

#include <string>
#include <vector>

namespace wfg {

/// CNF over variables 1..num_vars (negation by sign). Input bits come first
/// in declaration order, little-endian per scalar; gate variables follow in
/// Tseitin order.
struct Circuit {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  /// Per declared variable: bit literals of each scalar leaf.
  std::vector<std::pair<std::string, std::vector<std::vector<int>>>> inputs;
  std::vector<int> outputs;            // term bits, scalars concatenated
  std::vector<unsigned> output_widths; // bits per term scalar
  int hyp = 0;                         // literal of the hypothesis
  SortPtr trm_sort;
};

/// Tseitin translation. The clauses encode the gates plus the domain
/// constraints of enum inputs; the hypothesis is a literal, not a unit.
Circuit bitblast(const ExprPtr& trm, const ExprPtr& hyp, const VarDecls& vars);
Circuit bitblast(const LoweredQuery& q, const VarDecls& vars);

/// Decodes the term's value from a total assignment indexed by variable
/// (index 0 unused). Throws Error on an out-of-range enum code.
Value decode(const Circuit& c, const std::vector<bool>& assignment);
/// Decodes the value of declared input `var`.
Value decode_input(const Circuit& c, std::size_t var, const SortPtr& sort, const std::vector<bool>& assignment);

/// DIMACS text of the circuit's clauses plus the unit clause asserting hyp.
std::string to_dimacs(const Circuit& c);

} // namespace wfg

#pragma once

#include "wfg/measure.hpp"
#include "wfg/ordinals.hpp"
#include "wfg/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wfg {

struct Verdict {
  std::string check;
  bool pass = true;
  std::string method;
  std::string detail;                              // failure description
  std::optional<nlohmann::ordered_json> witness;   // concrete pair on failure
  std::size_t queries = 0;
};

/// map-e-member-nexts (with init or domain coverage), map-o-decrement-strict
/// and map-o-decrement-non-strict, in that order. The relation is enumerated
/// from every graph node; nothing of `g` beyond nodes, arcs and tags is used.
std::vector<Verdict> check_assumptions(const Relation& rel, const Abstraction& abs, const Graph& g,
                                       const Backend& backend, const GraphOptions& opts = {});

/// valid-omap: every arc strictly decreases its descriptors by the entry scan.
Verdict check_omap_valid(const Graph& g, const Omap& m);

/// Every concrete related pair from a graph node decreases both mk-bnl
/// (bnl<) and msr (o<).
Verdict check_measure_decrease(const Relation& rel, const Abstraction& abs, const Omap& m, const Graph& g,
                               const Backend& backend, const GraphOptions& opts = {});

/// msr and mk-bnl of concrete states under an omap.
class OmapMeasure {
public:
  OmapMeasure(const Abstraction& abs, const Omap& m);
  std::size_t bound() const noexcept { return bound_; }
  Bnl bnl(const Value& state) const;
  Ordinal ordinal(const Value& state) const { return bnl_to_o(bnl(state)); }

private:
  const Abstraction& abs_;
  const Omap& omap_;
  std::size_t bound_;
};

struct DescentStep {
  Value state;
  Ordinal measure;
};

/// Follows `successor` from x0 until it returns nothing, throwing
/// MonitorError when the measure fails to decrease or after max_steps.
std::vector<DescentStep> iterate_descent(const Value& x0, const std::function<std::optional<Value>(const Value&)>& successor,
                                         const std::function<Ordinal(const Value&)>& measure, std::size_t max_steps);

struct InvariantVerdict {
  bool pass = true;
  std::size_t nodes = 0;
  std::vector<std::string> failing;  // reached nodes with the invariant false
};

/// Reach graph of the step relation under (split fields..., :inv inv(x)).
InvariantVerdict certify_state_invariant(const Model& model, const InvariantDecl& inv, const Backend& backend,
                                         const GraphOptions& opts = {});

struct Certificate {
  std::string model;
  std::string map;
  std::string relation;
  std::map<std::string, std::int64_t> params;
  std::string model_hash;
  std::string graph_hash;
  std::string omap_hash;
  std::string backend;
  std::vector<Verdict> verdicts;

  bool pass() const;
};

/// Runs every check for one map of the model against a serialized graph
/// and omap.
Certificate certify(const Model& model, const std::string& map, const Graph& g, const Omap& m, const Backend& backend,
                    const GraphOptions& opts = {});

nlohmann::ordered_json certificate_to_json(const Certificate& c);
std::string sha256_hex(std::string_view data);

} // namespace wfg

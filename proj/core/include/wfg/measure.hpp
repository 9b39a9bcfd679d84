#pragma once

#include "wfg/absgraph.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wfg {

/// A natural (SCC rank) or a component-measure name.
using DescEntry = std::variant<std::uint64_t, std::string>;
using Descriptor = std::vector<DescEntry>;

/// "(4 RUNS 11 0)".
std::string to_string(const Descriptor& d);

/// Node -> measure descriptor, keyed in canonical node order.
using Omap = std::map<Value, Descriptor>;

/// A closed walk (cycle.front() == cycle.back()) along which no measure
/// decreases overall. tags[i][m] tags arc cycle[i] -> cycle[i+1].
struct CycleCounterexample {
  std::vector<std::size_t> cycle;
  std::vector<std::vector<OrderTag>> tags;

  std::size_t length() const noexcept { return cycle.empty() ? 0 : cycle.size() - 1; }
};

struct SynthResult {
  std::optional<Omap> omap;
  std::optional<CycleCounterexample> counterexample;

  bool ok() const noexcept { return omap.has_value(); }
};

/// SCCs of the whole graph, sinks first; members ascending.
std::vector<std::vector<std::size_t>> scc_partition(const Graph& g);

SynthResult synthesize_omap(const Graph& g);

/// Shortest non-decreasing closed walk inside `nodes` (arcs between them
/// only), ties broken by the smallest start node. Empty when none exists.
std::optional<CycleCounterexample> find_min_nondec_cycle(const Graph& g, const std::vector<std::size_t>& nodes);

/// Empty string when `c` is a well-formed non-decreasing cycle of `g`,
/// otherwise the reason it is not.
std::string check_cycle(const Graph& g, const CycleCounterexample& c);

nlohmann::ordered_json omap_to_json(const Omap& m);
Omap omap_from_json(const nlohmann::ordered_json& j, const SortPtr& node_sort);
nlohmann::ordered_json cycle_to_json(const Graph& g, const CycleCounterexample& c);
std::string cycle_report(const Graph& g, const CycleCounterexample& c);

} // namespace wfg

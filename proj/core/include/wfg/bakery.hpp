#pragma once

#include "wfg/certify.hpp"
#include "wfg/model.hpp"
#include "wfg/ordinals.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace wfg::bakery {

struct Params {
  unsigned n = 2;  // processes
  unsigned r = 2;  // runs
  unsigned w = 3;  // counter width
};

struct Tr {
  std::uint64_t loc = 0;
  bool choosing = false;
  std::uint64_t temp = 0;
  std::uint64_t pos = 0;
  bool pos_valid = false;
  std::uint64_t loop = 0;
  std::uint64_t runs = 0;
  bool done = false;
  std::uint64_t ndx = 0;

  friend bool operator==(const Tr&, const Tr&) = default;
};

struct Sh {
  std::uint64_t max = 0;
  friend bool operator==(const Sh&, const Sh&) = default;
};

struct St {
  std::vector<Tr> trs;
  Sh sh;
};

Tr tr_init(const Params& p, std::uint64_t k);
/// trs[i].ndx = i + 1, max = 0.
St initial(const Params& p);

Tr tr_next(const Params& p, const Tr& a, const Sh& sh);
Sh sh_next(const Sh& sh, const Tr& a);
bool tr_blok(const Tr& a, const Tr& b);
inline bool tr_done(const Tr& a) { return a.done; }
bool all_done(const std::vector<Tr>& l);

std::optional<std::size_t> find_undone(const std::vector<Tr>& l);
bool bake_blok(const Tr& a, const std::vector<Tr>& l);
/// Smallest index blocking `a`; throws Error if none does.
std::size_t pick_blok(const Tr& a, const std::vector<Tr>& l);

/// Measure used to admit find-unblok: must strictly decrease from each
/// blocked state to its blocker.
using TrMeasure = std::function<Ordinal(const Tr&)>;

/// Follows blockers from index n to an unblocked one. With a measure, each
/// hop is checked to decrease it (MonitorError otherwise); `hops` receives
/// the number of hops taken.
std::size_t find_unblok(std::size_t n, const std::vector<Tr>& l, const Sh& sh, const TrMeasure& measure = {},
                        std::size_t* hops = nullptr);

/// Picks among the ready indices (not done, not blocked), ascending.
using Oracle = std::function<std::size_t(const std::vector<std::size_t>& ready)>;

/// Without an oracle, the reference witness find_unblok(find_undone(l)).
/// Throws Error if every process is done.
std::size_t choose_ready(const std::vector<Tr>& l, const Sh& sh, const Oracle& oracle = {},
                         const TrMeasure& measure = {});

Value to_value(const Tr& a, const SortPtr& state_sort);
Tr from_value(const Value& v);
Value to_value(const Sh& sh, const SortPtr& shared_sort);

/// mk-bnl of a process state under an omap of one of the model's maps.
class OmapTrMeasure {
public:
  OmapTrMeasure(const Model& model, const std::string& map, Omap omap);
  Bnl bnl(const Tr& a) const;
  Ordinal ordinal(const Tr& a) const { return bnl_to_o(bnl(a)); }
  std::size_t bound() const { return measure_->bound(); }

private:
  SortPtr state_sort_;
  Abstraction abs_;
  Omap omap_;
  std::unique_ptr<OmapMeasure> measure_;
};

/// Per-process rank bnls, in list order.
Bnll bake_rank_bnll(const std::vector<Tr>& l, const OmapTrMeasure& rank);

struct RunStep {
  std::size_t step;
  std::uint64_t ndx;
  std::uint64_t loc_before;
  std::uint64_t loc_after;
  Bnll measure;  // after the step
};

struct RunResult {
  St final;
  std::vector<RunStep> steps;
  std::size_t unblok_calls = 0;
};

struct RunOptions {
  Oracle oracle;
  const OmapTrMeasure* nlock = nullptr;  // admits find-unblok when set
  std::size_t max_steps = 1'000'000;
};

/// Runs until all processes are done. The monitor checks that the rank
/// bnll strictly decreases on every step; violations throw MonitorError.
RunResult bake_run(const Params& p, St st, const OmapTrMeasure& rank, const RunOptions& opts = {});

/// "step ndx loc-before loc-after measure" lines.
void write_trace(std::ostream& out, const RunResult& r);

/// Uniform choice among the ready indices.
Oracle random_oracle(std::uint64_t seed);

std::string to_string(const Bnll& b);

} // namespace wfg::bakery

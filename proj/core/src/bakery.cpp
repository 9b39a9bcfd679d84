#include "wfg/bakery.hpp"

#include "wfg/error.hpp"

#include <algorithm>
#include <memory>

namespace wfg::bakery {

namespace {

std::uint64_t mask(unsigned w) { return w >= 64 ? ~0ULL : (1ULL << w) - 1; }
std::uint64_t dec(std::uint64_t x) { return x ? x - 1 : 0; }

} // namespace

Tr tr_init(const Params& p, std::uint64_t k) {
  Tr a;
  a.runs = p.r;
  a.ndx = k;
  return a;
}

St initial(const Params& p) {
  St st;
  for (unsigned k = 1; k <= p.n; ++k) st.trs.push_back(tr_init(p, k));
  return st;
}

Tr tr_next(const Params& p, const Tr& a, const Sh& sh) {
  Tr b = a;
  switch (a.loc) {
  case 0: b.loc = 1; b.choosing = true; break;
  case 1: b.loc = 2; b.temp = sh.max; break;
  case 2: b.loc = 3; b.pos = (a.temp + 1) & mask(p.w); b.loop = p.n; break;
  case 3: b.loc = 4; break;
  case 4: b.loc = 5; b.loop = dec(a.loop); break;
  case 5: b.loc = a.loop == 0 ? 6 : 3; b.pos_valid = a.loop == 0; break;
  case 6: b.loc = 7; break;
  case 7: b.loc = 8; b.choosing = false; b.loop = p.n; break;
  case 8: b.loc = 9; break;
  case 9: b.loc = 10; break;
  case 10: b.loc = 11; break;
  case 11: b.loc = 12; b.loop = dec(a.loop); break;
  case 12: b.loc = a.loop == 0 ? 13 : 8; break;
  case 13: b.loc = 14; b.pos_valid = false; break;
  case 14: b.loc = 15; b.runs = dec(a.runs); break;
  case 15: b.loc = a.runs == 0 ? 16 : 0; break;
  default: b.loc = 17; b.done = true; break;
  }
  return b;
}

Sh sh_next(const Sh& sh, const Tr& a) {
  if (a.loc == 6 && !(sh.max > a.temp)) return Sh{a.pos};
  return sh;
}

bool tr_blok(const Tr& a, const Tr& b) {
  if (a.loop != b.ndx) return false;
  switch (a.loc) {
  case 3: return a.pos == 0 && b.pos_valid;
  case 8: return b.pos != 0 && b.choosing;
  case 9: return b.pos_valid && b.pos < a.pos;
  case 10: return b.pos_valid && b.pos == a.pos && b.ndx < a.ndx;
  default: return false;
  }
}

bool all_done(const std::vector<Tr>& l) {
  return std::all_of(l.begin(), l.end(), [](const Tr& a) { return a.done; });
}

std::optional<std::size_t> find_undone(const std::vector<Tr>& l) {
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!l[i].done) return i;
  }
  return std::nullopt;
}

bool bake_blok(const Tr& a, const std::vector<Tr>& l) {
  return std::any_of(l.begin(), l.end(), [&](const Tr& b) { return tr_blok(a, b); });
}

std::size_t pick_blok(const Tr& a, const std::vector<Tr>& l) {
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (tr_blok(a, l[i])) return i;
  }
  throw Error("pick-blok on a state that nothing blocks");
}

std::size_t find_unblok(std::size_t n, const std::vector<Tr>& l, const Sh& sh, const TrMeasure& measure,
                        std::size_t* hops) {
  (void)sh;
  std::size_t taken = 0;
  while (bake_blok(l.at(n), l)) {
    const std::size_t b = pick_blok(l[n], l);
    if (measure && !o_lt(measure(l[b]), measure(l[n]))) {
      throw MonitorError("nlock measure did not decrease from process " + std::to_string(n) + " to its blocker " +
                         std::to_string(b));
    }
    if (++taken > l.size() && !measure) throw MonitorError("blocking chain does not end");
    n = b;
  }
  if (hops) *hops = taken;
  return n;
}

std::size_t choose_ready(const std::vector<Tr>& l, const Sh& sh, const Oracle& oracle, const TrMeasure& measure) {
  auto first = find_undone(l);
  if (!first) throw Error("choose-ready with every process done");
  const std::size_t witness = find_unblok(*first, l, sh, measure);
  if (l[witness].done || bake_blok(l[witness], l)) {
    throw MonitorError("find-unblok returned a done or blocked process " + std::to_string(witness));
  }
  if (!oracle) return witness;
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!l[i].done && !bake_blok(l[i], l)) ready.push_back(i);
  }
  const std::size_t pick = oracle(ready);
  if (!std::binary_search(ready.begin(), ready.end(), pick)) {
    throw Error("oracle chose process " + std::to_string(pick) + ", which is not ready");
  }
  return pick;
}

Value to_value(const Tr& a, const SortPtr& s) {
  std::vector<Value> fields;
  for (const auto& f : s->fields()) {
    const auto& fs = f.sort;
    auto nat = [&](std::uint64_t v) {
      if (v > mask(fs->width())) throw Error("field " + f.name + " value " + std::to_string(v) + " exceeds its width");
      return Value::nat(v, fs->width());
    };
    if (f.name == "loc") fields.push_back(nat(a.loc));
    else if (f.name == "choosing") fields.push_back(Value::boolean(a.choosing));
    else if (f.name == "temp") fields.push_back(nat(a.temp));
    else if (f.name == "pos") fields.push_back(nat(a.pos));
    else if (f.name == "pos-valid") fields.push_back(Value::boolean(a.pos_valid));
    else if (f.name == "loop") fields.push_back(nat(a.loop));
    else if (f.name == "runs") fields.push_back(nat(a.runs));
    else if (f.name == "done") fields.push_back(Value::boolean(a.done));
    else if (f.name == "ndx") fields.push_back(nat(a.ndx));
    else throw Error("unexpected bake-tr field " + f.name);
  }
  return Value::record(s, std::move(fields));
}

Tr from_value(const Value& v) {
  Tr a;
  a.loc = v.field("loc").as_nat();
  a.choosing = v.field("choosing").as_bool();
  a.temp = v.field("temp").as_nat();
  a.pos = v.field("pos").as_nat();
  a.pos_valid = v.field("pos-valid").as_bool();
  a.loop = v.field("loop").as_nat();
  a.runs = v.field("runs").as_nat();
  a.done = v.field("done").as_bool();
  a.ndx = v.field("ndx").as_nat();
  return a;
}

Value to_value(const Sh& sh, const SortPtr& s) {
  return Value::record(s, {Value::nat(sh.max, s->fields().at(0).sort->width())});
}

OmapTrMeasure::OmapTrMeasure(const Model& model, const std::string& map, Omap omap)
    : state_sort_(model.state_sort()), abs_(abstraction_of(model, model.map(map))), omap_(std::move(omap)) {
  measure_ = std::make_unique<OmapMeasure>(abs_, omap_);
}

Bnl OmapTrMeasure::bnl(const Tr& a) const { return measure_->bnl(to_value(a, state_sort_)); }

Bnll bake_rank_bnll(const std::vector<Tr>& l, const OmapTrMeasure& rank) {
  Bnll out;
  for (const auto& a : l) out.push_back(rank.bnl(a));
  return out;
}

RunResult bake_run(const Params& p, St st, const OmapTrMeasure& rank, const RunOptions& opts) {
  RunResult r;
  TrMeasure nlock;
  if (opts.nlock) nlock = [m = opts.nlock](const Tr& a) { return m->ordinal(a); };
  Bnll before = bake_rank_bnll(st.trs, rank);
  while (!all_done(st.trs)) {
    if (r.steps.size() == opts.max_steps) throw MonitorError("run exceeded " + std::to_string(opts.max_steps) + " steps");
    const std::size_t i = choose_ready(st.trs, st.sh, opts.oracle, nlock);
    ++r.unblok_calls;
    const Tr a = st.trs[i];
    const Sh sh = st.sh;
    st.sh = sh_next(sh, a);
    st.trs[i] = tr_next(p, a, sh);
    Bnll after = bake_rank_bnll(st.trs, rank);
    if (!bnll_lt(after, before) ||
        !o_lt(bnll_to_o(after.size(), after), bnll_to_o(before.size(), before))) {
      throw MonitorError("rank measure did not decrease at step " + std::to_string(r.steps.size()) + " (process " +
                         std::to_string(a.ndx) + ", loc " + std::to_string(a.loc) + ")");
    }
    r.steps.push_back({r.steps.size(), a.ndx, a.loc, st.trs[i].loc, after});
    before = std::move(after);
  }
  r.final = std::move(st);
  return r;
}

void write_trace(std::ostream& out, const RunResult& r) {
  for (const auto& s : r.steps) {
    out << s.step << ' ' << s.ndx << ' ' << s.loc_before << ' ' << s.loc_after << ' ' << to_string(s.measure) << '\n';
  }
}

Oracle random_oracle(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const std::vector<std::size_t>& ready) {
    std::uniform_int_distribution<std::size_t> pick(0, ready.size() - 1);
    return ready[pick(*rng)];
  };
}

std::string to_string(const Bnll& b) {
  std::string out = "(";
  for (std::size_t i = 0; i < b.size(); ++i) {
    out += i ? " (" : "(";
    for (std::size_t j = 0; j < b[i].size(); ++j) out += (j ? " " : "") + std::to_string(b[i][j]);
    out += ")";
  }
  return out + ")";
}

} // namespace wfg::bakery

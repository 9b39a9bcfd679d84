#include "wfg/ordinals.hpp"

#include "wfg/error.hpp"

#include <algorithm>

namespace wfg {

namespace {

void same_bound(const Bnl& a, const Bnl& b) {
  if (a.size() != b.size()) {
    throw Error("bnl bound mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

std::size_t inner_bound(const Bnll& a) {
  if (a.empty()) return 0;
  for (const auto& x : a) {
    if (x.size() != a[0].size()) throw Error("bnll members differ in bound");
  }
  return a[0].size();
}

} // namespace

bool bnl_lt(const Bnl& a, const Bnl& b) {
  same_bound(a, b);
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool bnl_le(const Bnl& a, const Bnl& b) { return !bnl_lt(b, a); }

bool bnll_lt(const Bnll& a, const Bnll& b) {
  if (!a.empty() && !b.empty() && inner_bound(a) != inner_bound(b)) throw Error("bnll inner bound mismatch");
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (bnl_lt(a[i], b[i])) return true;
    if (bnl_lt(b[i], a[i])) return false;
  }
  return false;
}

bool o_p(const Ordinal& a) {
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].coefficient == 0) return false;
    if (i && a.terms[i - 1].exponent <= a.terms[i].exponent) return false;
  }
  return true;
}

bool o_lt(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms[i];
    const auto& y = b.terms[i];
    if (x.exponent != y.exponent) return x.exponent < y.exponent;
    if (x.coefficient != y.coefficient) return x.coefficient < y.coefficient;
  }
  return a.terms.size() < b.terms.size();
}

std::string to_string(const Ordinal& a) {
  if (a.terms.empty()) return "0";
  std::string out;
  for (const auto& t : a.terms) {
    if (!out.empty()) out += " + ";
    if (t.exponent == 0) out += std::to_string(t.coefficient);
    else if (t.exponent == 1) out += "w*" + std::to_string(t.coefficient);
    else out += "w^" + std::to_string(t.exponent) + "*" + std::to_string(t.coefficient);
  }
  return out;
}

Ordinal bnl_to_o(const Bnl& a) {
  Ordinal o;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) o.terms.push_back({a.size() - 1 - i, a[i]});
  }
  return o;
}

Ordinal bnll_to_o(std::size_t len, const Bnll& a) {
  if (a.size() != len) throw Error("bnll length " + std::to_string(a.size()) + " differs from " + std::to_string(len));
  inner_bound(a);
  Bnl flat;
  for (const auto& x : a) flat.insert(flat.end(), x.begin(), x.end());
  return bnl_to_o(flat);
}

Ordinal bnll_to_o_graded(const Bnll& a, std::size_t bound) {
  if (!a.empty() && inner_bound(a) != bound) throw Error("bnll inner bound differs from " + std::to_string(bound));
  Ordinal o = bnll_to_o(a.size(), a);
  o.terms.insert(o.terms.begin(), {a.size() * bound, 1});
  return o;
}

std::size_t bnl_bnd(const Omap& m, const std::map<std::string, std::size_t>& widths) {
  std::size_t best = 0;
  for (const auto& [node, d] : m) {
    std::size_t n = 0;
    for (const auto& e : d) {
      if (auto s = std::get_if<std::string>(&e)) {
        auto it = widths.find(*s);
        if (it == widths.end()) throw Error("unknown measure '" + *s + "' in descriptor " + to_string(d));
        n += it->second;
      } else {
        ++n;
      }
    }
    best = std::max(best, n);
  }
  return best;
}

Bnl mk_bnl(const Descriptor& d, const MeasureValues& ord, std::size_t bound) {
  Bnl out;
  for (const auto& e : d) {
    if (auto n = std::get_if<std::uint64_t>(&e)) {
      out.push_back(*n);
    } else {
      auto v = ord(std::get<std::string>(e));
      out.insert(out.end(), v.begin(), v.end());
    }
  }
  if (out.size() > bound) throw Error("descriptor " + to_string(d) + " expands past bound " + std::to_string(bound));
  out.resize(bound, 0);
  return out;
}

Ordinal msr(const Descriptor& d, const MeasureValues& ord, std::size_t bound) { return bnl_to_o(mk_bnl(d, ord, bound)); }

} // namespace wfg

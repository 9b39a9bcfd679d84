#pragma once

#include "wfg/measure.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace wfg {

/// Fixed-length natural list; its bound is its length.
using Bnl = std::vector<std::uint64_t>;
using Bnll = std::vector<Bnl>;

/// Lexicographic, leftmost significant. Throws Error on a bound mismatch.
bool bnl_lt(const Bnl& a, const Bnl& b);
bool bnl_le(const Bnl& a, const Bnl& b);
/// Shorter lists are smaller; equal lengths compare position-wise.
bool bnll_lt(const Bnll& a, const Bnll& b);

/// Cantor normal form below w^w: exponents strictly decreasing,
/// coefficients positive. The empty list is 0.
struct Ordinal {
  struct Term {
    std::uint64_t exponent;
    std::uint64_t coefficient;
    friend bool operator==(const Term&, const Term&) = default;
  };
  std::vector<Term> terms;

  friend bool operator==(const Ordinal&, const Ordinal&) = default;
};

bool o_p(const Ordinal& a);
bool o_lt(const Ordinal& a, const Ordinal& b);
/// "w^2*2 + w*1 + 3"; "0" for zero.
std::string to_string(const Ordinal& a);

Ordinal bnl_to_o(const Bnl& a);
/// Ordinal of the concatenation. Requires a.size() == len and a uniform
/// inner bound.
Ordinal bnll_to_o(std::size_t len, const Bnll& a);
/// w^(len*bound) + bnll_to_o(len, a): order-preserving across lengths too.
Ordinal bnll_to_o_graded(const Bnll& a, std::size_t bound);

/// Longest expanded descriptor: naturals count 1, names their width.
std::size_t bnl_bnd(const Omap& m, const std::map<std::string, std::size_t>& widths);

/// Component measure values of one concrete state, by measure name.
using MeasureValues = std::function<std::vector<std::uint64_t>(const std::string&)>;

/// Expands a descriptor (names via `ord`) and right-pads with zeros.
Bnl mk_bnl(const Descriptor& d, const MeasureValues& ord, std::size_t bound);
Ordinal msr(const Descriptor& d, const MeasureValues& ord, std::size_t bound);

} // namespace wfg

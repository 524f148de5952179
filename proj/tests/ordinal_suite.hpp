#pragma once

// The exhaustive small-term suite used by unit and acceptance tests:
// all CNF terms with exponent tower depth <= `depth`, coefficients <= 3,
// at most 3 summands at every level, and at most `max_size` summand nodes
// in total.  The node cap keeps the enumeration exhaustive-but-finite at
// depth 3.

#include <cstddef>
#include <vector>

#include "eps0/ordinal.hpp"

namespace suite {

inline std::size_t node_size(const eps0::Ordinal& a) {
  std::size_t n = 0;
  for (const auto& s : a.summands()) n += 1 + node_size(s.exponent);
  return n;
}

namespace detail {

inline void extend(const std::vector<eps0::Ordinal>& exps, std::size_t exp_from,
                   std::vector<eps0::Ordinal::Summand>& stub, std::size_t used,
                   std::size_t max_size, std::uint64_t max_coeff,
                   std::size_t max_summands, std::vector<eps0::Ordinal>& out) {
  if (!stub.empty()) out.push_back(eps0::Ordinal::from_summands(stub));
  if (stub.size() == max_summands) return;
  for (std::size_t i = exp_from; i < exps.size(); ++i) {
    std::size_t cost = 1 + node_size(exps[i]);
    if (used + cost > max_size) continue;
    for (std::uint64_t c = 1; c <= max_coeff; ++c) {
      stub.push_back({exps[i], c});
      extend(exps, i + 1, stub, used + cost, max_size, max_coeff, max_summands, out);
      stub.pop_back();
    }
  }
}

}  // namespace detail

inline std::vector<eps0::Ordinal> ordinals(int depth, std::size_t max_size = 6,
                                           std::uint64_t max_coeff = 3,
                                           std::size_t max_summands = 3) {
  using eps0::Ordinal;
  // depth 0: the natural numbers 0..max_coeff
  std::vector<Ordinal> level;
  for (std::uint64_t c = 0; c <= max_coeff; ++c) level.push_back(Ordinal::from_nat(c));
  for (int d = 1; d <= depth; ++d) {
    // exponents: nonzero members of the previous level, largest first so the
    // decreasing-exponent constraint becomes an index constraint
    std::vector<Ordinal> exps;
    for (const auto& e : level)
      if (!e.is_zero()) exps.push_back(e);
    std::sort(exps.begin(), exps.end(), [](const Ordinal& x, const Ordinal& y) {
      return eps0::compare(x, y) == eps0::OrdCmp::Greater;
    });
    std::vector<Ordinal> next;
    for (std::uint64_t c = 0; c <= max_coeff; ++c) next.push_back(Ordinal::from_nat(c));
    std::vector<Ordinal::Summand> stub;
    detail::extend(exps, 0, stub, 0, max_size, max_coeff, max_summands, next);
    // allow a natural tail on infinite terms (extend only places nonzero
    // exponents)
    std::size_t infinite_count = next.size();
    for (std::size_t i = max_coeff + 1; i < infinite_count; ++i) {
      if (node_size(next[i]) >= max_size) continue;
      if (next[i].summands().size() >= max_summands) continue;
      for (std::uint64_t c = 1; c <= max_coeff; ++c) {
        auto parts = next[i].summands();
        parts.push_back({Ordinal::zero(), c});
        next.push_back(Ordinal::from_summands(parts));
      }
    }
    std::sort(next.begin(), next.end(), [](const Ordinal& x, const Ordinal& y) {
      return eps0::compare(x, y) == eps0::OrdCmp::Less;
    });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  return level;
}

}  // namespace suite

#pragma once

// Test-side reference implementations, independent of eps0/ordinal.hpp.
// These work on a plain nested-vector view of CNF terms and are written from
// the textbook definitions, so they can serve as oracles for the library.

#include <cstdint>
#include <vector>

#include "eps0/ordinal.hpp"

namespace oracle {

// (exponent, coefficient) lists, exponents again as lists.
struct Cnf {
  std::vector<std::pair<Cnf, std::uint64_t>> parts;
  bool operator==(const Cnf& o) const { return parts == o.parts; }
};

inline Cnf of(const eps0::Ordinal& a) {
  Cnf c;
  for (const auto& s : a.summands()) c.parts.emplace_back(of(s.exponent), s.coeff);
  return c;
}

// -1, 0, +1 comparison straight from the lexicographic definition.
inline int cmp(const Cnf& a, const Cnf& b) {
  for (std::size_t i = 0;; ++i) {
    bool ea = i == a.parts.size(), eb = i == b.parts.size();
    if (ea && eb) return 0;
    if (ea) return -1;
    if (eb) return 1;
    if (int c = cmp(a.parts[i].first, b.parts[i].first)) return c;
    if (a.parts[i].second != b.parts[i].second)
      return a.parts[i].second < b.parts[i].second ? -1 : 1;
  }
}

// Sum a + w^e*k, one summand at a time; defined by cases on the tail of a.
inline Cnf add_one(const Cnf& a, const Cnf& e, std::uint64_t k) {
  Cnf out;
  for (const auto& p : a.parts) {
    if (cmp(p.first, e) > 0)
      out.parts.push_back(p);
    else if (cmp(p.first, e) == 0)
      k += p.second;
  }
  out.parts.emplace_back(e, k);
  return out;
}

inline Cnf add(const Cnf& a, const Cnf& b) {
  Cnf acc = a;
  for (const auto& p : b.parts) acc = add_one(acc, p.first, p.second);
  return acc;
}

inline Cnf mul(const Cnf& a, const Cnf& b) {
  Cnf acc;
  if (a.parts.empty()) return acc;
  for (const auto& p : b.parts) {
    if (p.first.parts.empty()) {
      // right factor is a natural number: scale the head coefficient
      Cnf scaled = a;
      Cnf head_exp = a.parts[0].first;
      std::uint64_t head_coeff = a.parts[0].second * p.second;
      scaled.parts.erase(scaled.parts.begin());
      Cnf piece;
      piece.parts.emplace_back(head_exp, head_coeff);
      for (const auto& q : scaled.parts) piece.parts.push_back(q);
      acc = add(acc, piece);
    } else {
      Cnf piece;
      piece.parts.emplace_back(add(a.parts[0].first, p.first), p.second);
      acc = add(acc, piece);
    }
  }
  return acc;
}

}  // namespace oracle

#pragma once

// Goedel numbering.
//
// A formula is coded as a self-delimiting bit stream read off the syntax
// tree in prefix order, and the code is the natural number whose binary
// expansion is a sentinel 1 followed by that stream (the sentinel makes
// distinct stream lengths yield distinct numbers).
//
//   formula node: 4-bit tag (the FormulaKind order) + payloads inline
//   term node:    3-bit tag: 0 zero, 1 one, 2 var, 3 sum, 4 prod
//   name:         6-bit identifier digits (1..63), terminated by 000000
//
// The scheme is injective, codes grow linearly with formula size, and
// decoding is a bit-pointer walk.  subst_num_code rewrites the bit stream
// directly; the decode-substitute-encode route is its test oracle.

#include <string>

#include "eps0/syntax.hpp"

namespace eps0 {

using GodelCode = BigNat;

namespace detail {

inline int ident_digit(char c) {
  if (c >= 'a' && c <= 'z') return 1 + (c - 'a');
  if (c >= 'A' && c <= 'Z') return 27 + (c - 'A');
  if (c >= '0' && c <= '9') return 53 + (c - '0');
  if (c == '_') return 63;
  return -1;
}

inline char ident_char(int d) {
  if (d >= 1 && d <= 26) return static_cast<char>('a' + d - 1);
  if (d >= 27 && d <= 52) return static_cast<char>('A' + d - 27);
  if (d >= 53 && d <= 62) return static_cast<char>('0' + d - 53);
  if (d == 63) return '_';
  return '\0';
}

struct BitWriter {
  std::vector<bool> bits;

  void push(bool b) { bits.push_back(b); }
  void chunk(unsigned value, int width) {
    for (int i = width - 1; i >= 0; --i) push((value >> i) & 1u);
  }
  void name(const std::string& s) {
    if (s.empty()) throw Error("godel: empty name");
    for (char c : s) {
      int d = ident_digit(c);
      if (d <= 0) throw Error("godel: bad character in name: " + s);
      chunk(static_cast<unsigned>(d), 6);
    }
    chunk(0, 6);
  }
  void splice(const BitWriter& other) {
    bits.insert(bits.end(), other.bits.begin(), other.bits.end());
  }

  BigNat finish() const {
    BigNat n = 1;  // sentinel
    std::size_t i = 0;
    while (i < bits.size()) {
      unsigned block = 0;
      int w = 0;
      while (i < bits.size() && w < 32) {
        block = (block << 1) | (bits[i] ? 1u : 0u);
        ++w;
        ++i;
      }
      n <<= w;
      n |= block;
    }
    return n;
  }
};

struct BitReader {
  const BigNat& n;
  long pos;  // index of the next bit to read, counting down; -1 = exhausted

  explicit BitReader(const BigNat& num) : n(num) {
    if (num < 1) throw Error("godel: not a code (no sentinel)");
    pos = static_cast<long>(boost::multiprecision::msb(num)) - 1;
  }
  bool done() const { return pos < 0; }
  bool read() {
    if (pos < 0) throw Error("godel: truncated code");
    return boost::multiprecision::bit_test(n, static_cast<unsigned>(pos--));
  }
  unsigned chunk(int width) {
    unsigned v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (read() ? 1u : 0u);
    return v;
  }
  std::string name() {
    std::string out;
    while (true) {
      unsigned d = chunk(6);
      if (d == 0) {
        if (out.empty()) throw Error("godel: empty name in code");
        return out;
      }
      char c = ident_char(static_cast<int>(d));
      if (!c) throw Error("godel: invalid name digit");
      out += c;
    }
  }
};

inline void write_term(BitWriter& w, const Term& t) {
  switch (t.kind) {
    case TermKind::Zero: w.chunk(0, 3); return;
    case TermKind::One: w.chunk(1, 3); return;
    case TermKind::Var: w.chunk(2, 3); w.name(t.var); return;
    case TermKind::Sum:
      w.chunk(3, 3); write_term(w, t.args[0]); write_term(w, t.args[1]); return;
    case TermKind::Prod:
      w.chunk(4, 3); write_term(w, t.args[0]); write_term(w, t.args[1]); return;
  }
}

inline Term read_term(BitReader& r) {
  switch (r.chunk(3)) {
    case 0: return t_zero();
    case 1: return t_one();
    case 2: return t_var(r.name());
    case 3: {
      Term a = read_term(r);
      return t_sum(std::move(a), read_term(r));
    }
    case 4: {
      Term a = read_term(r);
      return t_prod(std::move(a), read_term(r));
    }
    default: throw Error("godel: invalid term tag");
  }
}

inline void write_formula(BitWriter& w, const Formula& f) {
  w.chunk(static_cast<unsigned>(f.kind), 4);
  switch (f.kind) {
    case FormulaKind::In: case FormulaKind::NotIn:
      write_term(w, f.lhs); w.name(f.set_var); return;
    case FormulaKind::Prov: case FormulaKind::NotProv:
      w.name(f.theory); write_term(w, f.lhs); return;
    case FormulaKind::And: case FormulaKind::Or:
      write_formula(w, f.kids[0]); write_formula(w, f.kids[1]); return;
    case FormulaKind::AllNum: case FormulaKind::ExNum:
      w.name(f.bound); write_formula(w, f.kids[0]); return;
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      w.name(f.set_var); write_formula(w, f.kids[0]); return;
    default:
      write_term(w, f.lhs); write_term(w, f.rhs); return;
  }
}

inline Formula read_formula(BitReader& r) {
  unsigned tag = r.chunk(4);
  FormulaKind k = static_cast<FormulaKind>(tag);
  switch (k) {
    case FormulaKind::In: case FormulaKind::NotIn: {
      Term t = read_term(r);
      std::string X = r.name();
      return k == FormulaKind::In ? f_in(std::move(t), X) : f_not_in(std::move(t), X);
    }
    case FormulaKind::Prov: case FormulaKind::NotProv: {
      std::string th = r.name();
      Term t = read_term(r);
      return k == FormulaKind::Prov ? f_prov(th, std::move(t)) : f_not_prov(th, std::move(t));
    }
    case FormulaKind::And: case FormulaKind::Or: {
      Formula a = read_formula(r);
      Formula b = read_formula(r);
      return k == FormulaKind::And ? f_and(std::move(a), std::move(b))
                                   : f_or(std::move(a), std::move(b));
    }
    case FormulaKind::AllNum: case FormulaKind::ExNum:
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      std::string v = r.name();
      return f_quant(k, v, read_formula(r));
    }
    default: {
      Term a = read_term(r);
      Term b = read_term(r);
      return f_lit2(k, std::move(a), std::move(b));
    }
  }
}

}  // namespace detail

inline GodelCode encode_term(const Term& t) {
  detail::BitWriter w;
  detail::write_term(w, t);
  return w.finish();
}

inline Term decode_term(const GodelCode& g) {
  detail::BitReader r(g);
  Term t = detail::read_term(r);
  if (!r.done()) throw Error("godel: trailing bits in term code");
  return t;
}

inline GodelCode encode_formula(const Formula& f) {
  detail::BitWriter w;
  detail::write_formula(w, f);
  return w.finish();
}

inline Formula decode_formula(const GodelCode& g) {
  detail::BitReader r(g);
  Formula f = detail::read_formula(r);
  if (!r.done()) throw Error("godel: trailing bits in formula code");
  return f;
}

// Code of numeral(n), emitted without building the term: the numeral tree is
// (n-1) sum nodes down the left spine, then n one-leaves.
inline void write_numeral_code(detail::BitWriter& w, const BigNat& n) {
  if (n > BigNat(1u << 16)) throw LimitError("numeral code: value too large");
  if (n == 0) {
    w.chunk(0, 3);
    return;
  }
  std::uint64_t k = n.convert_to<std::uint64_t>();
  for (std::uint64_t i = 1; i < k; ++i) w.chunk(3, 3);
  for (std::uint64_t i = 0; i < k; ++i) w.chunk(1, 3);
}

inline GodelCode numeral_code(const BigNat& n) {
  detail::BitWriter w;
  write_numeral_code(w, n);
  return w.finish();
}

// ---------------------------------------------------------------------------
// Code-level numeral substitution: rewrites the bit stream of code(phi) into
// the bit stream of code(phi[numeral(n)/v]) without constructing formulas.
// ---------------------------------------------------------------------------

namespace detail {

inline void copy_name(BitReader& r, BitWriter& w, std::string* out = nullptr) {
  std::string s = r.name();
  w.name(s);
  if (out) *out = s;
}

inline void subst_term_bits(BitReader& r, BitWriter& w, const std::string& v,
                            const BigNat& n, bool active, bool* hit) {
  unsigned tag = r.chunk(3);
  switch (tag) {
    case 0: case 1: w.chunk(tag, 3); return;
    case 2: {
      std::string name = r.name();
      if (active && name == v) {
        if (hit) *hit = true;
        write_numeral_code(w, n);
      } else {
        w.chunk(2, 3);
        w.name(name);
      }
      return;
    }
    case 3: case 4:
      w.chunk(tag, 3);
      subst_term_bits(r, w, v, n, active, hit);
      subst_term_bits(r, w, v, n, active, hit);
      return;
    default: throw Error("godel: invalid term tag");
  }
}

inline void subst_formula_bits(BitReader& r, BitWriter& w, const std::string& v,
                               const BigNat& n, bool active, bool* hit) {
  unsigned tag = r.chunk(4);
  FormulaKind k = static_cast<FormulaKind>(tag);
  w.chunk(tag, 4);
  switch (k) {
    case FormulaKind::In: case FormulaKind::NotIn:
      subst_term_bits(r, w, v, n, active, hit);
      copy_name(r, w);
      return;
    case FormulaKind::Prov: case FormulaKind::NotProv:
      copy_name(r, w);
      subst_term_bits(r, w, v, n, active, hit);
      return;
    case FormulaKind::And: case FormulaKind::Or:
      subst_formula_bits(r, w, v, n, active, hit);
      subst_formula_bits(r, w, v, n, active, hit);
      return;
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      std::string b;
      copy_name(r, w, &b);
      subst_formula_bits(r, w, v, n, active && b != v, hit);
      return;
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      copy_name(r, w);
      subst_formula_bits(r, w, v, n, active, hit);
      return;
    default:
      subst_term_bits(r, w, v, n, active, hit);
      subst_term_bits(r, w, v, n, active, hit);
      return;
  }
}

}  // namespace detail

// (code(phi), n, v) -> code(phi[numeral(n)/v]).  Rejects malformed codes and
// substitution for a variable with no free occurrence.
inline GodelCode subst_num_code(const GodelCode& g, const BigNat& n, const std::string& v) {
  detail::BitReader r(g);
  detail::BitWriter w;
  bool hit = false;
  detail::subst_formula_bits(r, w, v, n, true, &hit);
  if (!r.done()) throw Error("godel: trailing bits in formula code");
  if (!hit) throw Error("subst_num_code: variable " + v + " is not free in the coded formula");
  return w.finish();
}

}  // namespace eps0

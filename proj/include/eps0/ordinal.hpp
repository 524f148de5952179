#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eps0/util.hpp"

namespace eps0 {

// Ordinals below epsilon_0 in Cantor normal form:
//   w^e1 * c1 + ... + w^ek * ck   with e1 > e2 > ... > ek and all ci >= 1.
// The empty summand list is 0.  Representation is canonical, so equality is
// structural.
class Ordinal {
 public:
  struct Summand;

  Ordinal() = default;

  static Ordinal zero() { return Ordinal(); }
  static Ordinal one() { return from_nat(1); }
  static Ordinal from_nat(std::uint64_t n);
  static Ordinal omega();

  // Canonicalizing constructor: accepts summands in any order, merges equal
  // exponents, drops zero coefficients.
  static Ordinal from_summands(std::vector<Summand> parts);

  const std::vector<Summand>& summands() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  // Value as a natural number; requires is_finite().
  std::uint64_t nat_value() const;

  bool operator==(const Ordinal& other) const;
  bool operator!=(const Ordinal& other) const { return !(*this == other); }

 private:
  std::vector<Summand> terms_;
};

struct Ordinal::Summand {
  Ordinal exponent;
  std::uint64_t coeff = 1;
  bool operator==(const Summand& other) const {
    return coeff == other.coeff && exponent == other.exponent;
  }
};

enum class OrdCmp { Less, Equal, Greater };

inline OrdCmp compare(const Ordinal& a, const Ordinal& b);

inline bool Ordinal::operator==(const Ordinal& other) const {
  return terms_ == other.terms_;
}

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline std::uint64_t Ordinal::nat_value() const {
  if (terms_.empty()) return 0;
  if (!is_finite()) throw Error("nat_value: ordinal is infinite");
  return terms_[0].coeff;
}

inline Ordinal Ordinal::from_nat(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({Ordinal(), n});
  return o;
}

inline Ordinal Ordinal::omega() {
  Ordinal o;
  o.terms_.push_back({Ordinal::from_nat(1), 1});
  return o;
}

inline Ordinal Ordinal::from_summands(std::vector<Summand> parts) {
  std::erase_if(parts, [](const Summand& s) { return s.coeff == 0; });
  std::stable_sort(parts.begin(), parts.end(), [](const Summand& x, const Summand& y) {
    return compare(x.exponent, y.exponent) == OrdCmp::Greater;
  });
  Ordinal o;
  for (auto& s : parts) {
    if (!o.terms_.empty() && o.terms_.back().exponent == s.exponent)
      o.terms_.back().coeff += s.coeff;
    else
      o.terms_.push_back(std::move(s));
  }
  return o;
}

inline OrdCmp compare(const Ordinal& a, const Ordinal& b) {
  const auto& xs = a.summands();
  const auto& ys = b.summands();
  for (std::size_t i = 0;; ++i) {
    if (i == xs.size() && i == ys.size()) return OrdCmp::Equal;
    if (i == xs.size()) return OrdCmp::Less;     // proper prefix is smaller
    if (i == ys.size()) return OrdCmp::Greater;
    OrdCmp e = compare(xs[i].exponent, ys[i].exponent);
    if (e != OrdCmp::Equal) return e;
    if (xs[i].coeff != ys[i].coeff)
      return xs[i].coeff < ys[i].coeff ? OrdCmp::Less : OrdCmp::Greater;
  }
}

inline Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& e = b.summands()[0].exponent;
  std::vector<Ordinal::Summand> out;
  std::uint64_t merged = b.summands()[0].coeff;
  for (const auto& s : a.summands()) {
    OrdCmp c = compare(s.exponent, e);
    if (c == OrdCmp::Greater)
      out.push_back(s);
    else if (c == OrdCmp::Equal)
      merged += s.coeff;  // lower summands of a are absorbed
  }
  out.push_back({e, merged});
  for (std::size_t i = 1; i < b.summands().size(); ++i) out.push_back(b.summands()[i]);
  return Ordinal::from_summands(std::move(out));
}

inline Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal::zero();
  Ordinal result;
  const Ordinal& lead_exp = a.summands()[0].exponent;
  for (const auto& s : b.summands()) {
    Ordinal piece;
    if (s.exponent.is_zero()) {
      // a * n: scale the leading coefficient, keep the tail.
      std::vector<Ordinal::Summand> parts = a.summands();
      parts[0].coeff *= s.coeff;
      piece = Ordinal::from_summands(std::move(parts));
    } else {
      piece = Ordinal::from_summands({{add(lead_exp, s.exponent), s.coeff}});
    }
    result = add(result, piece);
  }
  return result;
}

inline Ordinal omega_pow(const Ordinal& a) {
  return Ordinal::from_summands({{a, 1}});
}

// Commutative (Hessenberg) sum: merge the summand lists.
inline Ordinal nat_sum(const Ordinal& a, const Ordinal& b) {
  std::vector<Ordinal::Summand> parts = a.summands();
  for (const auto& s : b.summands()) parts.push_back(s);
  return Ordinal::from_summands(std::move(parts));
}

// w_0 = 1, w_{k+1} = w^{w_k}.
inline Ordinal omega_tower(std::uint64_t k, std::uint64_t depth_limit = 64) {
  if (k > depth_limit) throw LimitError("omega_tower: depth limit exceeded");
  Ordinal o = Ordinal::one();
  for (std::uint64_t i = 0; i < k; ++i) o = omega_pow(o);
  return o;
}

// ---------------------------------------------------------------------------
// Numeric codes.
//
// Canonical codes are 4*c where c codes the CNF structure:
//   c(0) = 0,  c(w^e1*k1 + ... ) = cons(p(c(e1), k1-1), cons(..., 0)).
// The code space additionally understands three formal constructors, so that
// object-language terms can denote ordinal arithmetic without function
// symbols for it:
//   4*p(a,b)+1  denotes  value(a) + value(b)
//   4*k+2       denotes  w^value(k)
//   4*p(a,m)+3  denotes  value(a) * m        (m a natural number)
// Only canonical codes round-trip through encode_nat/decode_nat; the formal
// forms exist so that the order relation on codes stays decidable on terms
// built by the proof synthesizers.
// ---------------------------------------------------------------------------

inline BigNat cnf_code(const Ordinal& a) {
  BigNat list = 0;
  const auto& ss = a.summands();
  for (std::size_t i = ss.size(); i-- > 0;) {
    BigNat h = pack_pair(cnf_code(ss[i].exponent), BigNat(ss[i].coeff - 1));
    list = pack_cons(h, list);
  }
  return list;
}

inline std::optional<Ordinal> cnf_decode(const BigNat& n) {
  std::vector<Ordinal::Summand> parts;
  BigNat rest = n;
  const Ordinal* prev_exp = nullptr;
  while (rest != 0) {
    auto cell = unpack_cons(rest);
    if (!cell) return std::nullopt;
    auto head = unpack_pair(cell->first);
    if (!head) return std::nullopt;
    auto exp = cnf_decode(head->first);
    if (!exp) return std::nullopt;
    if (head->second > BigNat(UINT64_MAX - 1)) return std::nullopt;
    if (prev_exp && compare(*prev_exp, *exp) != OrdCmp::Greater)
      return std::nullopt;  // exponents must strictly decrease
    parts.push_back({*exp, head->second.convert_to<std::uint64_t>() + 1});
    prev_exp = &parts.back().exponent;
    rest = cell->second;
  }
  Ordinal out;
  out = Ordinal::from_summands(parts);
  // from_summands sorts; a valid code is already sorted, so this is identity.
  return out;
}

inline BigNat encode_nat(const Ordinal& a) { return 4 * cnf_code(a); }

inline Ordinal decode_nat(const BigNat& n) {
  if (n % 4 != 0)
    throw Error("decode_nat: " + n.str() + " is not a canonical ordinal code (tag != 0)");
  auto o = cnf_decode(n / 4);
  if (!o) throw Error("decode_nat: " + n.str() + " has malformed CNF structure");
  return *o;
}

// Value of an arbitrary code, honoring the formal sum/power/multiple tags.
// Returns nullopt for numbers that are not codes.
inline std::optional<Ordinal> ord_value_of_code(const BigNat& n) {
  switch ((n % 4).convert_to<int>()) {
    case 0:
      return cnf_decode(n / 4);
    case 1: {
      auto ab = unpack_pair((n - 1) / 4);
      if (!ab) return std::nullopt;
      auto a = ord_value_of_code(ab->first);
      auto b = ord_value_of_code(ab->second);
      if (!a || !b) return std::nullopt;
      return add(*a, *b);
    }
    case 2: {
      auto k = ord_value_of_code((n - 2) / 4);
      if (!k) return std::nullopt;
      return omega_pow(*k);
    }
    default: {
      auto am = unpack_pair((n - 3) / 4);
      if (!am) return std::nullopt;
      auto a = ord_value_of_code(am->first);
      if (!a) return std::nullopt;
      if (am->second > BigNat(UINT64_MAX)) return std::nullopt;
      return mul(*a, Ordinal::from_nat(am->second.convert_to<std::uint64_t>()));
    }
  }
}

// The object-language order: both sides must denote, and denote in order.
inline bool code_less(const BigNat& a, const BigNat& b) {
  auto x = ord_value_of_code(a);
  auto y = ord_value_of_code(b);
  if (!x || !y) return false;
  return compare(*x, *y) == OrdCmp::Less;
}

// ---------------------------------------------------------------------------
// Textual ordinal literals:  0 | nat | w | w^k | w^(ordinal), with *nat
// coefficient suffixes and + between summands, e.g. w^(w^2*3+1)*2+5.
// ---------------------------------------------------------------------------

inline std::string print_ordinal(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& s : a.summands()) {
    if (!first) out += "+";
    first = false;
    if (s.exponent.is_zero()) {
      out += std::to_string(s.coeff);
      continue;
    }
    if (s.exponent == Ordinal::one())
      out += "w";
    else if (s.exponent.is_finite())
      out += "w^" + std::to_string(s.exponent.nat_value());
    else
      out += "w^(" + print_ordinal(s.exponent) + ")";
    if (s.coeff != 1) out += "*" + std::to_string(s.coeff);
  }
  return out;
}

namespace detail {

struct OrdParser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error("ordinal parse error at offset " + std::to_string(pos) + ": " + msg);
  }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  std::uint64_t number() {
    if (!isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    std::uint64_t n = 0;
    while (isdigit(static_cast<unsigned char>(peek()))) {
      n = n * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      ++pos;
    }
    return n;
  }

  Ordinal ordinal() {
    std::vector<Ordinal::Summand> parts;
    parts.push_back(summand());
    while (eat('+')) parts.push_back(summand());
    return Ordinal::from_summands(std::move(parts));
  }

  Ordinal::Summand summand() {
    if (eat('w')) {
      Ordinal exp = Ordinal::one();
      if (eat('^')) {
        if (eat('(')) {
          exp = ordinal();
          if (!eat(')')) fail("expected ')'");
        } else {
          exp = Ordinal::from_nat(number());
        }
      }
      std::uint64_t coeff = 1;
      if (eat('*')) coeff = number();
      return {exp, coeff};
    }
    std::uint64_t n = number();
    return {Ordinal::zero(), n};
  }
};

}  // namespace detail

inline Ordinal parse_ordinal(const std::string& text) {
  detail::OrdParser p{text};
  while (p.peek() == ' ') ++p.pos;
  Ordinal o = p.ordinal();
  while (p.peek() == ' ') ++p.pos;
  if (p.pos != text.size()) p.fail("trailing input");
  return o;
}

}  // namespace eps0

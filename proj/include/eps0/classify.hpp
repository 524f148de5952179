#pragma once

// Formula classification.
//
// Levels are computed against the cumulative hierarchies, with the standard
// collapses that are provable in the base theory: blocks of like quantifiers
// merge, number quantifiers are absorbed into any set-quantifier class of
// level >= 1, and bounded number quantifiers (the canonical guarded patterns
// produced by the builders) are class-transparent.  pi_level(f) is the least
// n with f in Pi-n of the respective hierarchy, sigma_level dually; a
// quantifier that cannot head its own side costs one alternation.
//
// Provability and code-order literals are atoms of the language here, so
// they classify as literals.

#include <cstdint>
#include <optional>

#include "eps0/syntax.hpp"

namespace eps0 {

enum class ClassTag { Delta00, Pi0n, Sigma0n, Arithmetic, Pi1n, Sigma1n };

struct FormulaClass {
  ClassTag tag = ClassTag::Delta00;
  std::uint64_t level = 0;        // the n in Pi0n/Sigma0n/Pi1n/Sigma1n
  std::uint64_t pi1 = 0, sigma1 = 0;
  std::uint64_t pi0 = 0, sigma0 = 0;
  std::uint64_t rank_ = 0;
  bool lightface = false;         // no free set variables
  bool closed = false;
  bool arithmetic = false;        // no set quantifiers
};

namespace detail {

// Guarded bounded-quantifier shapes:
//   A x. (!(x < t) | body)   /  E x. (x < t & body)
// and the same with prec.  The guard variable must not occur in the bound.
struct BoundedView {
  bool by_code_order = false;
  const Formula* body = nullptr;
};

inline std::optional<BoundedView> bounded_view(const Formula& f) {
  const Formula* inner;
  FormulaKind guard_pos, guard_neg;
  if (f.kind == FormulaKind::AllNum) {
    if (f.kids[0].kind != FormulaKind::Or) return std::nullopt;
    inner = &f.kids[0];
    guard_pos = FormulaKind::NotLess;
    guard_neg = FormulaKind::NotCodeLess;
  } else if (f.kind == FormulaKind::ExNum) {
    if (f.kids[0].kind != FormulaKind::And) return std::nullopt;
    inner = &f.kids[0];
    guard_pos = FormulaKind::Less;
    guard_neg = FormulaKind::CodeLess;
  } else {
    return std::nullopt;
  }
  const Formula& g = inner->kids[0];
  if (g.kind != guard_pos && g.kind != guard_neg) return std::nullopt;
  if (g.lhs.kind != TermKind::Var || g.lhs.var != f.bound) return std::nullopt;
  std::set<std::string> tv;
  term_vars(g.rhs, tv);
  if (tv.count(f.bound)) return std::nullopt;
  return BoundedView{g.kind == guard_neg, &inner->kids[1]};
}

struct Levels {
  std::uint64_t pi = 0, sigma = 0;
};

// Set-quantifier alternation levels.
inline Levels set_levels(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::And: case FormulaKind::Or: {
      Levels a = set_levels(f.kids[0]), b = set_levels(f.kids[1]);
      return {std::max(a.pi, b.pi), std::max(a.sigma, b.sigma)};
    }
    case FormulaKind::AllSet: {
      Levels a = set_levels(f.kids[0]);
      std::uint64_t pi = std::max<std::uint64_t>(a.pi, 1);
      return {pi, pi + 1};
    }
    case FormulaKind::ExSet: {
      Levels a = set_levels(f.kids[0]);
      std::uint64_t sg = std::max<std::uint64_t>(a.sigma, 1);
      return {sg + 1, sg};
    }
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      if (auto b = bounded_view(f)) {
        Levels a = set_levels(*b->body);
        return a;  // bounded quantifiers are transparent at set level
      }
      Levels a = set_levels(f.kids[0]);
      if (a.pi == 0 && a.sigma == 0) return a;  // arithmetic stays arithmetic
      if (f.kind == FormulaKind::AllNum) return {a.pi, a.pi + 1};
      return {a.sigma + 1, a.sigma};
    }
    default: return {0, 0};
  }
}

// Number-quantifier alternation levels within arithmetic formulas.
inline Levels num_levels(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::And: case FormulaKind::Or: {
      Levels a = num_levels(f.kids[0]), b = num_levels(f.kids[1]);
      return {std::max(a.pi, b.pi), std::max(a.sigma, b.sigma)};
    }
    case FormulaKind::AllNum: {
      if (auto b = bounded_view(f); b && !b->by_code_order) return num_levels(*b->body);
      Levels a = num_levels(f.kids[0]);
      std::uint64_t pi = std::max<std::uint64_t>(a.pi, 1);
      return {pi, pi + 1};
    }
    case FormulaKind::ExNum: {
      if (auto b = bounded_view(f); b && !b->by_code_order) return num_levels(*b->body);
      Levels a = num_levels(f.kids[0]);
      std::uint64_t sg = std::max<std::uint64_t>(a.sigma, 1);
      return {sg + 1, sg};
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      // not meaningful below a set quantifier; treated as opaque
      return num_levels(f.kids[0]);
    default: return {0, 0};
  }
}

inline bool has_set_quant(const Formula& f) {
  if (is_set_quant(f)) return true;
  for (const auto& k : f.kids)
    if (has_set_quant(k)) return true;
  return false;
}

}  // namespace detail

inline FormulaClass classify(const Formula& f) {
  FormulaClass c;
  c.rank_ = rank(f);
  c.lightface = free_set_vars(f).empty();
  c.closed = is_closed(f);
  c.arithmetic = !detail::has_set_quant(f);
  detail::Levels s = detail::set_levels(f);
  detail::Levels z = detail::num_levels(f);
  c.pi1 = s.pi;
  c.sigma1 = s.sigma;
  c.pi0 = z.pi;
  c.sigma0 = z.sigma;
  if (!c.arithmetic) {
    if (s.pi <= s.sigma) {
      c.tag = ClassTag::Pi1n;
      c.level = s.pi;
    } else {
      c.tag = ClassTag::Sigma1n;
      c.level = s.sigma;
    }
    return c;
  }
  if (z.pi == 0 && z.sigma == 0) {
    c.tag = ClassTag::Delta00;
    c.level = 0;
  } else if (z.pi < z.sigma) {
    c.tag = ClassTag::Pi0n;
    c.level = z.pi;
  } else if (z.sigma < z.pi) {
    c.tag = ClassTag::Sigma0n;
    c.level = z.sigma;
  } else {
    c.tag = ClassTag::Arithmetic;
    c.level = z.pi;
  }
  return c;
}

// Cumulative class membership.
inline bool in_pi1(const Formula& f, std::uint64_t n) {
  return detail::set_levels(f).pi <= n;
}
inline bool in_sigma1(const Formula& f, std::uint64_t n) {
  return detail::set_levels(f).sigma <= n;
}

// R_m: formulas of rank at most m.
inline bool in_rank_class(const Formula& f, std::uint64_t m) { return rank(f) <= m; }

// P_{n,m}: subformula closure of the Pi-1-n formulas with arithmetic matrix
// of rank at most m.  A member is a (possibly empty) alternating set-prefix
// over an arithmetic matrix; a full-length prefix must start universally.
inline bool in_p_class(const Formula& f, std::uint64_t n, std::uint64_t m) {
  const Formula* cur = &f;
  std::uint64_t blocks = 0;
  std::optional<FormulaKind> last;
  while (is_set_quant(*cur)) {
    if (!last || *last != cur->kind) {
      ++blocks;
      last = cur->kind;
    }
    cur = &cur->kids[0];
  }
  if (detail::has_set_quant(*cur)) return false;
  if (blocks > n) return false;
  // a prefix that uses all n alternations must begin universally
  if (blocks == n && n >= 1 && f.kind == FormulaKind::ExSet) return false;
  return rank(*cur) <= m;
}

inline std::string class_tag_name(ClassTag t) {
  switch (t) {
    case ClassTag::Delta00: return "delta0-0";
    case ClassTag::Pi0n: return "pi0";
    case ClassTag::Sigma0n: return "sigma0";
    case ClassTag::Arithmetic: return "arithmetic";
    case ClassTag::Pi1n: return "pi1";
    case ClassTag::Sigma1n: return "sigma1";
  }
  return "?";
}

inline std::string class_name(const FormulaClass& c) {
  switch (c.tag) {
    case ClassTag::Delta00: return "delta0-0";
    case ClassTag::Arithmetic: return "arithmetic";
    case ClassTag::Pi0n: return "pi0-" + std::to_string(c.level);
    case ClassTag::Sigma0n: return "sigma0-" + std::to_string(c.level);
    case ClassTag::Pi1n: return "pi1-" + std::to_string(c.level);
    case ClassTag::Sigma1n: return "sigma1-" + std::to_string(c.level);
  }
  return "?";
}

}  // namespace eps0

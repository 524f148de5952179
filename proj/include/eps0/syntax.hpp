#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "eps0/util.hpp"

namespace eps0 {

// ---------------------------------------------------------------------------
// Terms: number-sort only.  The language has 0, 1, + and *; numerals are the
// left-associated sums ((1+1)+...)+1.
// ---------------------------------------------------------------------------

enum class TermKind { Var, Zero, One, Sum, Prod };

struct Term {
  TermKind kind = TermKind::Zero;
  std::string var;          // Var
  std::vector<Term> args;   // Sum/Prod: exactly 2

  bool operator==(const Term& o) const {
    return kind == o.kind && var == o.var && args == o.args;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }
};

inline Term t_var(std::string name) {
  Term t; t.kind = TermKind::Var; t.var = std::move(name); return t;
}
inline Term t_zero() { return Term{}; }
inline Term t_one() { Term t; t.kind = TermKind::One; return t; }
inline Term t_sum(Term a, Term b) {
  Term t; t.kind = TermKind::Sum; t.args = {std::move(a), std::move(b)}; return t;
}
inline Term t_prod(Term a, Term b) {
  Term t; t.kind = TermKind::Prod; t.args = {std::move(a), std::move(b)}; return t;
}

// 0 is the term 0; n is ((1+1)+...)+1 with n ones, left associated.
inline Term numeral(std::uint64_t n, std::uint64_t limit = 1u << 20) {
  if (n > limit) throw LimitError("numeral: value too large for a unary numeral");
  if (n == 0) return t_zero();
  Term t = t_one();
  for (std::uint64_t i = 1; i < n; ++i) t = t_sum(std::move(t), t_one());
  return t;
}

// Compact term of a given value: binary Horner form, O(log n) nodes.  Used
// where a value must appear in a formula but a unary numeral would be
// astronomically large (e.g. Goedel codes inside provability literals).
inline Term code_term(const BigNat& n) {
  if (n == 0) return t_zero();
  if (n == 1) return t_one();
  Term high = code_term(n / 2);
  Term doubled = t_prod(std::move(high), t_sum(t_one(), t_one()));
  if (n % 2 == 1) return t_sum(std::move(doubled), t_one());
  return doubled;
}

inline bool term_closed(const Term& t) {
  if (t.kind == TermKind::Var) return false;
  for (const auto& a : t.args)
    if (!term_closed(a)) return false;
  return true;
}

inline void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == TermKind::Var) out.insert(t.var);
  for (const auto& a : t.args) term_vars(a, out);
}

inline BigNat eval_term(const Term& t, const std::map<std::string, BigNat>& env) {
  switch (t.kind) {
    case TermKind::Var: {
      auto it = env.find(t.var);
      if (it == env.end()) throw Error("eval_term: unbound variable " + t.var);
      return it->second;
    }
    case TermKind::Zero: return 0;
    case TermKind::One: return 1;
    case TermKind::Sum: return eval_term(t.args[0], env) + eval_term(t.args[1], env);
    case TermKind::Prod: return eval_term(t.args[0], env) * eval_term(t.args[1], env);
  }
  throw Error("eval_term: bad kind");
}

inline Term term_subst(const Term& t, const std::string& x, const Term& repl) {
  switch (t.kind) {
    case TermKind::Var: return t.var == x ? repl : t;
    case TermKind::Sum:
      return t_sum(term_subst(t.args[0], x, repl), term_subst(t.args[1], x, repl));
    case TermKind::Prod:
      return t_prod(term_subst(t.args[0], x, repl), term_subst(t.args[1], x, repl));
    default: return t;
  }
}

// ---------------------------------------------------------------------------
// Formulas: two-sorted negation normal form.  Negation exists only at the
// literal level; quantifiers bind named variables.  Lowercase names are
// number variables, uppercase names are set variables (the parser enforces
// this; builders must respect it).
// ---------------------------------------------------------------------------

enum class FormulaKind {
  Eq, Neq, Less, NotLess,          // s=t, s!=t, s<t, !(s<t)
  CodeLess, NotCodeLess,           // s prec t on ordinal codes
  In, NotIn,                       // t in X, t notin X
  Prov, NotProv,                   // Pr[theory](t)
  And, Or,
  AllNum, ExNum,                   // A x. / E x.
  AllSet, ExSet                    // A X. / E X.
};

struct Formula {
  FormulaKind kind = FormulaKind::Eq;
  Term lhs, rhs;                 // term literals; In/NotIn use lhs only
  std::string set_var;           // In/NotIn: the set; AllSet/ExSet: bound var
  std::string theory;            // Prov/NotProv: theory tag
  std::string bound;             // AllNum/ExNum: bound number variable
  std::vector<Formula> kids;     // And/Or: 2, quantifiers: 1

  bool operator==(const Formula& o) const {
    return kind == o.kind && lhs == o.lhs && rhs == o.rhs && set_var == o.set_var &&
           theory == o.theory && bound == o.bound && kids == o.kids;
  }
  bool operator!=(const Formula& o) const { return !(*this == o); }
};

inline Formula f_lit2(FormulaKind k, Term a, Term b) {
  Formula f; f.kind = k; f.lhs = std::move(a); f.rhs = std::move(b); return f;
}
inline Formula f_eq(Term a, Term b) { return f_lit2(FormulaKind::Eq, std::move(a), std::move(b)); }
inline Formula f_neq(Term a, Term b) { return f_lit2(FormulaKind::Neq, std::move(a), std::move(b)); }
inline Formula f_less(Term a, Term b) { return f_lit2(FormulaKind::Less, std::move(a), std::move(b)); }
inline Formula f_not_less(Term a, Term b) { return f_lit2(FormulaKind::NotLess, std::move(a), std::move(b)); }
inline Formula f_code_less(Term a, Term b) { return f_lit2(FormulaKind::CodeLess, std::move(a), std::move(b)); }
inline Formula f_not_code_less(Term a, Term b) { return f_lit2(FormulaKind::NotCodeLess, std::move(a), std::move(b)); }
inline Formula f_in(Term t, std::string X) {
  Formula f; f.kind = FormulaKind::In; f.lhs = std::move(t); f.set_var = std::move(X); return f;
}
inline Formula f_not_in(Term t, std::string X) {
  Formula f; f.kind = FormulaKind::NotIn; f.lhs = std::move(t); f.set_var = std::move(X); return f;
}
inline Formula f_prov(std::string theory, Term t) {
  Formula f; f.kind = FormulaKind::Prov; f.theory = std::move(theory); f.lhs = std::move(t); return f;
}
inline Formula f_not_prov(std::string theory, Term t) {
  Formula f; f.kind = FormulaKind::NotProv; f.theory = std::move(theory); f.lhs = std::move(t); return f;
}
inline Formula f_and(Formula a, Formula b) {
  Formula f; f.kind = FormulaKind::And; f.kids = {std::move(a), std::move(b)}; return f;
}
inline Formula f_or(Formula a, Formula b) {
  Formula f; f.kind = FormulaKind::Or; f.kids = {std::move(a), std::move(b)}; return f;
}
inline Formula f_quant(FormulaKind k, std::string v, Formula body) {
  Formula f; f.kind = k; f.kids = {std::move(body)};
  if (k == FormulaKind::AllNum || k == FormulaKind::ExNum)
    f.bound = std::move(v);
  else
    f.set_var = std::move(v);
  return f;
}
inline Formula f_all_num(std::string x, Formula body) { return f_quant(FormulaKind::AllNum, std::move(x), std::move(body)); }
inline Formula f_ex_num(std::string x, Formula body) { return f_quant(FormulaKind::ExNum, std::move(x), std::move(body)); }
inline Formula f_all_set(std::string X, Formula body) { return f_quant(FormulaKind::AllSet, std::move(X), std::move(body)); }
inline Formula f_ex_set(std::string X, Formula body) { return f_quant(FormulaKind::ExSet, std::move(X), std::move(body)); }

inline bool is_literal(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::And: case FormulaKind::Or:
    case FormulaKind::AllNum: case FormulaKind::ExNum:
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      return false;
    default: return true;
  }
}

inline bool is_number_quant(const Formula& f) {
  return f.kind == FormulaKind::AllNum || f.kind == FormulaKind::ExNum;
}
inline bool is_set_quant(const Formula& f) {
  return f.kind == FormulaKind::AllSet || f.kind == FormulaKind::ExSet;
}

// De Morgan dual; negation stays at the literal level.
inline Formula negate(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Eq: return f_lit2(FormulaKind::Neq, f.lhs, f.rhs);
    case FormulaKind::Neq: return f_lit2(FormulaKind::Eq, f.lhs, f.rhs);
    case FormulaKind::Less: return f_lit2(FormulaKind::NotLess, f.lhs, f.rhs);
    case FormulaKind::NotLess: return f_lit2(FormulaKind::Less, f.lhs, f.rhs);
    case FormulaKind::CodeLess: return f_lit2(FormulaKind::NotCodeLess, f.lhs, f.rhs);
    case FormulaKind::NotCodeLess: return f_lit2(FormulaKind::CodeLess, f.lhs, f.rhs);
    case FormulaKind::In: return f_not_in(f.lhs, f.set_var);
    case FormulaKind::NotIn: return f_in(f.lhs, f.set_var);
    case FormulaKind::Prov: return f_not_prov(f.theory, f.lhs);
    case FormulaKind::NotProv: return f_prov(f.theory, f.lhs);
    case FormulaKind::And: return f_or(negate(f.kids[0]), negate(f.kids[1]));
    case FormulaKind::Or: return f_and(negate(f.kids[0]), negate(f.kids[1]));
    case FormulaKind::AllNum: return f_ex_num(f.bound, negate(f.kids[0]));
    case FormulaKind::ExNum: return f_all_num(f.bound, negate(f.kids[0]));
    case FormulaKind::AllSet: return f_ex_set(f.set_var, negate(f.kids[0]));
    case FormulaKind::ExSet: return f_all_set(f.set_var, negate(f.kids[0]));
  }
  throw Error("negate: bad kind");
}

// A -> B as a formula: negate(A) | B.
inline Formula f_implies(const Formula& a, Formula b) {
  return f_or(negate(a), std::move(b));
}

// Rank: literals 0; one step per connective or quantifier of either sort.
inline std::uint64_t rank(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::And: case FormulaKind::Or:
      return std::max(rank(f.kids[0]), rank(f.kids[1])) + 1;
    case FormulaKind::AllNum: case FormulaKind::ExNum:
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      return rank(f.kids[0]) + 1;
    default: return 0;
  }
}

inline void free_num_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      std::set<std::string> inner;
      free_num_vars(f.kids[0], inner);
      inner.erase(f.bound);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      free_num_vars(f.kids[0], out);
      return;
    case FormulaKind::And: case FormulaKind::Or:
      free_num_vars(f.kids[0], out);
      free_num_vars(f.kids[1], out);
      return;
    case FormulaKind::In: case FormulaKind::NotIn:
    case FormulaKind::Prov: case FormulaKind::NotProv:
      term_vars(f.lhs, out);
      return;
    default:
      term_vars(f.lhs, out);
      term_vars(f.rhs, out);
      return;
  }
}

inline void free_set_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind) {
    case FormulaKind::In: case FormulaKind::NotIn:
      out.insert(f.set_var);
      return;
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      std::set<std::string> inner;
      free_set_vars(f.kids[0], inner);
      inner.erase(f.set_var);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case FormulaKind::And: case FormulaKind::Or:
      free_set_vars(f.kids[0], out);
      free_set_vars(f.kids[1], out);
      return;
    case FormulaKind::AllNum: case FormulaKind::ExNum:
      free_set_vars(f.kids[0], out);
      return;
    default: return;
  }
}

inline std::set<std::string> free_num_vars(const Formula& f) {
  std::set<std::string> s; free_num_vars(f, s); return s;
}
inline std::set<std::string> free_set_vars(const Formula& f) {
  std::set<std::string> s; free_set_vars(f, s); return s;
}
inline bool is_closed(const Formula& f) {
  return free_num_vars(f).empty() && free_set_vars(f).empty();
}

inline void bound_vars(const Formula& f, std::set<std::string>& out) {
  if (is_number_quant(f)) out.insert(f.bound);
  if (is_set_quant(f)) out.insert(f.set_var);
  for (const auto& k : f.kids) bound_vars(k, out);
}

namespace detail {
inline std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
  if (!used.count(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}
}  // namespace detail

// A number variable not occurring (free or bound) in any of the formulas.
inline std::string fresh_num_var(const std::string& stem,
                                 std::initializer_list<const Formula*> ctx) {
  std::set<std::string> used;
  for (const Formula* f : ctx) {
    free_num_vars(*f, used);
    bound_vars(*f, used);
  }
  return detail::fresh_name(stem, used);
}

inline std::string fresh_set_var(const std::string& stem,
                                 std::initializer_list<const Formula*> ctx) {
  std::set<std::string> used;
  for (const Formula* f : ctx) {
    free_set_vars(*f, used);
    bound_vars(*f, used);
  }
  return detail::fresh_name(stem, used);
}

// Capture-avoiding substitution of a term for a free number variable.  Inner
// binders that would capture a variable of `repl` are renamed.
inline Formula subst_num(const Formula& f, const std::string& x, const Term& repl) {
  switch (f.kind) {
    case FormulaKind::And:
      return f_and(subst_num(f.kids[0], x, repl), subst_num(f.kids[1], x, repl));
    case FormulaKind::Or:
      return f_or(subst_num(f.kids[0], x, repl), subst_num(f.kids[1], x, repl));
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      if (f.bound == x) return f;
      std::set<std::string> rv;
      term_vars(repl, rv);
      Formula g = f;
      if (rv.count(f.bound)) {
        std::set<std::string> used = rv;
        free_num_vars(f.kids[0], used);
        bound_vars(f.kids[0], used);
        std::string nb = detail::fresh_name(f.bound, used);
        g.bound = nb;
        g.kids[0] = subst_num(f.kids[0], f.bound, t_var(nb));
      }
      g.kids[0] = subst_num(g.kids[0], x, repl);
      return g;
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      Formula g = f;
      g.kids[0] = subst_num(f.kids[0], x, repl);
      return g;
    }
    default: {
      Formula g = f;
      g.lhs = term_subst(f.lhs, x, repl);
      if (g.kind != FormulaKind::In && g.kind != FormulaKind::NotIn &&
          g.kind != FormulaKind::Prov && g.kind != FormulaKind::NotProv)
        g.rhs = term_subst(f.rhs, x, repl);
      return g;
    }
  }
}

// Renames a free set variable (set variables only ever map to set variables).
inline Formula subst_set(const Formula& f, const std::string& X, const std::string& Y) {
  switch (f.kind) {
    case FormulaKind::In: case FormulaKind::NotIn: {
      Formula g = f;
      if (g.set_var == X) g.set_var = Y;
      return g;
    }
    case FormulaKind::And:
      return f_and(subst_set(f.kids[0], X, Y), subst_set(f.kids[1], X, Y));
    case FormulaKind::Or:
      return f_or(subst_set(f.kids[0], X, Y), subst_set(f.kids[1], X, Y));
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      Formula g = f;
      g.kids[0] = subst_set(f.kids[0], X, Y);
      return g;
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      if (f.set_var == X) return f;
      Formula g = f;
      if (f.set_var == Y) {
        // would capture: rename the binder first
        std::set<std::string> used = {X, Y};
        free_set_vars(f.kids[0], used);
        bound_vars(f.kids[0], used);
        std::string nb = detail::fresh_name(f.set_var, used);
        g.set_var = nb;
        g.kids[0] = subst_set(f.kids[0], f.set_var, nb);
      }
      g.kids[0] = subst_set(g.kids[0], X, Y);
      return g;
    }
    default: return f;
  }
}

// No binder may reuse a name already bound on the path above it, and binders
// must not shadow free variables of their own scope ambiguously.  Builders
// keep this invariant; the parser rejects violations.
inline bool no_shadowing(const Formula& f, std::set<std::string> path = {}) {
  if (is_number_quant(f) || is_set_quant(f)) {
    const std::string& v = is_number_quant(f) ? f.bound : f.set_var;
    if (path.count(v)) return false;
    path.insert(v);
  }
  for (const auto& k : f.kids)
    if (!no_shadowing(k, path)) return false;
  return true;
}

// Total order on formulas (and a hashable key): a compact canonical
// serialization.  Used for multiset comparisons and deterministic printing.
inline void ser_term(const Term& t, std::string& out) {
  switch (t.kind) {
    case TermKind::Var: out += 'v'; out += t.var; out += ';'; return;
    case TermKind::Zero: out += 'z'; return;
    case TermKind::One: out += 'o'; return;
    case TermKind::Sum: out += '+'; ser_term(t.args[0], out); ser_term(t.args[1], out); return;
    case TermKind::Prod: out += '*'; ser_term(t.args[0], out); ser_term(t.args[1], out); return;
  }
}

inline void ser_formula(const Formula& f, std::string& out) {
  out += static_cast<char>('A' + static_cast<int>(f.kind));
  switch (f.kind) {
    case FormulaKind::In: case FormulaKind::NotIn:
      ser_term(f.lhs, out); out += f.set_var; out += ';';
      return;
    case FormulaKind::Prov: case FormulaKind::NotProv:
      out += f.theory; out += ';'; ser_term(f.lhs, out);
      return;
    case FormulaKind::And: case FormulaKind::Or:
      ser_formula(f.kids[0], out); ser_formula(f.kids[1], out);
      return;
    case FormulaKind::AllNum: case FormulaKind::ExNum:
      out += f.bound; out += ';'; ser_formula(f.kids[0], out);
      return;
    case FormulaKind::AllSet: case FormulaKind::ExSet:
      out += f.set_var; out += ';'; ser_formula(f.kids[0], out);
      return;
    default:
      ser_term(f.lhs, out); ser_term(f.rhs, out);
      return;
  }
}

inline std::string formula_key(const Formula& f) {
  std::string s;
  ser_formula(f, s);
  return s;
}

}  // namespace eps0

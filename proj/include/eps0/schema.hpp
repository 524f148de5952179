#pragma once

// Builders for every schema formula the engine manipulates, plus the
// recognizers the proof checker uses to accept schema-axiom leaves.
// All shapes are NNF; implications A -> B are rendered !A | B.

#include <optional>
#include <vector>

#include "eps0/classify.hpp"
#include "eps0/godel.hpp"
#include "eps0/ordinal.hpp"
#include "eps0/syntax.hpp"

namespace eps0 {

// ---------------------------------------------------------------------------
// Code-valued terms.  The object language has no symbols for ordinal or pair
// arithmetic; these polynomial terms construct the formal codes of
// ordinal.hpp (sum / power / scalar multiple) and the square pairing, which
// is what lets bounds like "below z + w^x" appear inside formulas.
// ---------------------------------------------------------------------------

inline Term pair_term(Term a, Term b) {
  Term s = t_sum(a, b);
  return t_sum(t_prod(s, s), std::move(a));
}

// 4*p(a,b)+1: code of value(a) + value(b)
inline Term ord_sum_term(Term a, Term b) {
  return t_sum(t_prod(numeral(4), pair_term(std::move(a), std::move(b))), t_one());
}

// 4*k+2: code of w^value(k)
inline Term ord_pow_term(Term k) {
  return t_sum(t_prod(numeral(4), std::move(k)), numeral(2));
}

// 4*p(a,m)+3: code of value(a) * m
inline Term ord_mul_term(Term a, Term m) {
  return t_sum(t_prod(numeral(4), pair_term(std::move(a), std::move(m))), numeral(3));
}

// ---------------------------------------------------------------------------
// Induction and transfinite induction shapes.
// ---------------------------------------------------------------------------

// phi(0) & A x.(phi(x) -> phi(x+1)) -> C, with C supplied by the caller.
inline Formula induction_shape(const Formula& phi, const std::string& x, Formula conclusion) {
  Formula base = negate(subst_num(phi, x, t_zero()));
  Formula step = f_ex_num(
      x, f_and(phi, negate(subst_num(phi, x, t_sum(t_var(x), t_one())))));
  return f_or(std::move(base), f_or(std::move(step), std::move(conclusion)));
}

// The induction axiom for phi: conclusion A x. phi(x).
inline Formula build_induction(const Formula& phi, const std::string& x) {
  return induction_shape(phi, x, f_all_num(x, phi));
}

// The pure-logic induction instance: conclusion phi(t).
inline Formula build_induction_upto(const Formula& phi, const std::string& x, const Term& t) {
  return induction_shape(phi, x, subst_num(phi, x, t));
}

// Prog(phi) = A x.(A y prec x. phi(y) -> phi(x)), NNF with a fresh y.
inline Formula build_prog(const Formula& phi, const std::string& x) {
  std::string y = fresh_num_var("y", {&phi});
  if (y == x) y = fresh_num_var("y0", {&phi});
  Formula missing = f_ex_num(
      y, f_and(f_code_less(t_var(y), t_var(x)), negate(subst_num(phi, x, t_var(y)))));
  return f_all_num(x, f_or(std::move(missing), phi));
}

// Prog(phi) -> A x. phi(x).
inline Formula build_ti(const Formula& phi, const std::string& x) {
  return f_or(negate(build_prog(phi, x)), f_all_num(x, phi));
}

// Well-foundedness of alpha, as the single set-variable instance:
// A X.( (A b.(A c prec b. c in X) -> b in X) -> A b prec code(alpha). b in X )
inline Formula build_wf(const Ordinal& alpha) {
  Term bound = numeral(to_u64(encode_nat(alpha), "build_wf bound"));
  Formula prog_fail = f_ex_num(
      "b", f_and(f_all_num("c", f_or(f_not_code_less(t_var("c"), t_var("b")),
                                     f_in(t_var("c"), "X"))),
                 f_not_in(t_var("b"), "X")));
  Formula below = f_all_num(
      "b", f_or(f_not_code_less(t_var("b"), bound), f_in(t_var("b"), "X")));
  return f_all_set("X", f_or(std::move(prog_fail), std::move(below)));
}

// ---------------------------------------------------------------------------
// Reflection.  Pr[T](t) is atomic; the term standing for "code of phi(x-dot)"
// is the square pairing p(code(phi), x) written out as a polynomial in x,
// with code(phi) rendered as a compact binary term.  Certificate stores use
// the same pairing for instance keys.
// ---------------------------------------------------------------------------

inline Term dotted_code_term(const GodelCode& phi_code, Term x) {
  return pair_term(code_term(phi_code), std::move(x));
}

// The uniform reflection instance A x.(Pr[T](code phi(x-dot)) -> phi(x)).
inline Formula build_rfn(const std::string& theory, const Formula& phi, const std::string& x) {
  auto fv = free_num_vars(phi);
  if (!(fv.size() == 1 && fv.count(x)) || !free_set_vars(phi).empty())
    throw Error("build_rfn: phi must have exactly the number variable " + x + " free");
  Term code = dotted_code_term(encode_formula(phi), t_var(x));
  return f_all_num(x, f_or(f_not_prov(theory, std::move(code)), phi));
}

// Local reflection Pr[T](code phi) -> phi for a sentence phi.
inline Formula build_rfn_local(const std::string& theory, const Formula& phi) {
  if (!is_closed(phi)) throw Error("build_rfn_local: phi must be closed");
  Term code = code_term(encode_formula(phi));
  return f_or(f_not_prov(theory, std::move(code)), phi);
}

// Con(T) as !Pr[T](code(0=1)).
inline Formula build_con(const std::string& theory) {
  return f_not_prov(theory, code_term(encode_formula(f_eq(t_zero(), t_one()))));
}

// ---------------------------------------------------------------------------
// Multivariate contraction.  phi(x1..xk) becomes the single-variable
//   psi(x) = A x1 < x+1 ... (pairing-guard -> phi)
// over the square pairing, right-nested: <x1,...,xk> = p(x1, <x2,...,xk>).
// The guard quantifiers are bounded (pair components never exceed the code),
// so the evaluator decides psi at a numeral exactly when it decides phi.
// ---------------------------------------------------------------------------

inline Formula build_contract(const Formula& phi, const std::vector<std::string>& vars,
                              const std::string& x) {
  if (vars.empty()) throw Error("build_contract: needs at least one variable");
  auto fv = free_num_vars(phi);
  for (const auto& v : vars)
    if (!fv.count(v)) throw Error("build_contract: " + v + " is not free in phi");
  if (fv.count(x)) throw Error("build_contract: contracted variable " + x + " occurs in phi");

  std::size_t k = vars.size();
  // intermediate tuple-tail variables u2..u_{k-1}; tails[i] = <x_{i+2},..,x_k>
  std::set<std::string> used(vars.begin(), vars.end());
  used.insert(x);
  free_num_vars(phi, used);
  bound_vars(phi, used);
  std::vector<std::string> tails;
  for (std::size_t i = 0; i + 2 < k; ++i) {
    std::string u = detail::fresh_name("u" + std::to_string(i + 2), used);
    used.insert(u);
    tails.push_back(u);
  }

  // guard equations, outermost first: p(x1, u2) = x, p(x2, u3) = u2, ...,
  // p(x_{k-1}, x_k) = u_{k-1}; with k = 1 the guard is x1 = x.
  std::vector<Formula> eqs;
  if (k == 1) {
    eqs.push_back(f_eq(t_var(vars[0]), t_var(x)));
  } else {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      Term left = i + 2 < k ? t_var(tails[i]) : t_var(vars[k - 1]);
      Term code = pair_term(t_var(vars[i]), std::move(left));
      Term rhs = i == 0 ? t_var(x) : t_var(tails[i - 1]);
      eqs.push_back(f_eq(std::move(code), std::move(rhs)));
    }
  }
  Formula body = phi;
  for (std::size_t i = eqs.size(); i-- > 0;) body = f_or(negate(eqs[i]), std::move(body));

  Term bound = t_sum(t_var(x), t_one());
  auto close = [&](const std::string& v, Formula b) {
    return f_all_num(v, f_or(f_not_less(t_var(v), bound), std::move(b)));
  };
  for (std::size_t i = tails.size(); i-- > 0;) body = close(tails[i], std::move(body));
  for (std::size_t i = k; i-- > 0;) body = close(vars[i], std::move(body));
  return body;
}

// ---------------------------------------------------------------------------
// The jump used by the transfinite-induction lift:
//   phi+(x) = A z.( A y prec z. phi(y)  ->  A y prec z + w^x. phi(y) )
// with the bound z + w^x rendered through the formal sum/power codes.
// ---------------------------------------------------------------------------

inline Formula gentzen_jump(const Formula& phi, const std::string& x) {
  if (!free_num_vars(phi).count(x))
    throw Error("gentzen_jump: " + x + " is not free in phi");
  std::string z = fresh_num_var("z", {&phi});
  std::string y = fresh_num_var("y", {&phi});
  if (y == z) y = fresh_num_var("y0", {&phi});
  Formula fail_below_z = f_ex_num(
      y, f_and(f_code_less(t_var(y), t_var(z)), negate(subst_num(phi, x, t_var(y)))));
  Term bound = ord_sum_term(t_var(z), ord_pow_term(t_var(x)));
  Formula holds_below_bound = f_all_num(
      y, f_or(f_not_code_less(t_var(y), bound), subst_num(phi, x, t_var(y))));
  return f_all_num(z, f_or(std::move(fail_below_z), std::move(holds_below_bound)));
}

// ---------------------------------------------------------------------------
// Recognizers (used by the checker's schema-axiom rule).
// ---------------------------------------------------------------------------

struct InductionView {
  Formula phi;
  std::string var;
};

inline std::optional<InductionView> recognize_induction(const Formula& f) {
  if (f.kind != FormulaKind::Or || f.kids[1].kind != FormulaKind::Or) return std::nullopt;
  const Formula& conclusion = f.kids[1].kids[1];
  if (conclusion.kind != FormulaKind::AllNum) return std::nullopt;
  InductionView v{conclusion.kids[0], conclusion.bound};
  if (build_induction(v.phi, v.var) != f) return std::nullopt;
  return v;
}

inline std::optional<InductionView> recognize_ti(const Formula& f) {
  if (f.kind != FormulaKind::Or || f.kids[1].kind != FormulaKind::AllNum) return std::nullopt;
  InductionView v{f.kids[1].kids[0], f.kids[1].bound};
  // rebuild with the candidate's own fresh variable
  const Formula& neg_prog = f.kids[0];
  if (neg_prog.kind != FormulaKind::ExNum) return std::nullopt;
  Formula rebuilt = build_ti(v.phi, v.var);
  if (rebuilt == f) return v;
  // alpha-variant in the auxiliary variable: extract it and compare
  const Formula& body = neg_prog.kids[0];
  if (body.kind != FormulaKind::And || body.kids[0].kind != FormulaKind::AllNum)
    return std::nullopt;
  std::string y = body.kids[0].bound;
  Formula missing = f_all_num(y, f_or(f_not_code_less(t_var(y), t_var(v.var)),
                                      subst_num(v.phi, v.var, t_var(y))));
  Formula prog_fail =
      f_ex_num(v.var, f_and(std::move(missing), negate(v.phi)));
  if (f_or(std::move(prog_fail), f_all_num(v.var, v.phi)) == f) return v;
  return std::nullopt;
}

// Reads back the canonical binary-Horner shape produced by code_term.
inline std::optional<BigNat> code_term_value(const Term& t) {
  if (t.kind == TermKind::Zero) return BigNat(0);
  if (t.kind == TermKind::One) return BigNat(1);
  if (t.kind == TermKind::Prod) {
    // doubled: high * (1+1)
    if (t.args[1] != t_sum(t_one(), t_one())) return std::nullopt;
    auto h = code_term_value(t.args[0]);
    if (!h || *h < 1) return std::nullopt;
    return *h * 2;
  }
  if (t.kind == TermKind::Sum && t.args[1].kind == TermKind::One) {
    auto d = code_term_value(t.args[0]);
    if (!d || *d < 2 || *d % 2 != 0) return std::nullopt;
    return *d + 1;
  }
  return std::nullopt;
}

struct RfnView {
  std::string theory;
  Formula phi;        // the reflected formula, one free number variable
  std::string var;    // that variable
  Term instance_at;   // the term substituted for it (the variable itself for
                      // the universal form)
  GodelCode phi_code;
  bool universal = false;
};

inline std::optional<RfnView> recognize_rfn(const Formula& f) {
  Formula body = f;
  bool universal = false;
  std::string outer;
  if (body.kind == FormulaKind::AllNum) {
    universal = true;
    outer = body.bound;
    body = body.kids[0];
  }
  if (body.kind != FormulaKind::Or || body.kids[0].kind != FormulaKind::NotProv)
    return std::nullopt;
  const Term& arg = body.kids[0].lhs;
  // dotted shape: (ct + s)*(ct + s) + ct
  if (arg.kind != TermKind::Sum || arg.args[0].kind != TermKind::Prod) return std::nullopt;
  const Term& sq = arg.args[0];
  if (sq.args[0] != sq.args[1] || sq.args[0].kind != TermKind::Sum) return std::nullopt;
  const Term& ct = sq.args[0].args[0];
  const Term& s = sq.args[0].args[1];
  if (arg.args[1] != ct) return std::nullopt;
  auto c = code_term_value(ct);
  if (!c) return std::nullopt;
  Formula phi;
  try {
    phi = decode_formula(*c);
  } catch (const Error&) {
    return std::nullopt;
  }
  auto fv = free_num_vars(phi);
  if (fv.size() != 1 || !free_set_vars(phi).empty()) return std::nullopt;
  std::string v = *fv.begin();
  if (universal && (s.kind != TermKind::Var || s.var != outer)) return std::nullopt;
  Formula expect = v == outer && universal ? phi : subst_num(phi, v, s);
  if (body.kids[1] != expect) return std::nullopt;
  return RfnView{body.kids[0].theory, phi, v, s, *c, universal};
}

struct LocalRfnView {
  std::string theory;
  Formula phi;
  GodelCode phi_code;
};

inline std::optional<LocalRfnView> recognize_rfn_local(const Formula& f) {
  if (f.kind != FormulaKind::Or || f.kids[0].kind != FormulaKind::NotProv)
    return std::nullopt;
  auto c = code_term_value(f.kids[0].lhs);
  if (!c) return std::nullopt;
  Formula phi;
  try {
    phi = decode_formula(*c);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!is_closed(phi) || phi != f.kids[1]) return std::nullopt;
  return LocalRfnView{f.kids[0].theory, phi, *c};
}

}  // namespace eps0

#pragma once

// Proof synthesizers built from the calculus toolkit: the equality
// congruence lemma, the numeral induction ladder, pure-logic induction
// instances, and the reflection-to-induction construction.

#include <cstdint>
#include <string>

#include "eps0/calculus.hpp"

namespace eps0 {

// Derivation of { s != t, negate(phi[s/x]), phi[t/x] } for closed s, t.
// Structural recursion; equality replacement happens at the literals.
inline FinProof cong_proof(const Formula& phi, const std::string& x, const Term& s,
                           const Term& t) {
  if (!term_closed(s) || !term_closed(t))
    throw Error("cong_proof: replacement terms must be closed");
  Formula neq = f_neq(s, t);
  Formula at_s = subst_num(phi, x, s);
  Formula at_t = subst_num(phi, x, t);
  Sequent goal{neq, negate(at_s), at_t};
  switch (phi.kind) {
    case FormulaKind::And: {
      const Formula& a = phi.kids[0];
      const Formula& b = phi.kids[1];
      FinProof pa = node1(ProofRule::OrIntro,
                          Sequent{neq, negate(at_s), subst_num(a, x, t)},
                          cong_proof(a, x, s, t));
      FinProof pb = node1(ProofRule::OrIntro,
                          Sequent{neq, negate(at_s), subst_num(b, x, t)},
                          cong_proof(b, x, s, t));
      return node2(ProofRule::AndIntro, goal, std::move(pa), std::move(pb));
    }
    case FormulaKind::Or: {
      const Formula& a = phi.kids[0];
      const Formula& b = phi.kids[1];
      FinProof pa = node1(ProofRule::OrIntro,
                          Sequent{neq, negate(subst_num(a, x, s)), at_t},
                          cong_proof(a, x, s, t));
      FinProof pb = node1(ProofRule::OrIntro,
                          Sequent{neq, negate(subst_num(b, x, s)), at_t},
                          cong_proof(b, x, s, t));
      return node2(ProofRule::AndIntro, goal, std::move(pa), std::move(pb));
    }
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      if (phi.bound == x) return ident_proof(at_t);  // x not free here
      std::string a = fresh_num_var("c", {&phi});
      Formula body_inst = subst_num(phi.kids[0], phi.bound, t_var(a));
      FinProof inner = cong_proof(body_inst, x, s, t);
      Formula inst_s = subst_num(body_inst, x, s);
      Formula inst_t = subst_num(body_inst, x, t);
      if (phi.kind == FormulaKind::AllNum) {
        // goal: { s!=t, E v.!body[s], A v.body[t] }
        FinProof ex = by_ex_num(Sequent{neq, negate(at_s), inst_t}, t_var(a),
                                std::move(inner));
        (void)inst_s;
        return by_all_num(goal, a, std::move(ex));
      }
      // goal: { s!=t, A v.!body[s], E v.body[t] }
      FinProof ex = by_ex_num(Sequent{neq, negate(inst_s), at_t}, t_var(a),
                              std::move(inner));
      return by_all_num(goal, a, std::move(ex));
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      std::string u = fresh_set_var("U", {&phi});
      Formula body_inst = subst_set(phi.kids[0], phi.set_var, u);
      FinProof inner = cong_proof(body_inst, x, s, t);
      Formula inst_s = subst_num(body_inst, x, s);
      Formula inst_t = subst_num(body_inst, x, t);
      if (phi.kind == FormulaKind::AllSet) {
        FinProof ex = by_ex_set(Sequent{neq, negate(at_s), inst_t}, u, std::move(inner));
        (void)inst_s;
        return by_all_set(goal, u, std::move(ex));
      }
      FinProof ex = by_ex_set(Sequent{neq, negate(inst_s), at_t}, u, std::move(inner));
      return by_all_set(goal, u, std::move(ex));
    }
    default:
      // a literal without x needs no replacement; its dual pair is logical
      return leaf(at_s == at_t ? ProofRule::LogAx : ProofRule::EqAx, goal);
  }
}

// The existence part of an induction instance:
//   E x.(phi(x) & !phi(x+1))  as a named formula.
inline Formula induction_step_failure(const Formula& phi, const std::string& x) {
  return f_ex_num(x, f_and(phi, negate(subst_num(phi, x, t_sum(t_var(x), t_one())))));
}

// Derivation of { !phi(0), E x.(phi & !phi(x+1)), phi(numeral(n)) } by a
// chain of cuts along the numerals.  Node count is exactly affine in n.
inline FinProof induction_ladder(const Formula& phi, const std::string& x, std::uint64_t n) {
  Formula ex = induction_step_failure(phi, x);
  Formula neg0 = negate(subst_num(phi, x, t_zero()));
  auto phi_at = [&](std::uint64_t k) { return subst_num(phi, x, numeral(k)); };

  if (n == 0) return ident_proof(phi_at(0));

  FinProof acc = induction_ladder(phi, x, n - 1);
  // step derivation: { ex, !phi(n-1), phi(n) }
  Formula prev = phi_at(n - 1);
  Formula cur = phi_at(n);
  Term succ = t_sum(numeral(n - 1), t_one());  // equals numeral(n) iff n >= 2
  Formula at_succ = subst_num(phi, x, succ);
  Formula inst = f_and(prev, negate(at_succ));
  Sequent step_goal{ex, negate(prev), cur};

  FinProof left = ident_proof(prev);  // { !phi(n-1), phi(n-1) }

  FinProof right_core;
  if (at_succ == cur) {
    right_core = ident_proof(cur);  // { !phi(n), phi(n) }
  } else {
    // n == 1: bridge phi(0+1) to phi(1) through 0+1 = 1
    Formula eq = f_eq(succ, numeral(n));
    Sequent bridged{negate(at_succ), cur};
    FinProof cong = cong_proof(phi, x, succ, numeral(n));
    // { succ != n, !phi(succ), phi(n) } cut against the true literal
    FinProof tl = leaf(ProofRule::TrueLit, Sequent{eq});
    right_core = by_cut(bridged, eq, std::move(tl), std::move(cong));
  }

  FinProof and_node = node2(ProofRule::AndIntro,
                            Sequent{inst, negate(prev), cur},
                            std::move(left), std::move(right_core));
  FinProof step = by_ex_num(step_goal, numeral(n - 1), std::move(and_node));

  Sequent goal{neg0, ex, cur};
  return by_cut(goal, prev, std::move(acc), std::move(step));
}

// Pure-logic proof of  phi(0) & A x.(phi -> phi(x+1)) -> phi(numeral(n)),
// as the single NNF formula.  Checks under any theory; no axiom leaves
// beyond logical ones.
inline FinProof synth_induction_instance(const Formula& phi, const std::string& x,
                                         std::uint64_t n) {
  if (!free_num_vars(phi).count(x))
    throw Error("synth_induction_instance: " + x + " is not free in phi");
  Formula target = build_induction_upto(phi, x, numeral(n));
  // target = !phi(0) | (ex | phi(n))
  const Formula& neg0 = target.kids[0];
  const Formula& rest = target.kids[1];
  const Formula& ex = rest.kids[0];
  const Formula& at_n = rest.kids[1];

  FinProof core = induction_ladder(phi, x, n);
  FinProof n1 = node1(ProofRule::OrIntro, Sequent{neg0, rest, at_n}, std::move(core));
  FinProof n2 = node1(ProofRule::OrIntro, Sequent{neg0, rest}, std::move(n1));
  FinProof n3 = node1(ProofRule::OrIntro, Sequent{neg0, target}, std::move(n2));
  FinProof n4 = node1(ProofRule::OrIntro, Sequent{target}, std::move(n3));
  (void)ex;
  return n4;
}

inline std::uint64_t proof_size(const FinProof& p) {
  std::uint64_t n = 1;
  for (const auto& q : p.premises) n += proof_size(q);
  return n;
}

// ---------------------------------------------------------------------------
// Reflection to induction.
//
// Produces a proof of the induction axiom for phi whose only schema leaf is
// the uniform-reflection instance for the bracketed formula
//   B(x) = phi(0) & A x.(phi -> phi(x+1)) -> phi(x),
// conditional on the provability premise A x.Pr[base](code B(x-dot)), whose
// negation is carried in the end sequent.  The report records that premise
// as a certificate obligation, instance by instance.
// ---------------------------------------------------------------------------

struct ReflectionSynthesis {
  FinProof proof;             // end sequent: { E x.!Pr[...](...), Ind(phi) }
  Formula obligation;         // A x. Pr[base](dotted code of B)
  Formula bracketed;          // B(x)
  GodelCode bracketed_code;   // code(B)
  std::string base_theory;
  std::string schema_token;   // the descriptor that licenses the leaf
  std::string instance_var;
};

inline ReflectionSynthesis synth_reflection_to_induction(const Formula& phi,
                                                         const std::string& x,
                                                         const Theory& th) {
  if (!free_num_vars(phi).count(x))
    throw Error("synth_reflection_to_induction: " + x + " is not free in phi");
  if (!free_set_vars(phi).empty())
    throw Error("synth_reflection_to_induction: phi must be lightface here");
  Formula bracketed = induction_shape(phi, x, phi);  // B(x), free variable x

  const SchemaDescriptor* rfn = nullptr;
  for (const auto& d : th.schemas)
    if (d.kind == SchemaKind::UniformReflection &&
        formula_in_class(bracketed, d.cls, d.level)) {
      rfn = &d;
      break;
    }
  if (!rfn)
    throw Error("synth_reflection_to_induction: theory " + th.name +
                " declares no uniform-reflection schema covering the instance class");

  GodelCode bcode = encode_formula(bracketed);
  Formula obligation =
      f_all_num(x, f_prov(rfn->over, dotted_code_term(bcode, t_var(x))));
  Formula neg_obl = negate(obligation);  // E x. !Pr[...](...)
  Formula ind = build_induction(phi, x);
  // Ind(phi) = !phi(0) | (ex | A x. phi)
  const Formula& neg0 = ind.kids[0];
  const Formula& rest = ind.kids[1];
  const Formula& ex = rest.kids[0];
  const Formula& allphi = rest.kids[1];

  std::string a = fresh_num_var("a", {&phi, &obligation});
  Formula phi_a = subst_num(phi, x, t_var(a));
  Formula b_at_a = subst_num(bracketed, x, t_var(a));
  Formula prov_a = f_prov(rfn->over, dotted_code_term(bcode, t_var(a)));
  Formula rfn_inst = f_or(negate(prov_a), b_at_a);

  Sequent core{neg_obl, neg0, ex, phi_a};

  // premise 1 of the cut: the schema-axiom leaf
  FinProof schema_leaf = leaf(ProofRule::SchemaAx, Sequent{rfn_inst});

  // premise 2: { core, Pr & !B(a) }
  Formula neg_inst = negate(rfn_inst);  // Pr(...) & !B(a)
  //   left conjunct: { neg_obl, Pr(a) } via the witness a
  FinProof pr_leaf = leaf(ProofRule::LogAx, Sequent{negate(prov_a), prov_a});
  FinProof pr_side = by_ex_num(Sequent{neg_obl, prov_a}, t_var(a), std::move(pr_leaf));
  //   right conjunct: { neg0, ex, phi_a, !B(a) }
  //   !B(a) = phi(0) & (A x.(!phi | phi(x+1)) & !phi(a))
  Formula negB = negate(b_at_a);
  FinProof part_zero = ident_proof(subst_num(phi, x, t_zero()));  // { !phi(0), phi(0) }
  // { ex, A x.(!phi | phi(x+1)) }
  Formula all_step = negate(ex);
  std::string b = fresh_num_var("b", {&phi, &obligation});
  Formula phi_b = subst_num(phi, x, t_var(b));
  Formula phi_b1 = subst_num(phi, x, t_sum(t_var(b), t_one()));
  Formula step_inst_b = f_or(negate(phi_b), phi_b1);
  Formula ex_inst_b = f_and(phi_b, negate(phi_b1));
  FinProof x0 = node2(ProofRule::AndIntro, Sequent{ex_inst_b, negate(phi_b), phi_b1},
                      ident_proof(phi_b), ident_proof(phi_b1));
  FinProof x0e = by_ex_num(Sequent{ex, negate(phi_b), phi_b1}, t_var(b), std::move(x0));
  FinProof x1 = node1(ProofRule::OrIntro, Sequent{ex, step_inst_b, phi_b1}, std::move(x0e));
  FinProof x2 = node1(ProofRule::OrIntro, Sequent{ex, step_inst_b}, std::move(x1));
  FinProof all_step_proof = by_all_num(Sequent{ex, all_step}, b, std::move(x2));
  FinProof part_a = ident_proof(phi_a);  // { !phi(a), phi(a) }
  FinProof right_pair =
      node2(ProofRule::AndIntro,
            Sequent{ex, phi_a, negB.kids[1]},  // A..& !phi(a)
            std::move(all_step_proof), std::move(part_a));
  FinProof negB_proof = node2(ProofRule::AndIntro, Sequent{neg0, ex, phi_a, negB},
                              std::move(part_zero), std::move(right_pair));
  FinProof neg_inst_proof =
      node2(ProofRule::AndIntro, sequent_plus(core, neg_inst), std::move(pr_side),
            std::move(negB_proof));

  FinProof core_proof =
      by_cut(core, rfn_inst, std::move(schema_leaf), std::move(neg_inst_proof));

  // close a, then fold the disjunction
  FinProof closed =
      by_all_num(Sequent{neg_obl, neg0, ex, allphi}, a, std::move(core_proof));
  FinProof o1 = node1(ProofRule::OrIntro, Sequent{neg_obl, neg0, rest, allphi},
                      std::move(closed));
  FinProof o2 = node1(ProofRule::OrIntro, Sequent{neg_obl, neg0, rest}, std::move(o1));
  FinProof o3 = node1(ProofRule::OrIntro, Sequent{neg_obl, neg0, ind}, std::move(o2));
  FinProof o4 = node1(ProofRule::OrIntro, Sequent{neg_obl, ind}, std::move(o3));

  ReflectionSynthesis out;
  out.proof = std::move(o4);
  out.obligation = obligation;
  out.bracketed = bracketed;
  out.bracketed_code = bcode;
  out.base_theory = rfn->over;
  out.schema_token = rfn->token();
  out.instance_var = x;
  return out;
}

}  // namespace eps0

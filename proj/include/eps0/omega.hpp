#pragma once

// Finitely-represented omega-proofs.
//
// A code is an operator expression (embed / invert / reduce / eliminate)
// over a checked finitary proof.  Nothing is materialized: the node
// descriptor at any position is computed on demand by pushing operators
// through one rule application at a time.  The classical bookkeeping
// applies: embedding a proof whose only schema axioms are induction
// instances yields tags below w*2 (induction leaves unfold into the numeral
// ladder under the omega rule), and one elimination step turns tag a, cut
// bound r+1 into tag w^a, cut bound r.  The repetition rule absorbs slack
// whenever an operator's computed structure lands below its declared tag,
// so tags decrease strictly along every edge.
//
// Sequents inside omega-proofs are value-normalized: closed terms are
// evaluated to numerals, except inside provability literals whose term
// shape is their meaning.  Normalization is what makes witness instances
// and omega-rule children line up syntactically after substitution.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eps0/derive.hpp"

namespace eps0 {

// ---------------------------------------------------------------------------
// Value normalization
// ---------------------------------------------------------------------------

inline Term nf_term(const Term& t) {
  if (term_closed(t)) {
    BigNat v = eval_term(t, {});
    if (v <= BigNat(1u << 20)) return numeral(v.convert_to<std::uint64_t>());
    throw LimitError("omega: closed term value exceeds the numeral limit");
  }
  switch (t.kind) {
    case TermKind::Sum: return t_sum(nf_term(t.args[0]), nf_term(t.args[1]));
    case TermKind::Prod: return t_prod(nf_term(t.args[0]), nf_term(t.args[1]));
    default: return t;
  }
}

inline Formula nf_formula(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Prov: case FormulaKind::NotProv:
      return f;  // provability arguments carry meaning in their shape
    case FormulaKind::In: case FormulaKind::NotIn: {
      Formula g = f;
      g.lhs = nf_term(f.lhs);
      return g;
    }
    case FormulaKind::And: case FormulaKind::Or: {
      Formula g = f;
      g.kids[0] = nf_formula(f.kids[0]);
      g.kids[1] = nf_formula(f.kids[1]);
      return g;
    }
    case FormulaKind::AllNum: case FormulaKind::ExNum:
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      Formula g = f;
      g.kids[0] = nf_formula(f.kids[0]);
      return g;
    }
    default: {
      Formula g = f;
      g.lhs = nf_term(f.lhs);
      g.rhs = nf_term(f.rhs);
      return g;
    }
  }
}

inline Sequent nf_sequent(const Sequent& s) {
  Sequent out;
  out.formulas.reserve(s.formulas.size());
  for (const auto& f : s.formulas) out.formulas.push_back(nf_formula(f));
  return out;
}

// ---------------------------------------------------------------------------
// Descriptors and positions
// ---------------------------------------------------------------------------

enum class OmegaRule { Ax, OrIntro, AndIntro, ExNum, OmegaAll, AllSet, ExSet, Cut, Rep };

inline const char* omega_rule_name(OmegaRule r) {
  switch (r) {
    case OmegaRule::Ax: return "ax";
    case OmegaRule::OrIntro: return "or-intro";
    case OmegaRule::AndIntro: return "and-intro";
    case OmegaRule::ExNum: return "ex-num";
    case OmegaRule::OmegaAll: return "omega-all";
    case OmegaRule::AllSet: return "all-set";
    case OmegaRule::ExSet: return "ex-set";
    case OmegaRule::Cut: return "cut";
    case OmegaRule::Rep: return "rep";
  }
  return "?";
}

using Position = std::vector<std::uint64_t>;

struct NodeDescriptor {
  OmegaRule rule = OmegaRule::Ax;
  Sequent sequent;
  Ordinal tag;
  std::uint64_t cut_rank = 0;
  Term witness;              // ExNum
  std::string eigen;         // AllSet eigenvariable / ExSet witness variable
  Formula cut_formula;       // Cut
  bool infinite_arity = false;
  std::size_t arity = 0;     // finite case
};

namespace omega_detail {

struct Expr;
using ECode = std::shared_ptr<const Expr>;

enum class OpKind { Emb, Inv, Red, Elim, Rem, SymL, Weak, Rename, Fault, TagFault };
enum class InvSide { Left, Right, Num, SetVar };

struct Expr {
  OpKind kind = OpKind::Emb;

  // Emb
  std::shared_ptr<const FinProof> keepalive;
  const FinProof* node = nullptr;
  std::map<std::string, std::uint64_t> env;
  int ind_stage = -1;
  std::uint64_t declared_rank = 0;

  ECode a, b;
  Formula formula;      // Inv target / Red cut / Rem+SymL literal / Fault add
  InvSide side = InvSide::Left;
  std::uint64_t side_num = 0;
  std::string from, to;  // Rename; `to` also holds the Inv set-variable
  Sequent extra;         // Rem/Weak: formulas unioned in
  Ordinal extra_tag;     // Rem: tag summand from the consumed side
  Position fault_pos;
};

struct ENode {
  OmegaRule rule = OmegaRule::Ax;
  Sequent sequent;
  Ordinal tag;
  std::uint64_t cut_rank = 0;
  Term witness;
  std::string eigen;
  Formula cut_formula;
  Formula principal;
  bool has_principal = false;
  int or_side = 0;
  bool infinite = false;
  std::size_t arity = 0;
  std::function<ECode(std::uint64_t)> child;
};

struct EvalCtx {
  std::shared_ptr<const Theory> theory;
  Formula nf_axiom;  // the theory sentence, normalized
};

ENode step(const ECode& code, const EvalCtx& ctx);

inline ECode mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

inline ECode mk_emb(std::shared_ptr<const FinProof> keep, const FinProof* node,
                    std::map<std::string, std::uint64_t> env, int stage,
                    std::uint64_t rank) {
  Expr e;
  e.kind = OpKind::Emb;
  e.keepalive = std::move(keep);
  e.node = node;
  e.env = std::move(env);
  e.ind_stage = stage;
  e.declared_rank = rank;
  return mk(std::move(e));
}

inline ECode mk_inv(ECode inner, Formula target, InvSide side, std::uint64_t n,
                    std::string var) {
  Expr e;
  e.kind = OpKind::Inv;
  e.a = std::move(inner);
  e.formula = std::move(target);
  e.side = side;
  e.side_num = n;
  e.to = std::move(var);
  return mk(std::move(e));
}

inline ECode mk_red(ECode c1, ECode c2, Formula cut) {
  Expr e;
  e.kind = OpKind::Red;
  e.a = std::move(c1);
  e.b = std::move(c2);
  e.formula = std::move(cut);
  return mk(std::move(e));
}

inline ECode mk_elim(ECode inner) {
  Expr e;
  e.kind = OpKind::Elim;
  e.a = std::move(inner);
  return mk(std::move(e));
}

inline ECode mk_rename(ECode inner, std::string from, std::string to) {
  if (from == to) return inner;
  Expr e;
  e.kind = OpKind::Rename;
  e.a = std::move(inner);
  e.from = std::move(from);
  e.to = std::move(to);
  return mk(std::move(e));
}

inline ECode mk_rem(ECode inner, Formula lit, Sequent extra, Ordinal extra_tag) {
  Expr e;
  e.kind = OpKind::Rem;
  e.a = std::move(inner);
  e.formula = std::move(lit);
  e.extra = std::move(extra);
  e.extra_tag = std::move(extra_tag);
  return mk(std::move(e));
}

inline ECode mk_syml(ECode left, ECode right, Formula lit) {
  Expr e;
  e.kind = OpKind::SymL;
  e.a = std::move(left);
  e.b = std::move(right);
  e.formula = std::move(lit);
  return mk(std::move(e));
}

inline ECode mk_weak(ECode inner, Sequent target) {
  Expr e;
  e.kind = OpKind::Weak;
  e.a = std::move(inner);
  e.extra = std::move(target);
  return mk(std::move(e));
}

inline ECode mk_fault(ECode inner, Position pos, Formula add) {
  Expr e;
  e.kind = OpKind::Fault;
  e.a = std::move(inner);
  e.fault_pos = std::move(pos);
  e.formula = std::move(add);
  return mk(std::move(e));
}

inline ECode mk_tag_fault(ECode inner, Position pos, Ordinal tag) {
  Expr e;
  e.kind = OpKind::TagFault;
  e.a = std::move(inner);
  e.fault_pos = std::move(pos);
  e.extra_tag = std::move(tag);
  return mk(std::move(e));
}

// --------------------------------------------------------------- embedding

inline Formula apply_env(const Formula& f, const std::map<std::string, std::uint64_t>& env) {
  Formula out = f;
  for (const auto& [v, n] : env) out = subst_num(out, v, numeral(n));
  return out;
}

inline Term apply_env(const Term& t, const std::map<std::string, std::uint64_t>& env) {
  Term out = t;
  for (const auto& [v, n] : env) out = term_subst(out, v, numeral(n));
  return out;
}

inline Sequent apply_env_nf(const Sequent& s,
                            const std::map<std::string, std::uint64_t>& env) {
  Sequent out;
  out.formulas.reserve(s.formulas.size());
  for (const auto& f : s.formulas) out.formulas.push_back(nf_formula(apply_env(f, env)));
  return out;
}

// Expansion tag of a finitary subtree: plain leaves 1, induction leaves
// w+4 (the unfolding chain), parents one above the maximum child.
inline Ordinal emb_tag(const FinProof& p) {
  if (p.premises.empty()) {
    if (p.rule == ProofRule::SchemaAx)
      return add(omega_pow(Ordinal::one()), Ordinal::from_nat(4));
    return Ordinal::one();
  }
  Ordinal m = Ordinal::zero();
  for (const auto& q : p.premises) {
    Ordinal t = emb_tag(q);
    if (compare(m, t) == OrdCmp::Less) m = t;
  }
  return add(m, Ordinal::one());
}

// Recognizes a normalized induction axiom: the quantified conclusion fixes
// (phi, var) and the whole formula must equal nf(build_induction(phi, var)).
inline std::optional<InductionView> recognize_induction_nf(const Formula& g) {
  if (g.kind != FormulaKind::Or || g.kids[1].kind != FormulaKind::Or) return std::nullopt;
  const Formula& conclusion = g.kids[1].kids[1];
  if (conclusion.kind != FormulaKind::AllNum) return std::nullopt;
  InductionView v{conclusion.kids[0], conclusion.bound};
  if (nf_formula(build_induction(v.phi, v.var)) != g) return std::nullopt;
  return v;
}

inline InductionView leaf_induction(const FinProof& p,
                                    const std::map<std::string, std::uint64_t>& env) {
  for (const auto& f : p.conclusion.formulas) {
    Formula g = nf_formula(apply_env(f, env));
    if (auto v = recognize_induction_nf(g)) return *v;
  }
  throw Error("omega: schema leaf carries no recognizable induction axiom");
}

inline ENode step_emb(const Expr& e, const EvalCtx& ctx) {
  const FinProof& p = *e.node;
  ENode out;
  out.cut_rank = e.declared_rank;

  if (p.rule == ProofRule::SchemaAx || e.ind_stage >= 0) {
    InductionView iv = leaf_induction(p, e.env);
    Formula ind = nf_formula(build_induction(iv.phi, iv.var));
    const Formula& neg0 = ind.kids[0];
    const Formula& rest = ind.kids[1];
    const Formula& ex = rest.kids[0];
    const Formula& allphi = rest.kids[1];
    Sequent seq = apply_env_nf(p.conclusion, e.env);
    int stage = e.ind_stage < 0 ? 0 : e.ind_stage;
    std::vector<Formula> exposed;
    if (stage >= 1) exposed.push_back(neg0);
    if (stage >= 2) exposed.push_back(rest);
    if (stage >= 3) exposed.push_back(ex);
    if (stage >= 4) exposed.push_back(allphi);
    for (const auto& f : exposed)
      if (!seq.contains(f)) seq.formulas.push_back(f);
    out.sequent = std::move(seq);
    out.tag = add(omega_pow(Ordinal::one()),
                  Ordinal::from_nat(static_cast<std::uint64_t>(4 - stage)));
    out.cut_rank = std::max<std::uint64_t>(e.declared_rank, rank(iv.phi) + 1);
    std::uint64_t rk = out.cut_rank;
    if (stage < 4) {
      out.rule = OmegaRule::OrIntro;
      out.has_principal = true;
      switch (stage) {
        case 0: out.principal = ind; out.or_side = 0; break;
        case 1: out.principal = ind; out.or_side = 1; break;
        case 2: out.principal = rest; out.or_side = 0; break;
        default: out.principal = rest; out.or_side = 1; break;
      }
      out.arity = 1;
      auto keep = e.keepalive;
      auto node = e.node;
      auto env = e.env;
      out.child = [keep, node, env, stage, rk](std::uint64_t) {
        return mk_emb(keep, node, env, stage + 1, rk);
      };
      return out;
    }
    out.rule = OmegaRule::OmegaAll;
    out.has_principal = true;
    out.principal = allphi;
    out.infinite = true;
    Formula phi = iv.phi;
    std::string var = iv.var;
    out.child = [phi, var, rk](std::uint64_t n) {
      auto ladder = std::make_shared<const FinProof>(induction_ladder(phi, var, n));
      const FinProof* root = ladder.get();
      return mk_emb(ladder, root, {}, -1, rk);
    };
    return out;
  }

  out.sequent = apply_env_nf(p.conclusion, e.env);
  out.tag = emb_tag(p);
  out.arity = p.premises.size();
  auto keep = e.keepalive;
  auto env = e.env;
  std::uint64_t rk = e.declared_rank;
  auto child_at = [keep, rk](const FinProof* prem,
                             std::map<std::string, std::uint64_t> env2) {
    return mk_emb(keep, prem, std::move(env2), -1, rk);
  };

  switch (p.rule) {
    case ProofRule::LogAx: case ProofRule::TrueLit: case ProofRule::EqAx:
    case ProofRule::TheoryAx:
      out.rule = OmegaRule::Ax;
      return out;
    case ProofRule::OrIntro: {
      out.rule = OmegaRule::OrIntro;
      const Sequent& prem = p.premises[0].conclusion;
      for (const auto& f : p.conclusion.formulas) {
        if (f.kind != FormulaKind::Or) continue;
        for (int s = 0; s < 2; ++s) {
          if (!sequent_included(prem, sequent_plus(p.conclusion, f.kids[s]))) continue;
          out.principal = nf_formula(apply_env(f, env));
          out.has_principal = true;
          out.or_side = s;
          const FinProof* p0 = &p.premises[0];
          out.child = [child_at, p0, env](std::uint64_t) { return child_at(p0, env); };
          return out;
        }
      }
      throw Error("omega: or-intro with no fitting principal");
    }
    case ProofRule::AndIntro: {
      out.rule = OmegaRule::AndIntro;
      out.arity = 2;
      const Sequent& l = p.premises[0].conclusion;
      const Sequent& r = p.premises[1].conclusion;
      for (const auto& f : p.conclusion.formulas) {
        if (f.kind != FormulaKind::And) continue;
        if (!sequent_included(l, sequent_plus(p.conclusion, f.kids[0])) ||
            !sequent_included(r, sequent_plus(p.conclusion, f.kids[1])))
          continue;
        out.principal = nf_formula(apply_env(f, env));
        out.has_principal = true;
        const FinProof* p0 = &p.premises[0];
        const FinProof* p1 = &p.premises[1];
        out.child = [child_at, p0, p1, env](std::uint64_t k) {
          return child_at(k == 0 ? p0 : p1, env);
        };
        return out;
      }
      throw Error("omega: and-intro with no fitting principal");
    }
    case ProofRule::ExNum: {
      out.rule = OmegaRule::ExNum;
      const Sequent& prem = p.premises[0].conclusion;
      for (const auto& f : p.conclusion.formulas) {
        if (f.kind != FormulaKind::ExNum) continue;
        Formula inst = subst_num(f.kids[0], f.bound, p.witness);
        if (!sequent_included(prem, sequent_plus(p.conclusion, inst))) continue;
        out.principal = nf_formula(apply_env(f, env));
        out.has_principal = true;
        Term w = apply_env(p.witness, env);
        if (!term_closed(w))
          throw Error("omega: open existential witness survived embedding");
        out.witness = nf_term(w);
        const FinProof* p0 = &p.premises[0];
        out.child = [child_at, p0, env](std::uint64_t) { return child_at(p0, env); };
        return out;
      }
      throw Error("omega: ex-num with no fitting principal");
    }
    case ProofRule::AllNum: {
      out.rule = OmegaRule::OmegaAll;
      out.infinite = true;
      const Sequent& prem = p.premises[0].conclusion;
      for (const auto& f : p.conclusion.formulas) {
        if (f.kind != FormulaKind::AllNum) continue;
        Formula inst = subst_num(f.kids[0], f.bound, t_var(p.eigen));
        if (!sequent_included(prem, sequent_plus(p.conclusion, inst))) continue;
        out.principal = nf_formula(apply_env(f, env));
        out.has_principal = true;
        const FinProof* p0 = &p.premises[0];
        std::string eig = p.eigen;
        out.child = [child_at, p0, env, eig](std::uint64_t n) {
          auto env2 = env;
          env2[eig] = n;
          return child_at(p0, env2);
        };
        return out;
      }
      throw Error("omega: all-num with no fitting principal");
    }
    case ProofRule::ExSet: case ProofRule::AllSet: {
      bool ex = p.rule == ProofRule::ExSet;
      out.rule = ex ? OmegaRule::ExSet : OmegaRule::AllSet;
      FormulaKind want = ex ? FormulaKind::ExSet : FormulaKind::AllSet;
      const Sequent& prem = p.premises[0].conclusion;
      for (const auto& f : p.conclusion.formulas) {
        if (f.kind != want) continue;
        Formula inst = subst_set(f.kids[0], f.set_var, p.eigen);
        if (!sequent_included(prem, sequent_plus(p.conclusion, inst))) continue;
        out.principal = nf_formula(apply_env(f, env));
        out.has_principal = true;
        out.eigen = p.eigen;
        const FinProof* p0 = &p.premises[0];
        out.child = [child_at, p0, env](std::uint64_t) { return child_at(p0, env); };
        return out;
      }
      throw Error("omega: set rule with no fitting principal");
    }
    case ProofRule::Cut: {
      out.rule = OmegaRule::Cut;
      out.arity = 2;
      out.cut_formula = nf_formula(apply_env(p.cut_formula, env));
      const FinProof* p0 = &p.premises[0];
      const FinProof* p1 = &p.premises[1];
      out.child = [child_at, p0, p1, env](std::uint64_t k) {
        return child_at(k == 0 ? p0 : p1, env);
      };
      return out;
    }
    default:
      throw Error("omega: unsupported finitary rule in embedding");
  }
}

// -------------------------------------------------------------- operators

inline Formula inv_component(const Formula& target, InvSide side, std::uint64_t n,
                             const std::string& var) {
  switch (side) {
    case InvSide::Left: return target.kids[0];
    case InvSide::Right: return target.kids[1];
    case InvSide::Num:
      return nf_formula(subst_num(target.kids[0], target.bound, numeral(n)));
    case InvSide::SetVar:
      return subst_set(target.kids[0], target.set_var, var);
  }
  throw Error("omega: bad inversion side");
}

inline std::string fresh_set_name(const std::set<std::string>& avoid) {
  for (int i = 1;; ++i) {
    std::string cand = "W" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// Rebuild an ENode whose children must be wrapped by `wrap`, with sequent
// mapped by `fix_seq`.  Freshens an all-set eigenvariable when the new
// sequent would capture it.
inline ENode push_through(const ENode& d, Sequent new_seq, const Ordinal& new_tag,
                          std::uint64_t new_rank,
                          const std::function<ECode(ECode)>& wrap) {
  ENode out = d;
  out.sequent = std::move(new_seq);
  out.tag = new_tag;
  out.cut_rank = new_rank;
  if (d.rule == OmegaRule::AllSet) {
    std::set<std::string> fv = sequent_free_set_vars(out.sequent);
    if (fv.count(d.eigen)) {
      fv.insert(d.eigen);
      if (d.has_principal) free_set_vars(d.principal, fv);
      std::string fresh = fresh_set_name(fv);
      std::string old = d.eigen;
      out.eigen = fresh;
      auto inner_child = d.child;
      out.child = [inner_child, wrap, old, fresh](std::uint64_t k) {
        return wrap(mk_rename(inner_child(k), old, fresh));
      };
      return out;
    }
  }
  auto inner_child = d.child;
  if (inner_child)
    out.child = [inner_child, wrap](std::uint64_t k) { return wrap(inner_child(k)); };
  return out;
}

inline ENode step_inv(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  const Formula& target = e.formula;
  Formula comp = inv_component(target, e.side, e.side_num, e.to);
  Sequent new_seq = sequent_union(sequent_minus(d.sequent, target), Sequent{comp});

  bool principal_here = d.has_principal && d.principal == target;
  if (principal_here) {
    switch (target.kind) {
      case FormulaKind::And: {
        std::uint64_t k = e.side == InvSide::Left ? 0 : 1;
        return step(mk_inv(d.child(k), target, e.side, e.side_num, e.to), ctx);
      }
      case FormulaKind::AllNum:
        return step(mk_inv(d.child(e.side_num), target, e.side, e.side_num, e.to), ctx);
      case FormulaKind::AllSet: {
        ECode renamed = mk_rename(d.child(0), d.eigen, e.to);
        return step(mk_inv(renamed, target, e.side, e.side_num, e.to), ctx);
      }
      default:
        throw Error("omega: inversion target is not conjunctive");
    }
  }
  Formula f = target;
  InvSide s = e.side;
  std::uint64_t n = e.side_num;
  std::string var = e.to;
  return push_through(d, std::move(new_seq), d.tag, d.cut_rank,
                      [f, s, n, var](ECode c) { return mk_inv(c, f, s, n, var); });
}

inline ENode step_red(const Expr& e, const EvalCtx& ctx) {
  ENode d1 = step(e.a, ctx);
  ENode d2 = step(e.b, ctx);
  const Formula& C = e.formula;
  Formula dual = negate(C);
  Sequent gamma = sequent_minus(d2.sequent, dual);
  Sequent new_seq = sequent_union(sequent_minus(d1.sequent, C), gamma);
  Ordinal tag = nat_sum(d1.tag, d2.tag);
  std::uint64_t crank = std::max({d1.cut_rank, d2.cut_rank, rank(C)});

  bool principal_here = d1.has_principal && d1.principal == C;
  if (principal_here) {
    Formula comp;
    ECode inv;
    switch (C.kind) {
      case FormulaKind::Or: {
        comp = C.kids[d1.or_side];
        inv = mk_inv(e.b, dual, d1.or_side == 0 ? InvSide::Left : InvSide::Right, 0, "");
        break;
      }
      case FormulaKind::ExNum: {
        auto val = numeral_value(d1.witness);
        if (!val) throw Error("omega: existential witness is not a numeral");
        comp = nf_formula(subst_num(C.kids[0], C.bound, numeral(*val)));
        inv = mk_inv(e.b, dual, InvSide::Num, *val, "");
        break;
      }
      case FormulaKind::ExSet: {
        comp = subst_set(C.kids[0], C.set_var, d1.eigen);
        inv = mk_inv(e.b, dual, InvSide::SetVar, 0, d1.eigen);
        break;
      }
      default:
        throw Error("omega: reduction cut formula is not disjunctive");
    }
    ENode out;
    out.rule = OmegaRule::Cut;
    out.sequent = std::move(new_seq);
    out.tag = tag;
    out.cut_rank = crank;
    out.cut_formula = comp;
    out.arity = 2;
    ECode rest = mk_red(d1.child(0), e.b, C);
    out.child = [rest, inv](std::uint64_t k) { return k == 0 ? rest : inv; };
    return out;
  }
  ECode c2 = e.b;
  Formula cf = C;
  return push_through(d1, std::move(new_seq), tag, crank,
                      [c2, cf](ECode c) { return mk_red(c, c2, cf); });
}

inline bool is_disjunctive(const Formula& f) {
  return f.kind == FormulaKind::Or || f.kind == FormulaKind::ExNum ||
         f.kind == FormulaKind::ExSet;
}

inline ENode step_elim(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  Ordinal tag = omega_pow(d.tag);
  std::uint64_t crank = d.cut_rank > 0 ? d.cut_rank - 1 : 0;

  if (d.rule == OmegaRule::Cut && rank(d.cut_formula) + 1 == d.cut_rank) {
    // a top-rank cut: eliminate it here
    const Formula& D = d.cut_formula;
    ECode c0 = mk_elim(d.child(0));
    ECode c1 = mk_elim(d.child(1));
    ECode inner;
    if (is_literal(D)) {
      auto truth = literal_truth(D);
      if (truth.has_value()) {
        // remove the refuted side and graft the other side's context
        ENode e0 = step(c0, ctx);
        ENode e1 = step(c1, ctx);
        if (!*truth)
          inner = mk_rem(c0, D, sequent_minus(e1.sequent, negate(D)), e1.tag);
        else
          inner = mk_rem(c1, negate(D), sequent_minus(e0.sequent, D), e0.tag);
      } else {
        inner = mk_syml(c0, c1, D);
      }
    } else if (is_disjunctive(D)) {
      inner = mk_red(c0, c1, D);
    } else {
      inner = mk_red(c1, c0, negate(D));
    }
    ENode out;
    out.rule = OmegaRule::Rep;
    out.sequent = d.sequent;
    out.tag = tag;
    out.cut_rank = crank;
    out.arity = 1;
    Sequent target = d.sequent;
    out.child = [inner, target](std::uint64_t) { return mk_weak(inner, target); };
    return out;
  }
  return push_through(d, d.sequent, tag, crank,
                      [](ECode c) { return mk_elim(c); });
}

inline ENode step_rem(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  Sequent new_seq = sequent_union(sequent_minus(d.sequent, e.formula), e.extra);
  Ordinal tag = nat_sum(d.tag, e.extra_tag);
  Formula lit = e.formula;
  Sequent extra = e.extra;
  Ordinal et = e.extra_tag;
  return push_through(d, std::move(new_seq), tag, d.cut_rank,
                      [lit, extra, et](ECode c) { return mk_rem(c, lit, extra, et); });
}

inline ENode step_syml(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  ENode d2 = step(e.b, ctx);
  const Formula& lit = e.formula;
  Formula dual = negate(lit);
  Sequent gamma = sequent_minus(d2.sequent, dual);
  Sequent new_seq = sequent_union(sequent_minus(d.sequent, lit), gamma);
  Ordinal tag = nat_sum(d.tag, d2.tag);
  if (d.rule == OmegaRule::Ax) {
    Sequent reduced = sequent_union(sequent_minus(d.sequent, lit), gamma);
    if (match_axiom(reduced, ctx.theory.get())) {
      ENode out;
      out.rule = OmegaRule::Ax;
      out.sequent = std::move(reduced);
      out.tag = tag;
      out.cut_rank = std::max(d.cut_rank, d2.cut_rank);
      return out;
    }
    // the literal was load-bearing: eliminate its dual from the right side
    return step(mk_rem(e.b, dual, sequent_minus(d.sequent, lit), d.tag), ctx);
  }
  ECode right = e.b;
  return push_through(d, std::move(new_seq), tag,
                      std::max(d.cut_rank, d2.cut_rank),
                      [right, lit](ECode c) { return mk_syml(c, right, lit); });
}

inline ENode step_weak(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  Sequent target = sequent_union(d.sequent, e.extra);
  if (d.rule == OmegaRule::AllSet && sequent_free_set_vars(target).count(d.eigen)) {
    std::set<std::string> avoid = sequent_free_set_vars(target);
    avoid.insert(d.eigen);
    std::string fresh = fresh_set_name(avoid);
    auto inner_child = d.child;
    std::string old = d.eigen;
    d.eigen = fresh;
    d.child = [inner_child, old, fresh](std::uint64_t k) {
      return mk_rename(inner_child(k), old, fresh);
    };
  }
  d.sequent = std::move(target);
  return d;
}

inline Formula rename_formula(const Formula& f, const std::string& from,
                              const std::string& to) {
  return subst_set(f, from, to);
}

inline ENode step_rename(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  std::string from = e.from, to = e.to;
  ENode out = d;
  Sequent seq;
  for (const auto& f : d.sequent.formulas)
    seq.formulas.push_back(rename_formula(f, from, to));
  out.sequent = std::move(seq);
  if (d.has_principal) out.principal = rename_formula(d.principal, from, to);
  if (d.rule == OmegaRule::Cut) out.cut_formula = rename_formula(d.cut_formula, from, to);

  if (d.rule == OmegaRule::AllSet) {
    if (d.eigen == from) {
      // the name is rebound below; mask the renaming there
      return out;  // children left unwrapped
    }
    if (d.eigen == to) {
      std::set<std::string> avoid = sequent_free_set_vars(out.sequent);
      avoid.insert(from);
      avoid.insert(to);
      std::string fresh = fresh_set_name(avoid);
      auto inner_child = d.child;
      std::string old = d.eigen;
      out.eigen = fresh;
      out.child = [inner_child, old, fresh, from, to](std::uint64_t k) {
        return mk_rename(mk_rename(inner_child(k), old, fresh), from, to);
      };
      return out;
    }
  }
  if (d.rule == OmegaRule::ExSet && d.eigen == from) out.eigen = to;
  auto inner_child = d.child;
  if (inner_child)
    out.child = [inner_child, from, to](std::uint64_t k) {
      return mk_rename(inner_child(k), from, to);
    };
  return out;
}

inline ENode step_fault(const Expr& e, const EvalCtx& ctx) {
  ENode d = step(e.a, ctx);
  bool tag_kind = e.kind == OpKind::TagFault;
  if (e.fault_pos.empty()) {
    if (tag_kind)
      d.tag = e.extra_tag;
    else
      d.sequent.formulas.push_back(e.formula);
    return d;
  }
  std::uint64_t idx = e.fault_pos[0];
  Position rest(e.fault_pos.begin() + 1, e.fault_pos.end());
  Formula add = e.formula;
  Ordinal tg = e.extra_tag;
  auto inner_child = d.child;
  d.child = [inner_child, idx, rest, add, tg, tag_kind](std::uint64_t k) {
    ECode c = inner_child(k);
    if (k == idx) return tag_kind ? mk_tag_fault(c, rest, tg) : mk_fault(c, rest, add);
    return c;
  };
  return d;
}

inline ENode step(const ECode& code, const EvalCtx& ctx) {
  if (!code) throw Error("omega: null code");
  switch (code->kind) {
    case OpKind::Emb: return step_emb(*code, ctx);
    case OpKind::Inv: return step_inv(*code, ctx);
    case OpKind::Red: return step_red(*code, ctx);
    case OpKind::Elim: return step_elim(*code, ctx);
    case OpKind::Rem: return step_rem(*code, ctx);
    case OpKind::SymL: return step_syml(*code, ctx);
    case OpKind::Weak: return step_weak(*code, ctx);
    case OpKind::Rename: return step_rename(*code, ctx);
    case OpKind::Fault: case OpKind::TagFault: return step_fault(*code, ctx);
  }
  throw Error("omega: bad operator");
}

}  // namespace omega_detail

// ---------------------------------------------------------------------------
// Public codes
// ---------------------------------------------------------------------------

struct CodeExpr {
  enum class Kind { Emb, Elim, Inv, Red } kind = Kind::Emb;
  std::shared_ptr<const FinProof> proof;      // Emb
  std::shared_ptr<const CodeExpr> a, b;
  Formula formula;                            // Inv target / Red cut
  omega_detail::InvSide side = omega_detail::InvSide::Left;
  std::uint64_t side_num = 0;
  std::string side_var;
};

struct OmegaCode {
  std::shared_ptr<const Theory> theory;
  std::shared_ptr<const CodeExpr> expr;
  omega_detail::ECode root;
  Sequent end_sequent;
  Ordinal tag;
  std::uint64_t cut_rank = 0;

  omega_detail::EvalCtx ctx() const {
    return omega_detail::EvalCtx{theory, nf_formula(theory->axiom)};
  }
};

namespace omega_detail {

inline void validate_embeddable(const FinProof& p) {
  if (p.rule == ProofRule::SchemaAx) {
    bool ok = false;
    for (const auto& f : p.conclusion.formulas)
      if (recognize_induction(f) || recognize_induction_nf(nf_formula(f))) ok = true;
    if (!ok)
      throw Error(
          "omega: unsupported schema axiom in embedding (only induction "
          "axioms unfold through the omega rule): " +
          print_sequent(p.conclusion));
  }
  for (const auto& q : p.premises) validate_embeddable(q);
}

inline std::uint64_t embed_cut_bound(const FinProof& p) {
  std::uint64_t m = 0;
  bool any = false;
  auto walk = [&](auto&& self, const FinProof& node) -> void {
    if (node.rule == ProofRule::Cut) {
      any = true;
      m = std::max(m, rank(node.cut_formula));
    }
    if (node.rule == ProofRule::SchemaAx) {
      for (const auto& f : node.conclusion.formulas)
        if (auto v = recognize_induction(f)) {
          any = true;
          m = std::max(m, rank(v->phi));
        } else if (auto w = recognize_induction_nf(nf_formula(f))) {
          any = true;
          m = std::max(m, rank(w->phi));
        }
    }
    for (const auto& q : node.premises) self(self, q);
  };
  walk(walk, p);
  return any ? m + 1 : 0;
}

}  // namespace omega_detail

// Embeds a checked finitary proof.  The end sequent must have no free
// number variables (the omega rule instantiates everything numerically),
// and the only schema axioms the unfolding supports are induction axioms.
inline OmegaCode omega_embed(const FinProof& p, const Theory& th) {
  CheckResult r = check_fin(p, th);
  if (!r.ok)
    throw Error("omega_embed: proof does not check: " + r.rejection->message +
                " at " + position_to_string(r.rejection->position));
  if (!sequent_free_num_vars(p.conclusion).empty())
    throw Error("omega_embed: end sequent has free number variables");
  omega_detail::validate_embeddable(p);

  OmegaCode code;
  code.theory = std::make_shared<const Theory>(th);
  auto keep = std::make_shared<const FinProof>(p);
  auto pub = std::make_shared<CodeExpr>();
  pub->kind = CodeExpr::Kind::Emb;
  pub->proof = keep;
  code.expr = pub;
  code.cut_rank = omega_detail::embed_cut_bound(p);
  code.root = omega_detail::mk_emb(keep, keep.get(), {}, -1, code.cut_rank);
  code.end_sequent = omega_detail::apply_env_nf(p.conclusion, {});
  code.tag = omega_detail::emb_tag(p);
  return code;
}

// One elimination step: cut bound r+1 -> r, tag a -> w^a.
inline OmegaCode reduce_rank(const OmegaCode& c) {
  if (c.cut_rank == 0) throw Error("reduce_rank: code is already cut-free");
  OmegaCode out = c;
  auto pub = std::make_shared<CodeExpr>();
  pub->kind = CodeExpr::Kind::Elim;
  pub->a = c.expr;
  out.expr = pub;
  out.root = omega_detail::mk_elim(c.root);
  out.tag = omega_pow(c.tag);
  out.cut_rank = c.cut_rank - 1;
  return out;
}

inline OmegaCode eliminate_all(const OmegaCode& c) {
  OmegaCode out = c;
  while (out.cut_rank > 0) out = reduce_rank(out);
  return out;
}

// Public inversion: strips one conjunctive layer of `target` from the end
// sequent.  side: left/right conjunct, a numeral, or a set variable.
inline OmegaCode omega_invert(const OmegaCode& c, const Formula& target,
                              omega_detail::InvSide side, std::uint64_t n = 0,
                              const std::string& var = "") {
  OmegaCode out = c;
  auto pub = std::make_shared<CodeExpr>();
  pub->kind = CodeExpr::Kind::Inv;
  pub->a = c.expr;
  pub->formula = target;
  pub->side = side;
  pub->side_num = n;
  pub->side_var = var;
  out.expr = pub;
  out.root = omega_detail::mk_inv(c.root, target, side, n, var);
  out.end_sequent = sequent_union(
      sequent_minus(c.end_sequent, target),
      Sequent{omega_detail::inv_component(target, side, n, var)});
  return out;
}

// Public reduction of a disjunctive cut formula between two codes over the
// same theory.
inline OmegaCode omega_reduce(const OmegaCode& c1, const OmegaCode& c2,
                              const Formula& cut) {
  if (c1.theory->name != c2.theory->name)
    throw Error("omega_reduce: codes belong to different theories");
  OmegaCode out = c1;
  auto pub = std::make_shared<CodeExpr>();
  pub->kind = CodeExpr::Kind::Red;
  pub->a = c1.expr;
  pub->b = c2.expr;
  pub->formula = cut;
  out.expr = pub;
  out.root = omega_detail::mk_red(c1.root, c2.root, cut);
  out.end_sequent = sequent_union(sequent_minus(c1.end_sequent, cut),
                                  sequent_minus(c2.end_sequent, negate(cut)));
  out.tag = nat_sum(c1.tag, c2.tag);
  out.cut_rank = std::max({c1.cut_rank, c2.cut_rank, rank(cut)});
  return out;
}

// Test hook: adds a formula to the sequent shown at one position.
inline OmegaCode omega_with_fault(const OmegaCode& c, const Position& pos,
                                  const Formula& add) {
  OmegaCode out = c;
  out.expr = nullptr;  // faulted codes are in-memory only
  out.root = omega_detail::mk_fault(c.root, pos, add);
  if (pos.empty()) out.end_sequent.formulas.push_back(add);
  return out;
}

// Test hook: overrides the tag shown at one position.
inline OmegaCode omega_with_tag_fault(const OmegaCode& c, const Position& pos,
                                      const Ordinal& tag) {
  OmegaCode out = c;
  out.expr = nullptr;
  out.root = omega_detail::mk_tag_fault(c.root, pos, tag);
  return out;
}

// ---------------------------------------------------------------------------
// Descriptor access, local checking, expansion
// ---------------------------------------------------------------------------

inline NodeDescriptor to_descriptor(const omega_detail::ENode& n) {
  NodeDescriptor d;
  d.rule = n.rule;
  d.sequent = n.sequent;
  d.tag = n.tag;
  d.cut_rank = n.cut_rank;
  d.witness = n.witness;
  d.eigen = n.eigen;
  d.cut_formula = n.cut_formula;
  d.infinite_arity = n.infinite;
  d.arity = n.arity;
  return d;
}

inline std::optional<omega_detail::ENode> eval_at(const OmegaCode& c, const Position& pos) {
  auto ctx = c.ctx();
  omega_detail::ECode cur = c.root;
  omega_detail::ENode n = omega_detail::step(cur, ctx);
  for (std::uint64_t idx : pos) {
    if (!n.infinite && idx >= n.arity) return std::nullopt;
    if (!n.child) return std::nullopt;
    cur = n.child(idx);
    n = omega_detail::step(cur, ctx);
  }
  return n;
}

inline std::optional<NodeDescriptor> descriptor_at(const OmegaCode& c, const Position& pos) {
  auto n = eval_at(c, pos);
  if (!n) return std::nullopt;
  return to_descriptor(*n);
}

struct LocalCheck {
  bool ok = true;
  std::string reason;   // machine-readable tag
  std::string message;
};

namespace omega_detail {

inline LocalCheck violation(const std::string& reason, const std::string& msg) {
  return LocalCheck{false, reason, msg};
}

// Validates a node and its probed children (omega nodes: 0..width-1).
inline LocalCheck check_node(const ENode& n, const EvalCtx& ctx, std::uint64_t width) {
  // rule-specific shape
  switch (n.rule) {
    case OmegaRule::Ax: {
      Theory nf_th = *ctx.theory;
      nf_th.axiom = ctx.nf_axiom;
      if (!match_axiom(n.sequent, &nf_th))
        return violation("axiom", "not an axiom sequent: " + print_sequent(n.sequent));
      return LocalCheck{};
    }
    case OmegaRule::AllSet:
      if (sequent_free_set_vars(n.sequent).count(n.eigen))
        return violation("eigenvariable", "eigenvariable " + n.eigen +
                                              " free in " + print_sequent(n.sequent));
      break;
    case OmegaRule::Cut:
      if (n.cut_rank == 0)
        return violation("cut-rank", "cut below a declared cut-free bound");
      if (rank(n.cut_formula) >= n.cut_rank)
        return violation("cut-rank",
                         "cut formula rank " + std::to_string(rank(n.cut_formula)) +
                             " not below bound " + std::to_string(n.cut_rank));
      break;
    default: break;
  }
  if (n.has_principal && !n.sequent.contains(n.principal))
    return violation("principal", "principal formula missing from sequent");

  std::uint64_t probe = n.infinite ? width : std::min<std::uint64_t>(n.arity, width);
  for (std::uint64_t k = 0; k < probe; ++k) {
    ENode ch = step(n.child(k), ctx);
    if (compare(ch.tag, n.tag) != OrdCmp::Less)
      return violation("tag", "child tag " + print_ordinal(ch.tag) +
                                  " not below parent tag " + print_ordinal(n.tag));
    if (ch.cut_rank > n.cut_rank)
      return violation("cut-rank", "child cut bound exceeds parent's");
    Sequent allowed = n.sequent;
    switch (n.rule) {
      case OmegaRule::Rep:
        if (!sequent_equal(ch.sequent, n.sequent))
          return violation("rep", "repetition child differs from parent sequent");
        break;
      case OmegaRule::OrIntro: {
        bool fits = false;
        for (int s = 0; s < 2; ++s)
          if (sequent_included(ch.sequent,
                               sequent_plus(n.sequent, n.principal.kids[s])))
            fits = true;
        if (!fits) return violation("premise-shape", "or-intro child does not fit");
        break;
      }
      case OmegaRule::AndIntro:
        if (!sequent_included(ch.sequent,
                              sequent_plus(n.sequent, n.principal.kids[k])))
          return violation("premise-shape", "and-intro child does not fit");
        break;
      case OmegaRule::ExNum: {
        auto v = numeral_value(n.witness);
        Formula inst =
            v ? nf_formula(subst_num(n.principal.kids[0], n.principal.bound, n.witness))
              : Formula{};
        if (!v) return violation("witness", "existential witness is not a numeral");
        if (!sequent_included(ch.sequent, sequent_plus(n.sequent, inst)))
          return violation("premise-shape", "ex-num child does not fit");
        break;
      }
      case OmegaRule::OmegaAll: {
        Formula inst = nf_formula(
            subst_num(n.principal.kids[0], n.principal.bound, numeral(k)));
        if (!sequent_included(ch.sequent, sequent_plus(n.sequent, inst)))
          return violation("premise-shape",
                           "omega child " + std::to_string(k) + " does not fit");
        break;
      }
      case OmegaRule::AllSet: case OmegaRule::ExSet: {
        Formula inst = subst_set(n.principal.kids[0], n.principal.set_var, n.eigen);
        if (!sequent_included(ch.sequent, sequent_plus(n.sequent, inst)))
          return violation("premise-shape", "set-rule child does not fit");
        break;
      }
      case OmegaRule::Cut: {
        Formula side = k == 0 ? n.cut_formula : negate(n.cut_formula);
        if (!sequent_included(ch.sequent, sequent_plus(n.sequent, side)))
          return violation("premise-shape", "cut child does not fit");
        break;
      }
      default: break;
    }
    (void)allowed;
  }
  return LocalCheck{};
}

}  // namespace omega_detail

inline LocalCheck check_local(const OmegaCode& c, const Position& pos,
                              std::uint64_t width = 2) {
  auto n = eval_at(c, pos);
  if (!n) return LocalCheck{false, "position", "position is outside the tree"};
  auto ctx = c.ctx();
  return omega_detail::check_node(*n, ctx, width);
}

// ---------------------------------------------------------------------------
// Expansion
// ---------------------------------------------------------------------------

struct ExpandNode {
  NodeDescriptor desc;
  std::vector<ExpandNode> children;
  bool truncated_depth = false;
  std::uint64_t truncated_width = 0;  // >0: omega node cut to this many children
};

struct ExpandStats {
  std::uint64_t nodes = 0;
  std::uint64_t cut_nodes = 0;
};

namespace omega_detail {

inline ExpandNode expand_walk(const ECode& code, const EvalCtx& ctx,
                              std::uint64_t depth, std::uint64_t width,
                              std::uint64_t max_nodes, ExpandStats& stats,
                              bool validate) {
  ENode n = step(code, ctx);
  if (++stats.nodes > max_nodes)
    throw LimitError("expand: node budget exceeded (" + std::to_string(max_nodes) + ")");
  if (n.rule == OmegaRule::Cut) ++stats.cut_nodes;
  if (validate) {
    LocalCheck lc = check_node(n, ctx, std::min<std::uint64_t>(width, 2));
    if (!lc.ok)
      throw Error("expand: local check failed (" + lc.reason + "): " + lc.message);
  }
  ExpandNode out;
  out.desc = to_descriptor(n);
  if (depth == 0) {
    out.truncated_depth = n.arity > 0 || n.infinite;
    return out;
  }
  std::uint64_t count = n.infinite ? width : n.arity;
  if (n.infinite) out.truncated_width = width;
  for (std::uint64_t k = 0; k < count; ++k)
    out.children.push_back(
        expand_walk(n.child(k), ctx, depth - 1, width, max_nodes, stats, validate));
  return out;
}

}  // namespace omega_detail

struct ExpandResult {
  ExpandNode root;
  ExpandStats stats;
};

inline ExpandResult expand(const OmegaCode& c, std::uint64_t depth, std::uint64_t width,
                           std::uint64_t max_nodes = 20000, bool validate = true) {
  auto ctx = c.ctx();
  ExpandResult res;
  res.root = omega_detail::expand_walk(c.root, ctx, depth, width, max_nodes, res.stats,
                                       validate);
  return res;
}

// machine-readable expansion: mirrors the proof file format
inline SExpr expand_to_sexpr(const ExpandNode& n) {
  std::vector<SExpr> items;
  items.push_back(SExpr::atom("node"));
  items.push_back(SExpr::str(omega_rule_name(n.desc.rule)));
  items.push_back(SExpr::list({SExpr::atom("tag"), SExpr::str(print_ordinal(n.desc.tag))}));
  items.push_back(SExpr::list(
      {SExpr::atom("cut-rank"), SExpr::atom(std::to_string(n.desc.cut_rank))}));
  if (n.desc.rule == OmegaRule::ExNum)
    items.push_back(
        SExpr::list({SExpr::atom("witness"), SExpr::str(print_term(n.desc.witness))}));
  if (n.desc.rule == OmegaRule::AllSet || n.desc.rule == OmegaRule::ExSet)
    items.push_back(SExpr::list({SExpr::atom("eigen"), SExpr::str(n.desc.eigen)}));
  if (n.desc.rule == OmegaRule::Cut)
    items.push_back(SExpr::list(
        {SExpr::atom("cut"), SExpr::str(print_formula(n.desc.cut_formula))}));
  std::vector<SExpr> seq;
  seq.push_back(SExpr::atom("seq"));
  for (const auto& f : n.desc.sequent.formulas) seq.push_back(SExpr::str(print_formula(f)));
  items.push_back(SExpr::list(std::move(seq)));
  if (n.truncated_width)
    items.push_back(SExpr::list({SExpr::atom("omega-truncated"),
                                 SExpr::atom(std::to_string(n.truncated_width))}));
  if (n.truncated_depth)
    items.push_back(SExpr::list({SExpr::atom("depth-truncated")}));
  for (const auto& ch : n.children) items.push_back(expand_to_sexpr(ch));
  return SExpr::list(std::move(items));
}

inline void expand_to_tree_text(const ExpandNode& n, std::string& out, int indent) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += omega_rule_name(n.desc.rule);
  out += " [tag " + print_ordinal(n.desc.tag) + ", rank " +
         std::to_string(n.desc.cut_rank) + "] ";
  out += print_sequent(n.desc.sequent);
  if (n.truncated_width) out += " (omega-truncated " + std::to_string(n.truncated_width) + ")";
  if (n.truncated_depth) out += " ...";
  out += '\n';
  for (const auto& ch : n.children) expand_to_tree_text(ch, out, indent + 1);
}

// ---------------------------------------------------------------------------
// Code files
// ---------------------------------------------------------------------------

namespace omega_detail {

inline SExpr expr_to_sexpr(const CodeExpr& e) {
  switch (e.kind) {
    case CodeExpr::Kind::Emb:
      return SExpr::list({SExpr::atom("emb"), proof_to_sexpr(*e.proof)});
    case CodeExpr::Kind::Elim:
      return SExpr::list({SExpr::atom("elim"), expr_to_sexpr(*e.a)});
    case CodeExpr::Kind::Inv: {
      SExpr side = e.side == InvSide::Left    ? SExpr::atom("left")
                   : e.side == InvSide::Right ? SExpr::atom("right")
                   : e.side == InvSide::Num
                       ? SExpr::list({SExpr::atom("num"),
                                      SExpr::atom(std::to_string(e.side_num))})
                       : SExpr::list({SExpr::atom("setvar"), SExpr::str(e.side_var)});
      return SExpr::list({SExpr::atom("inv"), expr_to_sexpr(*e.a),
                          SExpr::list({SExpr::atom("formula"),
                                       SExpr::str(print_formula(e.formula))}),
                          SExpr::list({SExpr::atom("side"), side})});
    }
    case CodeExpr::Kind::Red:
      return SExpr::list({SExpr::atom("red"), expr_to_sexpr(*e.a), expr_to_sexpr(*e.b),
                          SExpr::list({SExpr::atom("cut"),
                                       SExpr::str(print_formula(e.formula))})});
  }
  throw Error("omega: bad public expression");
}

inline OmegaCode build_from_expr(const SExpr& e, const Theory& th);

inline OmegaCode expr_from_sexpr(const SExpr& e, const Theory& th) {
  if (e.headed("emb")) {
    if (e.items.size() != 2) throw Error("omega code file: malformed (emb ...)");
    FinProof p = proof_from_sexpr(e.items[1]);
    return omega_embed(p, th);
  }
  if (e.headed("elim")) {
    if (e.items.size() != 2) throw Error("omega code file: malformed (elim ...)");
    return reduce_rank(expr_from_sexpr(e.items[1], th));
  }
  if (e.headed("inv")) {
    if (e.items.size() != 4) throw Error("omega code file: malformed (inv ...)");
    OmegaCode inner = expr_from_sexpr(e.items[1], th);
    const SExpr* ff = e.field("formula");
    const SExpr* ss = e.field("side");
    if (!ff || ff->items.size() != 2 || !ss || ss->items.size() != 2)
      throw Error("omega code file: malformed inversion");
    Formula target = parse_formula(ff->items[1].text);
    const SExpr& sv = ss->items[1];
    if (sv.is_atom("left")) return omega_invert(inner, target, InvSide::Left);
    if (sv.is_atom("right")) return omega_invert(inner, target, InvSide::Right);
    if (sv.headed("num"))
      return omega_invert(inner, target, InvSide::Num,
                          std::stoull(sv.items[1].text));
    if (sv.headed("setvar"))
      return omega_invert(inner, target, InvSide::SetVar, 0, sv.items[1].text);
    throw Error("omega code file: unknown inversion side");
  }
  if (e.headed("red")) {
    if (e.items.size() != 4) throw Error("omega code file: malformed (red ...)");
    OmegaCode c1 = expr_from_sexpr(e.items[1], th);
    OmegaCode c2 = expr_from_sexpr(e.items[2], th);
    const SExpr* cc = e.field("cut");
    if (!cc || cc->items.size() != 2) throw Error("omega code file: missing cut");
    return omega_reduce(c1, c2, parse_formula(cc->items[1].text));
  }
  throw Error("omega code file: unknown operator");
}

}  // namespace omega_detail

inline std::string omega_code_to_text(const OmegaCode& c) {
  if (!c.expr) throw Error("omega: this code has no serializable expression");
  SExpr e = SExpr::list(
      {SExpr::atom("omega-code"),
       SExpr::list({SExpr::atom("theory"), SExpr::str(theory_to_text(*c.theory))}),
       SExpr::list({SExpr::atom("expr"), omega_detail::expr_to_sexpr(*c.expr)})});
  return sexpr_to_string(e);
}

inline OmegaCode omega_code_from_text(const std::string& text) {
  SExpr e = sexpr_parse(text);
  if (!e.headed("omega-code")) throw Error("omega code file: expected (omega-code ...)");
  const SExpr* th_field = e.field("theory");
  const SExpr* ex_field = e.field("expr");
  if (!th_field || th_field->items.size() != 2 || !ex_field || ex_field->items.size() != 2)
    throw Error("omega code file: missing theory or expr");
  Theory th = parse_theory_text(th_field->items[1].text);
  return omega_detail::expr_from_sexpr(ex_field->items[1], th);
}

}  // namespace eps0

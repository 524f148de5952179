#pragma once

// Finitary two-sorted Tait-style sequent calculus: sequents, theories as
// axiom packages, proof trees, and a total checker.
//
// Rules carry their full conclusion at every node.  Weakening is built into
// every rule: a premise is accepted if its conclusion is a sub-multiset of
// what the rule allows (conclusion minus nothing, plus the active side
// formulas), so subproofs never need their context repeated.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eps0/classify.hpp"
#include "eps0/io.hpp"
#include "eps0/ordinal.hpp"
#include "eps0/parser.hpp"
#include "eps0/schema.hpp"

namespace eps0 {

// ---------------------------------------------------------------------------
// Sequents (finite formula lists read disjunctively, compared as multisets)
// ---------------------------------------------------------------------------

struct Sequent {
  std::vector<Formula> formulas;

  Sequent() = default;
  Sequent(std::initializer_list<Formula> fs) : formulas(fs) {}
  explicit Sequent(std::vector<Formula> fs) : formulas(std::move(fs)) {}

  bool contains(const Formula& f) const {
    for (const auto& g : formulas)
      if (g == f) return true;
    return false;
  }
};

inline std::map<std::string, int> sequent_counts(const Sequent& s) {
  std::map<std::string, int> m;
  for (const auto& f : s.formulas) ++m[formula_key(f)];
  return m;
}

inline bool sequent_equal(const Sequent& a, const Sequent& b) {
  return sequent_counts(a) == sequent_counts(b);
}

// set-inclusion on the underlying formula sets (contraction is implicit)
inline bool sequent_included(const Sequent& sub, const Sequent& super) {
  auto sup = sequent_counts(super);
  for (const auto& f : sub.formulas)
    if (!sup.count(formula_key(f))) return false;
  return true;
}

inline Sequent sequent_plus(const Sequent& s, const Formula& f) {
  Sequent r = s;
  r.formulas.push_back(f);
  return r;
}

inline Sequent sequent_minus(const Sequent& s, const Formula& f) {
  Sequent r;
  for (const auto& g : s.formulas)
    if (g != f) r.formulas.push_back(g);
  return r;
}

inline Sequent sequent_union(const Sequent& a, const Sequent& b) {
  Sequent r = a;
  std::map<std::string, bool> have;
  for (const auto& f : a.formulas) have[formula_key(f)] = true;
  for (const auto& f : b.formulas)
    if (!have[formula_key(f)]) {
      have[formula_key(f)] = true;
      r.formulas.push_back(f);
    }
  return r;
}

inline std::set<std::string> sequent_free_num_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& f : s.formulas) free_num_vars(f, out);
  return out;
}

inline std::set<std::string> sequent_free_set_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& f : s.formulas) free_set_vars(f, out);
  return out;
}

inline std::string print_sequent(const Sequent& s) {
  std::vector<std::string> parts;
  parts.reserve(s.formulas.size());
  for (const auto& f : s.formulas) parts.push_back(print_formula(f));
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  out += "}";
  return out;
}

// ---------------------------------------------------------------------------
// Theories
// ---------------------------------------------------------------------------

enum class SchemaKind {
  FullInduction,
  Induction,            // induction for a Pi-1-n / Sigma-1-n class
  LightfaceInduction,
  TransfiniteInduction,         // TI along the epsilon_0 coding, class-bound
  LightfaceTransfiniteInduction,
  UniformReflection,    // RFN(class, over a named theory)
  LocalReflection       // Rfn(class, over a named theory)
};

struct SchemaDescriptor {
  SchemaKind kind = SchemaKind::FullInduction;
  ClassTag cls = ClassTag::Pi1n;  // Pi1n or Sigma1n
  std::uint64_t level = 0;
  std::string over;               // reflection kinds: base theory name

  std::string token() const;
};

struct Theory {
  std::string name;
  Formula axiom;                   // one closed sentence
  std::uint64_t declared_k = 0;    // axiom declared Pi-1-(k+2)
  std::vector<SchemaDescriptor> schemas;

  bool has_schema(SchemaKind k) const {
    for (const auto& s : schemas)
      if (s.kind == k) return true;
    return false;
  }
};

inline std::string SchemaDescriptor::token() const {
  std::string cls_part =
      (cls == ClassTag::Sigma1n ? "sigma1-" : "pi1-") + std::to_string(level);
  switch (kind) {
    case SchemaKind::FullInduction: return "full-induction";
    case SchemaKind::Induction: return "induction-" + cls_part;
    case SchemaKind::LightfaceInduction: return "lightface-induction-" + cls_part;
    case SchemaKind::TransfiniteInduction: return "ti-eps0-" + cls_part;
    case SchemaKind::LightfaceTransfiniteInduction: return "lightface-ti-eps0-" + cls_part;
    case SchemaKind::UniformReflection: return "rfn-" + cls_part + "-over-" + over;
    case SchemaKind::LocalReflection: return "local-rfn-" + cls_part + "-over-" + over;
  }
  return "?";
}

namespace detail {

inline bool parse_class_suffix(const std::string& s, ClassTag& cls, std::uint64_t& level,
                               std::string& rest) {
  // expects "pi1-N..." or "sigma1-N..."; rest receives whatever follows N
  std::string t = s;
  if (t.rfind("pi1-", 0) == 0) { cls = ClassTag::Pi1n; t = t.substr(4); }
  else if (t.rfind("sigma1-", 0) == 0) { cls = ClassTag::Sigma1n; t = t.substr(7); }
  else return false;
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0) return false;
  level = std::stoull(t.substr(0, i));
  rest = t.substr(i);
  return true;
}

}  // namespace detail

inline SchemaDescriptor parse_schema_token(const std::string& tok) {
  SchemaDescriptor d;
  auto tail_over = [&](const std::string& rest) {
    if (rest.rfind("-over-", 0) != 0 || rest.size() <= 6)
      throw Error("schema token '" + tok + "': expected -over-<theory>");
    d.over = rest.substr(6);
  };
  std::string rest;
  if (tok == "full-induction") {
    d.kind = SchemaKind::FullInduction;
  } else if (tok.rfind("lightface-induction-", 0) == 0) {
    d.kind = SchemaKind::LightfaceInduction;
    if (!detail::parse_class_suffix(tok.substr(20), d.cls, d.level, rest) || !rest.empty())
      throw Error("bad schema token: " + tok);
  } else if (tok.rfind("induction-", 0) == 0) {
    d.kind = SchemaKind::Induction;
    if (!detail::parse_class_suffix(tok.substr(10), d.cls, d.level, rest) || !rest.empty())
      throw Error("bad schema token: " + tok);
  } else if (tok.rfind("lightface-ti-eps0-", 0) == 0) {
    d.kind = SchemaKind::LightfaceTransfiniteInduction;
    if (!detail::parse_class_suffix(tok.substr(18), d.cls, d.level, rest) || !rest.empty())
      throw Error("bad schema token: " + tok);
  } else if (tok.rfind("ti-eps0-", 0) == 0) {
    d.kind = SchemaKind::TransfiniteInduction;
    if (!detail::parse_class_suffix(tok.substr(8), d.cls, d.level, rest) || !rest.empty())
      throw Error("bad schema token: " + tok);
  } else if (tok.rfind("local-rfn-", 0) == 0) {
    d.kind = SchemaKind::LocalReflection;
    if (!detail::parse_class_suffix(tok.substr(10), d.cls, d.level, rest))
      throw Error("bad schema token: " + tok);
    tail_over(rest);
  } else if (tok.rfind("rfn-", 0) == 0) {
    d.kind = SchemaKind::UniformReflection;
    if (!detail::parse_class_suffix(tok.substr(4), d.cls, d.level, rest))
      throw Error("bad schema token: " + tok);
    tail_over(rest);
  } else {
    throw Error("unknown schema token: " + tok);
  }
  return d;
}

struct TheorySpec {
  std::string name;
  std::string axiom_text;
  std::uint64_t declared_k = 0;
  std::vector<std::string> schema_tokens;
};

// Assembles and validates a theory.  The axiom must be closed and fall
// within the declared Pi-1-(k+2) class.
inline Theory make_theory(const TheorySpec& spec) {
  Theory th;
  th.name = spec.name.empty() ? "T" : spec.name;
  th.axiom = parse_formula(spec.axiom_text);
  th.declared_k = spec.declared_k;
  if (!is_closed(th.axiom))
    throw Error("make_theory: axiom sentence is not closed: " + spec.axiom_text);
  if (!in_pi1(th.axiom, spec.declared_k + 2)) {
    FormulaClass c = classify(th.axiom);
    throw Error("make_theory: axiom declared pi1-" + std::to_string(spec.declared_k + 2) +
                " but classifies as " + class_name(c));
  }
  for (const auto& tok : spec.schema_tokens) th.schemas.push_back(parse_schema_token(tok));
  return th;
}

// Theory spec files: `key = value` lines, values for axiom in quotes,
// schemas a comma-separated token list, `#` comments.
inline Theory parse_theory_text(const std::string& text) {
  TheorySpec spec;
  std::size_t pos = 0;
  auto trim = [](std::string s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("theory file: expected key = value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    if (key == "name") spec.name = val;
    else if (key == "axiom") spec.axiom_text = val;
    else if (key == "class") {
      ClassTag cls;
      std::uint64_t lvl;
      std::string rest;
      if (!detail::parse_class_suffix(val, cls, lvl, rest) || cls != ClassTag::Pi1n ||
          !rest.empty() || lvl < 2)
        throw Error("theory file: class must be pi1-<k+2>, got " + val);
      spec.declared_k = lvl - 2;
    } else if (key == "schemas") {
      std::size_t p = 0;
      while (p < val.size()) {
        std::size_t c = val.find(',', p);
        std::string tok = trim(val.substr(p, c == std::string::npos ? c : c - p));
        if (!tok.empty()) spec.schema_tokens.push_back(tok);
        p = c == std::string::npos ? val.size() : c + 1;
      }
    } else {
      throw Error("theory file: unknown key " + key);
    }
  }
  if (spec.axiom_text.empty()) throw Error("theory file: missing axiom");
  return make_theory(spec);
}

inline std::string theory_to_text(const Theory& th) {
  std::string out;
  out += "name = " + th.name + "\n";
  out += "class = pi1-" + std::to_string(th.declared_k + 2) + "\n";
  out += "axiom = \"" + print_formula(th.axiom) + "\"\n";
  if (!th.schemas.empty()) {
    out += "schemas = ";
    for (std::size_t i = 0; i < th.schemas.size(); ++i) {
      if (i) out += ", ";
      out += th.schemas[i].token();
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema-instance recognition against a theory's declared descriptors
// ---------------------------------------------------------------------------

inline bool formula_in_class(const Formula& f, ClassTag cls, std::uint64_t level) {
  return cls == ClassTag::Sigma1n ? in_sigma1(f, level) : in_pi1(f, level);
}

// Returns the token of the first descriptor justifying f, if any.
inline std::optional<std::string> match_schema_instance(const Theory& th, const Formula& f) {
  for (const auto& d : th.schemas) {
    switch (d.kind) {
      case SchemaKind::FullInduction:
        if (recognize_induction(f)) return d.token();
        break;
      case SchemaKind::Induction:
      case SchemaKind::LightfaceInduction:
        if (auto v = recognize_induction(f)) {
          if (!formula_in_class(v->phi, d.cls, d.level)) break;
          if (d.kind == SchemaKind::LightfaceInduction && !free_set_vars(v->phi).empty())
            break;
          return d.token();
        }
        break;
      case SchemaKind::TransfiniteInduction:
      case SchemaKind::LightfaceTransfiniteInduction:
        if (auto v = recognize_ti(f)) {
          if (!formula_in_class(v->phi, d.cls, d.level)) break;
          if (d.kind == SchemaKind::LightfaceTransfiniteInduction &&
              !free_set_vars(v->phi).empty())
            break;
          return d.token();
        }
        break;
      case SchemaKind::UniformReflection:
        if (auto v = recognize_rfn(f)) {
          if (v->theory != d.over) break;
          if (!formula_in_class(v->phi, d.cls, d.level)) break;
          return d.token();
        }
        break;
      case SchemaKind::LocalReflection:
        if (auto v = recognize_rfn_local(f)) {
          if (v->theory != d.over) break;
          if (!formula_in_class(v->phi, d.cls, d.level)) break;
          return d.token();
        }
        break;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Axiom sequents
// ---------------------------------------------------------------------------

// Closed number-sort literals decidable under standard evaluation.
inline std::optional<bool> literal_truth(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Eq: case FormulaKind::Neq:
    case FormulaKind::Less: case FormulaKind::NotLess:
    case FormulaKind::CodeLess: case FormulaKind::NotCodeLess: {
      if (!term_closed(f.lhs) || !term_closed(f.rhs)) return std::nullopt;
      BigNat a = eval_term(f.lhs, {}), b = eval_term(f.rhs, {});
      switch (f.kind) {
        case FormulaKind::Eq: return a == b;
        case FormulaKind::Neq: return a != b;
        case FormulaKind::Less: return a < b;
        case FormulaKind::NotLess: return !(a < b);
        case FormulaKind::CodeLess: return code_less(a, b);
        default: return !code_less(a, b);
      }
    }
    default: return std::nullopt;
  }
}

namespace detail {

// b is obtained from a by replacing some (possibly zero) occurrences of s
// with t.
inline bool term_replaced(const Term& a, const Term& b, const Term& s, const Term& t) {
  if (a == b) return true;
  if (a == s && b == t) return true;
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  if (a.kind == TermKind::Var) return a.var == b.var;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!term_replaced(a.args[i], b.args[i], s, t)) return false;
  return !a.args.empty();
}

inline bool literal_replaced(const Formula& a, const Formula& b, const Term& s,
                             const Term& t) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::In: case FormulaKind::NotIn:
      return a.set_var == b.set_var && term_replaced(a.lhs, b.lhs, s, t);
    case FormulaKind::Prov: case FormulaKind::NotProv:
      return a.theory == b.theory && term_replaced(a.lhs, b.lhs, s, t);
    default:
      return term_replaced(a.lhs, b.lhs, s, t) && term_replaced(a.rhs, b.rhs, s, t);
  }
}

}  // namespace detail

struct AxiomMatch {
  std::string kind;    // "log-ax" | "true-lit" | "eq-ax" | "theory-ax" | "schema-ax"
  std::string detail;  // the matched literal/axiom/schema token
};

inline std::optional<AxiomMatch> match_log_ax(const Sequent& s) {
  for (const auto& f : s.formulas) {
    if (!is_literal(f)) continue;
    Formula n = negate(f);
    if (s.contains(n)) return AxiomMatch{"log-ax", print_formula(f)};
  }
  return std::nullopt;
}

inline std::optional<AxiomMatch> match_true_lit(const Sequent& s) {
  for (const auto& f : s.formulas)
    if (is_literal(f) && literal_truth(f).value_or(false))
      return AxiomMatch{"true-lit", print_formula(f)};
  return std::nullopt;
}

inline std::optional<AxiomMatch> match_eq_ax(const Sequent& s) {
  for (const auto& d : s.formulas) {
    if (d.kind != FormulaKind::Neq) continue;
    const Term& l = d.lhs;
    const Term& r = d.rhs;
    for (const auto& a : s.formulas) {
      if (!is_literal(a) || a == d) continue;
      Formula an = negate(a);
      for (const auto& b : s.formulas) {
        if (!is_literal(b)) continue;
        if (detail::literal_replaced(an, b, l, r))
          return AxiomMatch{"eq-ax", print_formula(d)};
      }
    }
  }
  return std::nullopt;
}

inline std::optional<AxiomMatch> match_axiom(const Sequent& s, const Theory* th) {
  if (auto m = match_log_ax(s)) return m;
  if (auto m = match_true_lit(s)) return m;
  if (auto m = match_eq_ax(s)) return m;
  if (th && s.contains(th->axiom)) return AxiomMatch{"theory-ax", th->name};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Finite proofs
// ---------------------------------------------------------------------------

enum class ProofRule {
  LogAx, TrueLit, EqAx, TheoryAx, SchemaAx,
  OrIntro, AndIntro, ExNum, AllNum, ExSet, AllSet, Cut
};

inline const char* rule_name(ProofRule r) {
  switch (r) {
    case ProofRule::LogAx: return "log-ax";
    case ProofRule::TrueLit: return "true-lit";
    case ProofRule::EqAx: return "eq-ax";
    case ProofRule::TheoryAx: return "theory-ax";
    case ProofRule::SchemaAx: return "schema-ax";
    case ProofRule::OrIntro: return "or-intro";
    case ProofRule::AndIntro: return "and-intro";
    case ProofRule::ExNum: return "ex-num";
    case ProofRule::AllNum: return "all-num";
    case ProofRule::ExSet: return "ex-set";
    case ProofRule::AllSet: return "all-set";
    case ProofRule::Cut: return "cut";
  }
  return "?";
}

inline std::optional<ProofRule> rule_from_name(const std::string& s) {
  for (ProofRule r : {ProofRule::LogAx, ProofRule::TrueLit, ProofRule::EqAx,
                      ProofRule::TheoryAx, ProofRule::SchemaAx, ProofRule::OrIntro,
                      ProofRule::AndIntro, ProofRule::ExNum, ProofRule::AllNum,
                      ProofRule::ExSet, ProofRule::AllSet, ProofRule::Cut})
    if (s == rule_name(r)) return r;
  return std::nullopt;
}

struct FinProof {
  ProofRule rule = ProofRule::LogAx;
  Sequent conclusion;
  Term witness;          // ExNum
  std::string eigen;     // AllNum/AllSet eigenvariable, ExSet witness variable
  Formula cut_formula;   // Cut
  std::vector<FinProof> premises;
};

using ProofPosition = std::vector<std::size_t>;

inline std::string position_to_string(const ProofPosition& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

struct CheckReport {
  std::uint64_t height = 0;
  std::uint64_t node_count = 0;
  std::uint64_t max_cut_rank = 0;      // 1 + max rank of a cut formula; 0 = cut-free
  std::vector<std::uint64_t> cut_ranks;
  std::map<std::string, std::uint64_t> axiom_uses;   // rule tag -> count
  std::map<std::string, std::uint64_t> schema_uses;  // descriptor token -> count
  std::uint64_t max_schema_rank = 0;   // max rank over schema-axiom formulas
};

struct Rejection {
  ProofPosition position;
  std::string reason;   // machine-readable tag
  std::string message;
};

struct CheckResult {
  bool ok = false;
  CheckReport report;
  std::optional<Rejection> rejection;
};

namespace detail {

struct Checker {
  const Theory* theory;
  CheckReport report;
  std::optional<Rejection> rejection;

  bool fail(const ProofPosition& pos, const std::string& reason, const std::string& msg) {
    if (!rejection) rejection = Rejection{pos, reason, msg};
    return false;
  }

  // premise conclusion must be included in base + the listed extras
  bool premise_fits(const Sequent& premise, const Sequent& base,
                    std::initializer_list<const Formula*> extras) {
    Sequent allowed = base;
    for (const Formula* f : extras) allowed.formulas.push_back(*f);
    return sequent_included(premise, allowed);
  }

  std::uint64_t walk(const FinProof& p, ProofPosition& pos) {
    ++report.node_count;
    const Sequent& c = p.conclusion;
    auto arity_is = [&](std::size_t n) {
      if (p.premises.size() == n) return true;
      fail(pos, "arity", std::string(rule_name(p.rule)) + " expects " +
                             std::to_string(n) + " premises, has " +
                             std::to_string(p.premises.size()));
      return false;
    };

    switch (p.rule) {
      case ProofRule::LogAx: {
        if (!arity_is(0)) return 1;
        if (auto m = match_log_ax(c)) {
          ++report.axiom_uses[m->kind];
        } else {
          fail(pos, "axiom", "no dual literal pair in " + print_sequent(c));
        }
        return 1;
      }
      case ProofRule::TrueLit: {
        if (!arity_is(0)) return 1;
        if (auto m = match_true_lit(c)) {
          ++report.axiom_uses[m->kind];
        } else {
          fail(pos, "axiom", "no true closed literal in " + print_sequent(c));
        }
        return 1;
      }
      case ProofRule::EqAx: {
        if (!arity_is(0)) return 1;
        if (auto m = match_eq_ax(c)) {
          ++report.axiom_uses[m->kind];
        } else {
          fail(pos, "axiom", "no equality-replacement pattern in " + print_sequent(c));
        }
        return 1;
      }
      case ProofRule::TheoryAx: {
        if (!arity_is(0)) return 1;
        if (!theory) return fail(pos, "axiom", "theory axiom used without a theory"), 1;
        if (c.contains(theory->axiom)) {
          ++report.axiom_uses["theory-ax"];
        } else {
          fail(pos, "axiom", "theory sentence not present in " + print_sequent(c));
        }
        return 1;
      }
      case ProofRule::SchemaAx: {
        if (!arity_is(0)) return 1;
        if (!theory) return fail(pos, "axiom", "schema axiom used without a theory"), 1;
        for (const auto& f : c.formulas) {
          if (auto tok = match_schema_instance(*theory, f)) {
            ++report.axiom_uses["schema-ax"];
            ++report.schema_uses[*tok];
            report.max_schema_rank = std::max(report.max_schema_rank, rank(f));
            return 1;
          }
        }
        fail(pos, "axiom", "no declared schema instance in " + print_sequent(c));
        return 1;
      }
      case ProofRule::OrIntro: {
        if (!arity_is(1)) return 1;
        const Sequent& prem = p.premises[0].conclusion;
        bool found = false;
        for (const auto& f : c.formulas) {
          if (f.kind != FormulaKind::Or) continue;
          if (premise_fits(prem, c, {&f.kids[0]}) || premise_fits(prem, c, {&f.kids[1]})) {
            found = true;
            break;
          }
        }
        if (!found) {
          fail(pos, "premise-shape",
               "or-intro premise " + print_sequent(prem) + " does not fit " +
                   print_sequent(c));
          return 1;
        }
        break;
      }
      case ProofRule::AndIntro: {
        if (!arity_is(2)) return 1;
        const Sequent& l = p.premises[0].conclusion;
        const Sequent& r = p.premises[1].conclusion;
        bool found = false;
        for (const auto& f : c.formulas) {
          if (f.kind != FormulaKind::And) continue;
          if (premise_fits(l, c, {&f.kids[0]}) && premise_fits(r, c, {&f.kids[1]})) {
            found = true;
            break;
          }
        }
        if (!found) {
          fail(pos, "premise-shape", "and-intro premises do not fit " + print_sequent(c));
          return 1;
        }
        break;
      }
      case ProofRule::ExNum: {
        if (!arity_is(1)) return 1;
        const Sequent& prem = p.premises[0].conclusion;
        bool found = false;
        for (const auto& f : c.formulas) {
          if (f.kind != FormulaKind::ExNum) continue;
          Formula inst = subst_num(f.kids[0], f.bound, p.witness);
          if (premise_fits(prem, c, {&inst})) {
            found = true;
            break;
          }
        }
        if (!found) {
          fail(pos, "premise-shape",
               "ex-num premise does not fit any witness instance in " + print_sequent(c));
          return 1;
        }
        break;
      }
      case ProofRule::AllNum: {
        if (!arity_is(1)) return 1;
        if (p.eigen.empty()) return fail(pos, "eigenvariable", "all-num without eigenvariable"), 1;
        if (sequent_free_num_vars(c).count(p.eigen)) {
          fail(pos, "eigenvariable",
               "eigenvariable " + p.eigen + " occurs free in " + print_sequent(c));
          return 1;
        }
        const Sequent& prem = p.premises[0].conclusion;
        bool found = false;
        for (const auto& f : c.formulas) {
          if (f.kind != FormulaKind::AllNum) continue;
          Formula inst = subst_num(f.kids[0], f.bound, t_var(p.eigen));
          if (premise_fits(prem, c, {&inst})) {
            found = true;
            break;
          }
        }
        if (!found) {
          fail(pos, "premise-shape",
               "all-num premise does not fit the eigenvariable instance in " +
                   print_sequent(c));
          return 1;
        }
        break;
      }
      case ProofRule::ExSet: {
        if (!arity_is(1)) return 1;
        if (p.eigen.empty()) return fail(pos, "witness", "ex-set without witness variable"), 1;
        const Sequent& prem = p.premises[0].conclusion;
        bool found = false;
        for (const auto& f : c.formulas) {
          if (f.kind != FormulaKind::ExSet) continue;
          Formula inst = subst_set(f.kids[0], f.set_var, p.eigen);
          if (premise_fits(prem, c, {&inst})) {
            found = true;
            break;
          }
        }
        if (!found) {
          fail(pos, "premise-shape",
               "ex-set premise does not fit any witness instance in " + print_sequent(c));
          return 1;
        }
        break;
      }
      case ProofRule::AllSet: {
        if (!arity_is(1)) return 1;
        if (p.eigen.empty()) return fail(pos, "eigenvariable", "all-set without eigenvariable"), 1;
        if (sequent_free_set_vars(c).count(p.eigen)) {
          fail(pos, "eigenvariable",
               "eigenvariable " + p.eigen + " occurs free in " + print_sequent(c));
          return 1;
        }
        const Sequent& prem = p.premises[0].conclusion;
        bool found = false;
        for (const auto& f : c.formulas) {
          if (f.kind != FormulaKind::AllSet) continue;
          Formula inst = subst_set(f.kids[0], f.set_var, p.eigen);
          if (premise_fits(prem, c, {&inst})) {
            found = true;
            break;
          }
        }
        if (!found) {
          fail(pos, "premise-shape",
               "all-set premise does not fit the eigenvariable instance in " +
                   print_sequent(c));
          return 1;
        }
        break;
      }
      case ProofRule::Cut: {
        if (!arity_is(2)) return 1;
        Formula dual = negate(p.cut_formula);
        if (!premise_fits(p.premises[0].conclusion, c, {&p.cut_formula}) ||
            !premise_fits(p.premises[1].conclusion, c, {&dual})) {
          fail(pos, "premise-shape", "cut premises do not fit " + print_sequent(c));
          return 1;
        }
        report.cut_ranks.push_back(rank(p.cut_formula));
        report.max_cut_rank =
            std::max(report.max_cut_rank, rank(p.cut_formula) + 1);
        break;
      }
    }

    std::uint64_t h = 0;
    for (std::size_t i = 0; i < p.premises.size(); ++i) {
      if (rejection) break;
      pos.push_back(i);
      h = std::max(h, walk(p.premises[i], pos));
      pos.pop_back();
    }
    return h + 1;
  }
};

}  // namespace detail

inline CheckResult check_fin(const FinProof& p, const Theory& th) {
  detail::Checker ck{&th, {}, std::nullopt};
  ProofPosition pos;
  std::uint64_t h = ck.walk(p, pos);
  CheckResult res;
  res.report = ck.report;
  res.report.height = h;
  if (ck.rejection) {
    res.ok = false;
    res.rejection = ck.rejection;
  } else {
    res.ok = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Subformula audit: every formula anywhere in the proof must be a subformula
// of an end-sequent formula, up to substitution of terms for bound number
// variables and renaming of set variables.
// ---------------------------------------------------------------------------

namespace detail {

struct MatchEnv {
  std::map<std::string, Term> num_bind;       // pattern wildcard -> candidate term
  std::map<std::string, std::string> set_bind;
  std::map<std::string, std::string> alpha_num;  // pattern bound -> candidate bound
  std::map<std::string, std::string> alpha_set;
  std::set<std::string> num_wild, set_wild;
};

inline bool match_term_up_to(const Term& c, const Term& p, MatchEnv& env) {
  if (p.kind == TermKind::Var) {
    if (auto it = env.alpha_num.find(p.var); it != env.alpha_num.end())
      return c.kind == TermKind::Var && c.var == it->second;
    if (env.num_wild.count(p.var)) {
      auto it = env.num_bind.find(p.var);
      if (it == env.num_bind.end()) {
        env.num_bind[p.var] = c;
        return true;
      }
      return it->second == c;
    }
    return c == p;
  }
  if (c.kind != p.kind) return false;
  for (std::size_t i = 0; i < p.args.size(); ++i)
    if (!match_term_up_to(c.args[i], p.args[i], env)) return false;
  return true;
}

inline bool match_set_name(const std::string& c, const std::string& p, MatchEnv& env) {
  if (auto it = env.alpha_set.find(p); it != env.alpha_set.end()) return c == it->second;
  if (env.set_wild.count(p)) {
    auto it = env.set_bind.find(p);
    if (it == env.set_bind.end()) {
      env.set_bind[p] = c;
      return true;
    }
    return it->second == c;
  }
  return c == p;
}

inline bool match_formula_up_to(const Formula& c, const Formula& p, MatchEnv env) {
  if (c.kind != p.kind) return false;
  switch (p.kind) {
    case FormulaKind::In: case FormulaKind::NotIn:
      return match_set_name(c.set_var, p.set_var, env) &&
             match_term_up_to(c.lhs, p.lhs, env);
    case FormulaKind::Prov: case FormulaKind::NotProv:
      return c.theory == p.theory && match_term_up_to(c.lhs, p.lhs, env);
    case FormulaKind::And: case FormulaKind::Or:
      return match_formula_up_to(c.kids[0], p.kids[0], env) &&
             match_formula_up_to(c.kids[1], p.kids[1], env);
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      MatchEnv e2 = env;
      e2.alpha_num[p.bound] = c.bound;
      e2.num_wild.erase(p.bound);
      e2.num_bind.erase(p.bound);
      return match_formula_up_to(c.kids[0], p.kids[0], e2);
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      MatchEnv e2 = env;
      e2.alpha_set[p.set_var] = c.set_var;
      e2.set_wild.erase(p.set_var);
      e2.set_bind.erase(p.set_var);
      return match_formula_up_to(c.kids[0], p.kids[0], e2);
    }
    default:
      return match_term_up_to(c.lhs, p.lhs, env) && match_term_up_to(c.rhs, p.rhs, env);
  }
}

inline bool instance_subformula_of(const Formula& cand, const Formula& pattern,
                                   std::set<std::string> num_wild,
                                   std::set<std::string> set_wild) {
  MatchEnv env;
  env.num_wild = num_wild;
  env.set_wild = set_wild;
  if (match_formula_up_to(cand, pattern, env)) return true;
  switch (pattern.kind) {
    case FormulaKind::And: case FormulaKind::Or:
      return instance_subformula_of(cand, pattern.kids[0], num_wild, set_wild) ||
             instance_subformula_of(cand, pattern.kids[1], num_wild, set_wild);
    case FormulaKind::AllNum: case FormulaKind::ExNum: {
      num_wild.insert(pattern.bound);
      return instance_subformula_of(cand, pattern.kids[0], num_wild, set_wild);
    }
    case FormulaKind::AllSet: case FormulaKind::ExSet: {
      set_wild.insert(pattern.set_var);
      return instance_subformula_of(cand, pattern.kids[0], num_wild, set_wild);
    }
    default: return false;
  }
}

}  // namespace detail

inline bool is_instance_subformula(const Formula& cand, const Formula& pattern) {
  return detail::instance_subformula_of(cand, pattern, {}, {});
}

struct AuditResult {
  bool ok = true;
  ProofPosition position;  // first violation
  std::string formula;     // offending formula text
};

inline AuditResult subformula_audit(const FinProof& p) {
  const Sequent& end = p.conclusion;
  AuditResult res;
  ProofPosition pos;
  auto walk = [&](auto&& self, const FinProof& node) -> bool {
    for (const auto& f : node.conclusion.formulas) {
      bool found = false;
      for (const auto& g : end.formulas)
        if (is_instance_subformula(f, g)) {
          found = true;
          break;
        }
      if (!found) {
        res.ok = false;
        res.position = pos;
        res.formula = print_formula(f);
        return false;
      }
    }
    for (std::size_t i = 0; i < node.premises.size(); ++i) {
      pos.push_back(i);
      bool cont = self(self, node.premises[i]);
      pos.pop_back();
      if (!cont) return false;
    }
    return true;
  };
  walk(walk, p);
  return res;
}

// ---------------------------------------------------------------------------
// Proof construction helpers: small checkable derivations the synthesizers
// and the omega-embedding assemble from.
// ---------------------------------------------------------------------------

inline FinProof leaf(ProofRule r, Sequent c) {
  FinProof p;
  p.rule = r;
  p.conclusion = std::move(c);
  return p;
}

inline FinProof node1(ProofRule r, Sequent c, FinProof prem) {
  FinProof p;
  p.rule = r;
  p.conclusion = std::move(c);
  p.premises.push_back(std::move(prem));
  return p;
}

inline FinProof node2(ProofRule r, Sequent c, FinProof l, FinProof rr) {
  FinProof p;
  p.rule = r;
  p.conclusion = std::move(c);
  p.premises.push_back(std::move(l));
  p.premises.push_back(std::move(rr));
  return p;
}

inline FinProof by_cut(Sequent c, Formula cut, FinProof with_cut, FinProof with_dual) {
  FinProof p = node2(ProofRule::Cut, std::move(c), std::move(with_cut), std::move(with_dual));
  p.cut_formula = std::move(cut);
  return p;
}

inline FinProof by_ex_num(Sequent c, Term witness, FinProof prem) {
  FinProof p = node1(ProofRule::ExNum, std::move(c), std::move(prem));
  p.witness = std::move(witness);
  return p;
}

inline FinProof by_all_num(Sequent c, std::string eigen, FinProof prem) {
  FinProof p = node1(ProofRule::AllNum, std::move(c), std::move(prem));
  p.eigen = std::move(eigen);
  return p;
}

inline FinProof by_ex_set(Sequent c, std::string witness_var, FinProof prem) {
  FinProof p = node1(ProofRule::ExSet, std::move(c), std::move(prem));
  p.eigen = std::move(witness_var);
  return p;
}

inline FinProof by_all_set(Sequent c, std::string eigen, FinProof prem) {
  FinProof p = node1(ProofRule::AllSet, std::move(c), std::move(prem));
  p.eigen = std::move(eigen);
  return p;
}

// Derivation of {negate(phi), phi}, by structural recursion.
inline FinProof ident_proof(const Formula& phi) {
  Formula nphi = negate(phi);
  Sequent goal{nphi, phi};
  switch (phi.kind) {
    case FormulaKind::And: {
      const Formula& a = phi.kids[0];
      const Formula& b = phi.kids[1];
      // {!a | !b, a & b}: and-intro from {!a|!b, a} and {!a|!b, b}
      FinProof pa = node1(ProofRule::OrIntro, Sequent{nphi, a}, ident_proof(a));
      FinProof pb = node1(ProofRule::OrIntro, Sequent{nphi, b}, ident_proof(b));
      return node2(ProofRule::AndIntro, goal, std::move(pa), std::move(pb));
    }
    case FormulaKind::Or: {
      const Formula& a = phi.kids[0];
      const Formula& b = phi.kids[1];
      FinProof pa = node1(ProofRule::OrIntro, Sequent{negate(a), phi}, ident_proof(a));
      FinProof pb = node1(ProofRule::OrIntro, Sequent{negate(b), phi}, ident_proof(b));
      // {!a & !b, a | b}: and-intro over the negated pair
      return node2(ProofRule::AndIntro, goal, std::move(pa), std::move(pb));
    }
    case FormulaKind::AllNum: {
      std::string a = fresh_num_var("a", {&phi});
      Formula inst = subst_num(phi.kids[0], phi.bound, t_var(a));
      FinProof inner = ident_proof(inst);  // {!inst, inst}
      FinProof ex = by_ex_num(Sequent{nphi, inst}, t_var(a), std::move(inner));
      return by_all_num(goal, a, std::move(ex));
    }
    case FormulaKind::ExNum: {
      std::string a = fresh_num_var("a", {&phi});
      Formula inst = subst_num(phi.kids[0], phi.bound, t_var(a));
      FinProof inner = ident_proof(inst);
      FinProof ex = by_ex_num(Sequent{negate(inst), phi}, t_var(a), std::move(inner));
      return by_all_num(goal, a, std::move(ex));
    }
    case FormulaKind::AllSet: {
      std::string u = fresh_set_var("U", {&phi});
      Formula inst = subst_set(phi.kids[0], phi.set_var, u);
      FinProof inner = ident_proof(inst);
      FinProof ex = by_ex_set(Sequent{nphi, inst}, u, std::move(inner));
      return by_all_set(goal, u, std::move(ex));
    }
    case FormulaKind::ExSet: {
      std::string u = fresh_set_var("U", {&phi});
      Formula inst = subst_set(phi.kids[0], phi.set_var, u);
      FinProof inner = ident_proof(inst);
      FinProof ex = by_ex_set(Sequent{negate(inst), phi}, u, std::move(inner));
      return by_all_set(goal, u, std::move(ex));
    }
    default:
      return leaf(ProofRule::LogAx, goal);
  }
}

// ---------------------------------------------------------------------------
// Proof files: (rule "<tag>" [(witness "t")|(eigen "v")|(cut "f")]
//                (seq "formula"*) children...)
// ---------------------------------------------------------------------------

inline SExpr proof_to_sexpr(const FinProof& p) {
  std::vector<SExpr> items;
  items.push_back(SExpr::atom("rule"));
  items.push_back(SExpr::str(rule_name(p.rule)));
  if (p.rule == ProofRule::ExNum)
    items.push_back(SExpr::list({SExpr::atom("witness"), SExpr::str(print_term(p.witness))}));
  if (p.rule == ProofRule::AllNum || p.rule == ProofRule::AllSet ||
      p.rule == ProofRule::ExSet)
    items.push_back(SExpr::list({SExpr::atom("eigen"), SExpr::str(p.eigen)}));
  if (p.rule == ProofRule::Cut)
    items.push_back(SExpr::list({SExpr::atom("cut"), SExpr::str(print_formula(p.cut_formula))}));
  std::vector<SExpr> seq;
  seq.push_back(SExpr::atom("seq"));
  for (const auto& f : p.conclusion.formulas) seq.push_back(SExpr::str(print_formula(f)));
  items.push_back(SExpr::list(std::move(seq)));
  for (const auto& prem : p.premises) items.push_back(proof_to_sexpr(prem));
  return SExpr::list(std::move(items));
}

inline FinProof proof_from_sexpr(const SExpr& e) {
  if (!e.headed("rule") || e.items.size() < 2 || e.items[1].kind != SExpr::Kind::Str)
    throw Error("proof file: expected (rule \"<tag>\" ...)");
  FinProof p;
  auto r = rule_from_name(e.items[1].text);
  if (!r) throw Error("proof file: unknown rule tag " + e.items[1].text);
  p.rule = *r;
  bool seen_seq = false;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& it = e.items[i];
    if (it.headed("witness")) {
      if (it.items.size() != 2) throw Error("proof file: malformed witness");
      p.witness = parse_term(it.items[1].text);
    } else if (it.headed("eigen")) {
      if (it.items.size() != 2) throw Error("proof file: malformed eigen");
      p.eigen = it.items[1].text;
    } else if (it.headed("cut")) {
      if (it.items.size() != 2) throw Error("proof file: malformed cut");
      p.cut_formula = parse_formula(it.items[1].text);
    } else if (it.headed("seq")) {
      seen_seq = true;
      for (std::size_t j = 1; j < it.items.size(); ++j) {
        if (it.items[j].kind != SExpr::Kind::Str)
          throw Error("proof file: sequent formulas must be strings");
        p.conclusion.formulas.push_back(parse_formula(it.items[j].text));
      }
    } else if (it.headed("rule")) {
      p.premises.push_back(proof_from_sexpr(it));
    } else {
      throw Error("proof file: unexpected item in rule node");
    }
  }
  if (!seen_seq) throw Error("proof file: rule node without (seq ...)");
  return p;
}

inline std::string proof_to_text(const FinProof& p) { return sexpr_to_string(proof_to_sexpr(p)); }

inline FinProof proof_from_text(const std::string& text) {
  return proof_from_sexpr(sexpr_parse(text));
}

}  // namespace eps0

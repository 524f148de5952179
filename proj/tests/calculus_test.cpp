#include "eps0/calculus.hpp"

#include <gtest/gtest.h>

using namespace eps0;

namespace {

Formula F(const std::string& s) { return parse_formula(s); }

Theory stub_theory() {
  TheorySpec spec;
  spec.name = "RCA0-stub";
  spec.axiom_text = "A X. 0 in X | 0 notin X";
  spec.declared_k = 0;
  spec.schema_tokens = {"full-induction"};
  return make_theory(spec);
}

TEST(Sequent, MultisetSemantics) {
  Sequent a{F("0 = 0"), F("0 = 1")};
  Sequent b{F("0 = 1"), F("0 = 0")};
  EXPECT_TRUE(sequent_equal(a, b));
  EXPECT_TRUE(sequent_included(a, b));
  Sequent c{F("0 = 0")};
  EXPECT_TRUE(sequent_included(c, a));
  EXPECT_FALSE(sequent_included(a, c));
}

TEST(Theory, MakeAndValidate) {
  Theory th = stub_theory();
  EXPECT_EQ(th.name, "RCA0-stub");
  EXPECT_TRUE(th.has_schema(SchemaKind::FullInduction));

  TheorySpec bad;
  bad.name = "bad";
  bad.axiom_text = "E X. A Y. E Z. (0 in X & 0 in Y & 0 in Z)";  // sigma1-3
  bad.declared_k = 0;                                            // claims pi1-2
  try {
    make_theory(bad);
    FAIL() << "expected class mismatch";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sigma1-3"), std::string::npos);
  }

  TheorySpec open;
  open.axiom_text = "x = x";
  EXPECT_THROW(make_theory(open), Error);
}

TEST(Theory, FileRoundTrip) {
  Theory th = stub_theory();
  th.schemas.push_back(parse_schema_token("ti-eps0-pi1-2"));
  th.schemas.push_back(parse_schema_token("rfn-pi1-3-over-RCA0-stub"));
  std::string text = theory_to_text(th);
  Theory back = parse_theory_text(text);
  EXPECT_EQ(theory_to_text(back), text);
  EXPECT_EQ(back.schemas.size(), 3u);
  EXPECT_EQ(back.schemas[2].kind, SchemaKind::UniformReflection);
  EXPECT_EQ(back.schemas[2].over, "RCA0-stub");
}

TEST(Checker, TrueLitLeaf) {
  Theory th = stub_theory();
  FinProof p = leaf(ProofRule::TrueLit, Sequent{F("0 = 0")});
  CheckResult r = check_fin(p, th);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.report.height, 1u);
  EXPECT_EQ(r.report.max_cut_rank, 0u);

  FinProof bad = leaf(ProofRule::TrueLit, Sequent{F("0 = 1")});
  CheckResult rb = check_fin(bad, th);
  EXPECT_FALSE(rb.ok);
  EXPECT_EQ(rb.rejection->reason, "axiom");
}

TEST(Checker, IdentityProofsCheck) {
  Theory th = stub_theory();
  for (const char* s : {
           "0 = 0",
           "x < x+1",
           "A x. x = x | 0 in X",
           "E Y. (0 in Y & (A z. z notin Y))",
           "A x. E y. x prec y",
       }) {
    Formula phi = F(s);
    FinProof p = ident_proof(phi);
    CheckResult r = check_fin(p, th);
    EXPECT_TRUE(r.ok) << s << ": " << (r.rejection ? r.rejection->message : "");
    EXPECT_TRUE(sequent_equal(p.conclusion, Sequent{negate(phi), phi}));
  }
}

TEST(Checker, EigenvariableViolation) {
  Theory th = stub_theory();
  // A x. x = a with eigenvariable a free in the conclusion
  Formula all = F("A x. x = a");
  FinProof prem = leaf(ProofRule::TrueLit, Sequent{F("a = a")});
  FinProof p = by_all_num(Sequent{all}, "a", std::move(prem));
  CheckResult r = check_fin(p, th);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.rejection->reason, "eigenvariable");
}

TEST(Checker, EqAxAndWrongShape) {
  Theory th = stub_theory();
  // {x != y, !(x < 0), y < 0} is an equality-replacement axiom
  FinProof eq = leaf(ProofRule::EqAx, Sequent{F("x != y"), F("!(x < 0)"), F("y < 0")});
  EXPECT_TRUE(check_fin(eq, th).ok);
  FinProof noteq = leaf(ProofRule::EqAx, Sequent{F("x != y"), F("!(x < 0)"), F("y < 1")});
  EXPECT_FALSE(check_fin(noteq, th).ok);

  // or-intro premise that fits neither disjunct
  FinProof bad = node1(ProofRule::OrIntro, Sequent{F("0 = 0 | 0 = 1")},
                       leaf(ProofRule::TrueLit, Sequent{F("1 = 1")}));
  CheckResult r = check_fin(bad, th);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.rejection->reason, "premise-shape");
}

TEST(Checker, TheoryAndSchemaAxioms) {
  Theory th = stub_theory();
  FinProof ax = leaf(ProofRule::TheoryAx, Sequent{F("0 = 1"), th.axiom});
  EXPECT_TRUE(check_fin(ax, th).ok);

  Formula ind = build_induction(F("x = x"), "x");
  FinProof sax = leaf(ProofRule::SchemaAx, Sequent{ind});
  CheckResult r = check_fin(sax, th);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.report.schema_uses.at("full-induction"), 1u);

  // class-restricted induction rejects a formula outside the class
  Theory narrow = stub_theory();
  narrow.schemas = {parse_schema_token("lightface-induction-pi1-1")};
  Formula boldface = build_induction(F("x = x & 0 in X"), "x");
  FinProof sax2 = leaf(ProofRule::SchemaAx, Sequent{boldface});
  EXPECT_FALSE(check_fin(sax2, narrow).ok);
  Formula light = build_induction(F("x = x"), "x");
  EXPECT_TRUE(check_fin(leaf(ProofRule::SchemaAx, Sequent{light}), narrow).ok);
}

TEST(Checker, CutReporting) {
  Theory th = stub_theory();
  Formula lemma = F("0 = 0 & 1 = 1");  // rank 1
  FinProof left = node2(ProofRule::AndIntro, Sequent{lemma},
                        leaf(ProofRule::TrueLit, Sequent{F("0 = 0")}),
                        leaf(ProofRule::TrueLit, Sequent{F("1 = 1")}));
  FinProof right = node1(ProofRule::OrIntro, Sequent{negate(lemma), F("2 = 2")},
                         leaf(ProofRule::TrueLit, Sequent{F("0 != 0"), F("2 = 2")}));
  FinProof p = by_cut(Sequent{F("2 = 2")}, lemma, std::move(left), std::move(right));
  CheckResult r = check_fin(p, th);
  ASSERT_TRUE(r.ok) << r.rejection->message;
  EXPECT_EQ(r.report.max_cut_rank, 2u);  // strict bound: cuts of rank <= 1
  EXPECT_EQ(r.report.cut_ranks.size(), 1u);
}

TEST(Audit, SubformulaProperty) {
  Theory th = stub_theory();
  Formula phi = F("A x. x = x | 0 in X");
  FinProof p = ident_proof(phi);
  ASSERT_TRUE(check_fin(p, th).ok);
  AuditResult a = subformula_audit(p);
  EXPECT_TRUE(a.ok) << a.formula << " at " << position_to_string(a.position);

  // a cut on a formula absent from the end sequent violates the audit
  Formula lemma = F("5 = 5");
  FinProof cutp = by_cut(Sequent{F("0 = 0")}, lemma,
                         leaf(ProofRule::TrueLit, Sequent{F("0 = 0"), lemma}),
                         leaf(ProofRule::TrueLit, Sequent{F("0 = 0"), negate(lemma)}));
  ASSERT_TRUE(check_fin(cutp, th).ok);
  AuditResult b = subformula_audit(cutp);
  EXPECT_FALSE(b.ok);
}

TEST(Audit, InstanceMatching) {
  // instances under number quantifiers and set renamings count as subformulas
  Formula pat = F("A x. E Y. x in Y");
  EXPECT_TRUE(is_instance_subformula(F("E Y. 3 in Y"), pat));
  EXPECT_TRUE(is_instance_subformula(F("E Z. x+1 in Z"), pat));
  EXPECT_TRUE(is_instance_subformula(F("5 in W"), pat));
  EXPECT_FALSE(is_instance_subformula(F("5 notin W"), pat));
  EXPECT_FALSE(is_instance_subformula(F("A x. x = x"), pat));
  // consistency: the same wildcard must map to one term
  Formula pat2 = F("A x. x = x+1");
  EXPECT_TRUE(is_instance_subformula(F("3 = 3+1"), pat2));
  EXPECT_FALSE(is_instance_subformula(F("3 = 4+1"), pat2));
}

TEST(ProofFiles, RoundTrip) {
  Theory th = stub_theory();
  Formula phi = F("A x. x = x | 0 in X");
  FinProof p = ident_proof(phi);
  std::string text = proof_to_text(p);
  FinProof back = proof_from_text(text);
  EXPECT_EQ(proof_to_text(back), text);
  EXPECT_TRUE(check_fin(back, th).ok);
}

}  // namespace

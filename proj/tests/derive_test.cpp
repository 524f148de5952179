#include "eps0/derive.hpp"

#include <gtest/gtest.h>

using namespace eps0;

namespace {

Formula F(const std::string& s) { return parse_formula(s); }

Theory stub_theory() {
  TheorySpec spec;
  spec.name = "RCA0-stub";
  spec.axiom_text = "A X. 0 in X | 0 notin X";
  spec.declared_k = 0;
  spec.schema_tokens = {"full-induction", "rfn-pi1-2-over-RCA0-stub"};
  return make_theory(spec);
}

TEST(Cong, ChecksForVariousShapes) {
  Theory th = stub_theory();
  for (const char* s : {"x = 0", "x < x+1 | x in X", "A y. y*x = x*y",
                        "E Y. (x in Y & (A z. !(z < x)))"}) {
    Formula phi = F(s);
    FinProof p = cong_proof(phi, "x", t_sum(t_zero(), t_one()), numeral(1));
    CheckResult r = check_fin(p, th);
    EXPECT_TRUE(r.ok) << s << ": " << (r.rejection ? r.rejection->message : "");
  }
}

TEST(InductionInstance, BaseCases) {
  Theory th = stub_theory();
  Formula phi = F("x = x");
  FinProof p0 = synth_induction_instance(phi, "x", 0);
  CheckResult r0 = check_fin(p0, th);
  EXPECT_TRUE(r0.ok) << (r0.rejection ? r0.rejection->message : "");
  EXPECT_EQ(p0.conclusion.formulas.size(), 1u);
  EXPECT_EQ(p0.conclusion.formulas[0], build_induction_upto(phi, "x", numeral(0)));

  FinProof p3 = synth_induction_instance(phi, "x", 3);
  CheckResult r3 = check_fin(p3, th);
  EXPECT_TRUE(r3.ok) << (r3.rejection ? r3.rejection->message : "");
  // no theory or schema axioms used
  EXPECT_EQ(r3.report.axiom_uses.count("theory-ax"), 0u);
  EXPECT_EQ(r3.report.axiom_uses.count("schema-ax"), 0u);
}

TEST(InductionInstance, SizeAffineInN) {
  Theory th = stub_theory();
  for (const char* s : {"x = x", "x < x+1", "x = x | 0 in X"}) {
    Formula phi = F(s);
    std::vector<std::uint64_t> sizes;
    for (std::uint64_t n = 1; n <= 8; ++n) {
      FinProof p = synth_induction_instance(phi, "x", n);
      ASSERT_TRUE(check_fin(p, th).ok) << s << " at n=" << n;
      sizes.push_back(proof_size(p));
    }
    std::uint64_t delta = sizes[1] - sizes[0];
    for (std::size_t i = 2; i < sizes.size(); ++i)
      EXPECT_EQ(sizes[i] - sizes[i - 1], delta) << s << " step " << i;
  }
}

TEST(InductionInstance, HeightGrowsLinearly) {
  Theory th = stub_theory();
  Formula phi = F("x = x");
  std::vector<std::uint64_t> heights;
  for (std::uint64_t n : {1, 2, 3}) {
    FinProof p = synth_induction_instance(phi, "x", n);
    CheckResult r = check_fin(p, th);
    ASSERT_TRUE(r.ok);
    heights.push_back(r.report.height);
  }
  EXPECT_EQ(heights[1] - heights[0], heights[2] - heights[1]);
}

TEST(Reflection, ProducesCheckedConditionalProof) {
  Theory th = stub_theory();
  Formula phi = F("x = x");
  ReflectionSynthesis rs = synth_reflection_to_induction(phi, "x", th);
  CheckResult r = check_fin(rs.proof, th);
  ASSERT_TRUE(r.ok) << (r.rejection ? r.rejection->message : "");
  EXPECT_EQ(r.report.axiom_uses.at("schema-ax"), 1u);
  EXPECT_EQ(r.report.schema_uses.at("rfn-pi1-2-over-RCA0-stub"), 1u);
  // end sequent: negated obligation + the induction axiom
  ASSERT_EQ(rs.proof.conclusion.formulas.size(), 2u);
  EXPECT_EQ(rs.proof.conclusion.formulas[0], negate(rs.obligation));
  EXPECT_EQ(rs.proof.conclusion.formulas[1], build_induction(phi, "x"));
  EXPECT_EQ(rs.base_theory, "RCA0-stub");

  // obligation instances match the code-level substitution of the bracket
  for (std::uint64_t n : {0, 1, 4}) {
    GodelCode expect = subst_num_code(rs.bracketed_code, n, rs.instance_var);
    Formula inst = subst_num(rs.bracketed, rs.instance_var, numeral(n));
    EXPECT_EQ(expect, encode_formula(inst));
  }
}

TEST(Reflection, RequiresDescriptor) {
  TheorySpec spec;
  spec.name = "NoRfn";
  spec.axiom_text = "A X. 0 in X | 0 notin X";
  spec.schema_tokens = {"full-induction"};
  Theory th = make_theory(spec);
  EXPECT_THROW(synth_reflection_to_induction(F("x = x"), "x", th), Error);
}

TEST(Reflection, CorpusPhisAllCheck) {
  Theory th = stub_theory();
  for (const char* s : {"x = x", "x < x+1", "x = 0 | 0 < x"}) {
    ReflectionSynthesis rs = synth_reflection_to_induction(F(s), "x", th);
    CheckResult r = check_fin(rs.proof, th);
    EXPECT_TRUE(r.ok) << s << ": " << (r.rejection ? r.rejection->message : "");
  }
}

}  // namespace

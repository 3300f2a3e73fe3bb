#include <gtest/gtest.h>

#include <random>

#include "rva/arith.hpp"
#include "rva/definability.hpp"
#include "rva/errors.hpp"
#include "rva/geometry.hpp"
#include "rva/logic.hpp"
#include "rva/omega.hpp"
#include "support/oracles.hpp"

namespace rva {
namespace {

Rational q(const char* s) { return parse_rational(s); }

RelationAutomaton unary(const std::string& text, int base = 2) {
  return compile_formula(parse_formula(text), base, {"x"}, {});
}

bool qs_at(const RelationAutomaton& x, const RationalVector& p) {
  const std::vector<int> live = x.arity() == 1 ? std::vector<int>{1} : std::vector<int>{1, 2};
  return eval_sentence(quasi_singular_at(x.arity(), live, p), x.base(), {{"X", x}});
}

TEST(FrozenPattern, Enumeration) {
  EXPECT_EQ(FrozenPattern::all_nonempty(1).size(), 1u);
  EXPECT_EQ(FrozenPattern::all_nonempty(2).size(), 3u);
  const FrozenPattern p{3, {1, 3}};
  EXPECT_EQ(p.frozen(), std::vector<int>{2});
  EXPECT_EQ(p.to_string(), "{1,3}");
}

TEST(LocalFormulas, FreeVariablesAsDisplayed) {
  const auto lf = build_local_formulas(2, {1});
  EXPECT_EQ(lf.xi.size(), 1u);
  EXPECT_EQ(lf.x.size(), 1u);
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  std::vector<std::string> qs_free = lf.x;
  qs_free.insert(qs_free.end(), lf.xi.begin(), lf.xi.end());
  EXPECT_EQ(sorted(free_variables(lf.qs)), sorted(qs_free));
  EXPECT_EQ(sorted(free_variables(lf.fs)), sorted(lf.xi));
  EXPECT_EQ(relation_symbols(lf.qs).at("X"), 2u);
  EXPECT_THROW(build_local_formulas(2, {}), ValidationError);
}

TEST(QuasiSingular, IntegersAndHalf) {
  const auto z = int_atom(2, 1, 0);
  EXPECT_TRUE(qs_at(z, {q("0")}));
  EXPECT_FALSE(qs_at(z, {q("1/2")}));
  const auto half = unary("x + x = 1");
  EXPECT_TRUE(qs_at(half, {q("1/2")}));
  EXPECT_FALSE(qs_at(half, {q("0")}));
}

// Singular points of S-definable sets are exactly the quasi-singular ones;
// the geometry oracle supplies singularity.
TEST(QuasiSingular, MatchesOracleSingularityOnDefinableSets) {
  const std::vector<std::pair<std::string, std::string>> corpus = {
      {"0 <= x & x <= 1", "polyset 1\narity 1\npiece\n ineq 1 >= 0\n ineq 1 <= 1\n"},
      {"x = 0 | x = 1 | x = 3",
       "polyset 1\narity 1\npiece\n ineq 1 = 0\npiece\n ineq 1 = 1\npiece\n ineq 1 = 3\n"},
      {"x < 0 | x = 1", "polyset 1\narity 1\npiece\n ineq 1 < 0\npiece\n ineq 1 = 1\n"},
  };
  std::mt19937 rng(8);
  for (const auto& [formula, text] : corpus) {
    const auto x = unary(formula);
    const auto p = parse_polyset(text);
    std::vector<RationalVector> points = singular_set(p).points;
    while (points.size() < 12) points.push_back({Rational(std::uniform_int_distribution<int>(-16, 32)(rng), 8)});
    for (const auto& pt : points) EXPECT_EQ(qs_at(x, pt), strata_at(p, pt).empty()) << formula << " at " << to_string(pt);
  }
}

TEST(PhiN, ConjunctionOverPatterns) {
  for (int n : {1, 2}) {
    std::vector<Formula> parts;
    for (const auto& p : FrozenPattern::all_nonempty(n)) {
      const auto lf = build_local_formulas(n, p.live);
      parts.push_back(fml::forall(lf.xi, lf.fs));
    }
    EXPECT_EQ(to_string(build_phi_n(n)), to_string(fml::conj(parts)));
  }
  EXPECT_TRUE(free_variables(build_phi_n(2)).empty());
  EXPECT_TRUE(eval_sentence(build_phi_n(1), 2, {{"X", empty_relation(2, 1)}}));
}

TEST(DecideS, OneDimensionalExamples) {
  EXPECT_EQ(decide_s_definable(unary("x + x = 1")).verdict, Verdict::Definable);
  const auto r = decide_s_definable(int_atom(2, 1, 0));
  EXPECT_EQ(r.verdict, Verdict::NotDefinable);
  EXPECT_EQ(r.failing_tag, "FSP");
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(denominator_of((*r.witness)[0]), 1);
  EXPECT_THROW(decide_s_definable(unary("x < 1").with_saturated(false)), ValidationError);
}

TEST(DecideS, SoundOnPureOrderFormulas) {
  for (const char* f : {"x < x", "x = x", "0 < x & x < 1", "x >= 2", "x < 0 | x = 1", "x != 1/3"})
    EXPECT_EQ(decide_s_definable(unary(f)).verdict, Verdict::Definable) << f;
}

TEST(DecideS, BaseIndependence) {
  for (const char* f : {"x = 0 | x = 1", "E y. (int(y) & y <= x & x < y + 1/3)"})
    EXPECT_EQ(decide_s_definable(unary(f, 2)).verdict, decide_s_definable(unary(f, 3)).verdict) << f;
}

TEST(Approx, Examples) {
  const auto c = [](int v) { return Term::constant_term(Rational(v)); };
  Binding z{{"X", int_atom(2, 1, 0)}};
  EXPECT_TRUE(eval_sentence(approx_formula({c(0)}, {c(5)}), 2, z));
  Binding unit{{"X", unary("0 <= x & x <= 1")}};
  EXPECT_FALSE(eval_sentence(approx_formula({c(0)}, {c(1)}), 2, unit));
  EXPECT_TRUE(eval_sentence(approx_formula({c(1)}, {c(1)}), 2, unit));
  EXPECT_TRUE(eval_sentence(approx_formula({c(3)}, {c(-2)}), 2, unit));
  EXPECT_EQ(free_variables(build_approx(2)).size(), 4u);
}

TEST(Approx, IsAnEquivalenceOnSamples) {
  const auto c = [](int v) { return Term::constant_term(Rational(v)); };
  Binding b{{"X", unary("x >= 0 & x < 3/2")}};
  auto eq = [&](int a, int d) { return eval_sentence(approx_formula({c(a)}, {c(d)}), 2, b); };
  for (int a = -2; a <= 2; ++a) {
    EXPECT_TRUE(eq(a, a));
    for (int d = -2; d <= 2; ++d) {
      EXPECT_EQ(eq(a, d), eq(d, a));
      for (int e = -2; e <= 2; ++e)
        if (eq(a, d) && eq(d, e)) EXPECT_TRUE(eq(a, e));
    }
  }
}

TEST(Decompose, Integers) {
  const auto r = decompose(int_atom(2, 1, 0));
  ASSERT_TRUE(r.fu_holds);
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_TRUE(equivalent(r.classes[0].delta, unary("x = 0")));
}

TEST(Decompose, HalfLine) {
  const auto r = decompose(unary("x >= 0"));
  ASSERT_TRUE(r.fu_holds);
  EXPECT_GE(r.classes.size(), 2u);
}

TEST(DecideL, Examples) {
  EXPECT_EQ(decide_l_definable(int_atom(2, 1, 0)).verdict, Verdict::Definable);
  const auto r = decide_l_definable(oracle::powers_of_two_automaton());
  EXPECT_EQ(r.verdict, Verdict::NotDefinable);
  EXPECT_EQ(r.failing_tag, "IP");
  EXPECT_EQ(decide_l_definable(unary("E m. (int(m) & m <= x & x <= m + 1/2)")).verdict, Verdict::Definable);
}

TEST(DecideL, CantorSetFailsFp) {
  const auto r = decide_l_definable(oracle::cantor4_automaton());
  EXPECT_EQ(r.verdict, Verdict::NotDefinable);
  EXPECT_EQ(r.failing_tag, "FP");
  ASSERT_TRUE(r.failing_class);
}

TEST(HandBuilt, CantorAutomatonMatchesDigitOracle) {
  const auto c = oracle::cantor4_automaton();
  std::mt19937 rng(12);
  for (int i = 0; i < 200; ++i) {
    const Rational x = oracle::random_rational(rng, 64, 1);
    EXPECT_EQ(member(c, {x}), oracle::cantor4_member(x)) << to_string(x);
  }
  for (const char* s : {"0", "1", "1/4", "3/4", "1/5", "1/16", "15/16"}) EXPECT_TRUE(member(c, {q(s)})) << s;
  const auto p = oracle::powers_of_two_automaton();
  for (int v = -3; v <= 70; ++v) EXPECT_EQ(member(p, {Rational(v)}), oracle::power_of_two(Rational(v))) << v;
  EXPECT_FALSE(member(p, {q("1/2")}));
}

}  // namespace
}  // namespace rva

#include <gtest/gtest.h>

#include <random>

#include "rva/arith.hpp"
#include "rva/errors.hpp"
#include "rva/logic.hpp"
#include "rva/omega.hpp"
#include "support/oracles.hpp"

namespace rva {
namespace {

using K = FormulaNode::Kind;

Rational q(const char* s) { return parse_rational(s); }

RelationAutomaton compile(const std::string& text, std::vector<std::string> vars, const Binding& b = {}) {
  return compile_formula(parse_formula(text), 2, vars, b);
}

TEST(Parse, Examples) {
  const auto f = parse_formula("E y. x = y + y");
  ASSERT_EQ(f->kind, K::Exists);
  EXPECT_EQ(f->name, "y");
  ASSERT_EQ(f->left->kind, K::Compare);
  EXPECT_EQ(free_variables(f), std::vector<std::string>{"x"});

  const auto g = parse_formula("A x. int(x) -> X(x)");
  EXPECT_EQ(g->kind, K::Forall);
  EXPECT_EQ(g->left->kind, K::Implies);
  EXPECT_EQ(relation_symbols(g).at("X"), 1u);

  try {
    parse_formula("x <");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 4u);
  }
}

TEST(Parse, PrecedenceAndRationals) {
  const auto f = parse_formula("!a < 1 & b > 2 | c = 3/4 -> d >= -1/2 <-> true");
  EXPECT_EQ(f->kind, K::Iff);
  EXPECT_EQ(f->left->kind, K::Implies);
  EXPECT_EQ(f->left->left->kind, K::Or);
  EXPECT_EQ(f->left->left->left->kind, K::And);
  EXPECT_EQ(f->left->left->left->left->kind, K::Not);
  EXPECT_EQ(f->left->left->right->rhs.constant, q("3/4"));
}

TEST(Parse, RenamesShadowedBinders) {
  const auto f = parse_formula("E x. (x > 0 & E x. x < 0)");
  EXPECT_NE(f->name, f->left->right->name);
  EXPECT_THROW(parse_formula("x < y", std::vector<std::string>{"x"}), Error);
}

TEST(Compile, Examples) {
  const auto half = compile("x < 1/2", {"x"});
  EXPECT_TRUE(member(half, {q("1/4")}));
  EXPECT_FALSE(member(half, {q("3/4")}));
  EXPECT_TRUE(equivalent(compile("E y. (int(y) & x = y)", {"x"}), int_atom(2, 1, 0)));
}

TEST(Compile, QuantifierFreeAgreesWithExactEvaluation) {
  std::mt19937 rng(17);
  for (int i = 0; i < 15; ++i) {
    const int n = 1 + i % 3;
    const auto f = oracle::random_qf(rng, n, 2);
    const auto a = compile(oracle::render(*f), oracle::variable_names(n));
    EXPECT_TRUE(a.saturated());
    for (int j = 0; j < 40; ++j) {
      const auto p = oracle::random_point(rng, n, 16, 3);
      EXPECT_EQ(member(a, p), oracle::evaluate(*f, p)) << oracle::render(*f) << " at " << to_string(p);
    }
  }
}

TEST(Compile, DoubleNegationAndForallDuality) {
  const std::vector<std::string> corpus = {"x < 1/3 | int(x + x)", "E y. (x < y & y < 1 & int(y))",
                                           "A y. (y > x -> y > 1/2)"};
  for (const auto& text : corpus) {
    const auto a = compile(text, {"x"});
    EXPECT_TRUE(equivalent(compile("!!(" + text + ")", {"x"}), a)) << text;
  }
  EXPECT_TRUE(equivalent(compile("A y. (x < y | int(y))", {"x"}), compile("!E y. !(x < y | int(y))", {"x"})));
}

TEST(Compile, RelationArguments) {
  Binding b{{"X", compile("x < y", {"x", "y"})}};
  const auto a = compile("X(z + 1, 2*w)", {"z", "w"}, b);
  EXPECT_TRUE(member(a, {q("0"), q("1")}));
  EXPECT_FALSE(member(a, {q("1"), q("1")}));
  EXPECT_THROW(compile("X(z)", {"z"}, b), ValidationError);
}

TEST(Compile, OneQuantifierAgreesWithBoundedSearch) {
  // Witnesses, when they exist, are multiples of 1/8 within [-4, 4].
  const std::string text = "E y. (8*y = x + x + 1 & int(y + y))";
  const auto a = compile(text, {"x"});
  std::mt19937 rng(2);
  for (int i = 0; i < 30; ++i) {
    const Rational x = oracle::random_rational(rng, 8, 2);
    bool found = false;
    for (int num = -256; num <= 256 && !found; ++num) {
      const Rational y(num, 64);
      found = 8 * y == 2 * x + 1 && denominator_of(Rational(2 * y)) == 1;
    }
    EXPECT_EQ(member(a, {x}), found) << to_string(x);
  }
}

TEST(Compiler, CachesRepeatedSubformulas) {
  Compiler c(2, {});
  c.compile(parse_formula("(x < 1 & int(x)) | (E y. (y < 1 & int(y)) & x > 0)"), {"x"});
  EXPECT_GT(c.stats().cache_hits, 0u);
}

TEST(EvalSentence, Examples) {
  EXPECT_TRUE(eval_sentence(parse_formula("A x. E y. x = y + y"), 2, {}));
  EXPECT_FALSE(eval_sentence(parse_formula("E x. (int(x) & 0 < x & x < 1)"), 2, {}));
  Binding z{{"X", int_atom(2, 1, 0)}};
  EXPECT_FALSE(eval_sentence(parse_formula("E x. (X(x) & !int(x))"), 2, z));
  EXPECT_TRUE(eval_sentence(parse_formula("A x. (X(x) -> int(x))"), 2, z));
  EXPECT_THROW(eval_sentence(parse_formula("x < 1"), 2, {}), ValidationError);
}

TEST(EvalSentence, BaseThreeAgrees) {
  for (const char* s : {"A x. E y. x = y + y + y", "E x. (int(x) & 2*x = 1)", "A x. (int(x) | !int(x))"})
    EXPECT_EQ(eval_sentence(parse_formula(s), 2, {}), eval_sentence(parse_formula(s), 3, {})) << s;
}

}  // namespace
}  // namespace rva

#include <gtest/gtest.h>

#include "fpmc/polynomial.hpp"
#include "fpmc/structure.hpp"
#include "generators.hpp"

using namespace fpmc;

namespace {

const FpFormat dec1{10, 1, TieRule::HalfAwayFromZero};
const FpFormat dec2{10, 2, TieRule::HalfAwayFromZero};

Polynomial x(std::size_t i) { return Polynomial::variable(i - 1); }

FpVector vec(std::initializer_list<Rational> vals, const FpFormat& fmt) {
  FpVector out;
  for (const auto& q : vals) out.push_back(round(q, fmt));
  return out;
}

}  // namespace

TEST(Polynomial, EvalSignExamples) {
  EXPECT_EQ(eval_sign(x(1) - Polynomial::constant(5), vec({10}, dec1), dec1), 1);
  EXPECT_EQ(eval_sign(x(1) * x(2) - x(2) * x(1), vec({3, 7}, dec1), dec1), 0);
  EXPECT_TRUE((x(1) * x(2) - x(2) * x(1)).is_zero());
  EXPECT_EQ(eval_sign(x(1).pow(2) - Polynomial::constant(2), vec({Rational(14, 10)}, dec2), dec2), -1);
}

TEST(Polynomial, Algebra) {
  Polynomial p = (x(1) + x(2)).pow(2);
  EXPECT_EQ(p, x(1) * x(1) + Polynomial::constant(2) * x(1) * x(2) + x(2) * x(2));
  EXPECT_EQ(p.degree(), 2u);
  EXPECT_EQ(p.arity(), 2u);
  EXPECT_EQ(Polynomial::constant(0).arity(), 0u);
  EXPECT_EQ(p.eval({1, 2}), 9);
  EXPECT_EQ(-p + p, Polynomial());
  EXPECT_EQ(p.rename({3, 0}), (x(4) + x(1)).pow(2));
  EXPECT_EQ(to_string(Polynomial::constant(Rational(-3, 4)) * x(2).pow(3) + x(1) - Polynomial::constant(5)),
            "-3/4*x2^3 + x1 - 5");
}

TEST(Polynomial, ParseAndPrintRoundTrip) {
  EXPECT_EQ(parse_polynomial("x1^2 - 2"), x(1).pow(2) - Polynomial::constant(2));
  EXPECT_EQ(parse_polynomial("3*(x1 + x2)^2"), Polynomial::constant(3) * (x(1) + x(2)).pow(2));
  EXPECT_EQ(parse_polynomial("-x3 + 1/2*x1"), Polynomial::constant(Rational(1, 2)) * x(1) - x(3));
  EXPECT_EQ(parse_polynomial("0.5*x1"), Polynomial::constant(Rational(1, 2)) * x(1));
  EXPECT_THROW(parse_polynomial("x0"), ParseError);
  EXPECT_THROW(parse_polynomial("x1 +"), ParseError);
  EXPECT_THROW(parse_polynomial("(x1"), ParseError);
  gen::Rng rng(91);
  for (int i = 0; i < 300; ++i) {
    Polynomial p = gen::polynomial(rng, 4, 3);
    EXPECT_EQ(parse_polynomial(to_string(p)), p) << to_string(p);
  }
}

TEST(Formula, ParseAndEvaluate) {
  FpVector v = vec({10, 3}, dec1);
  EXPECT_TRUE(evaluate(parse_formula("x1 >= 5"), v, dec1));
  EXPECT_FALSE(evaluate(parse_formula("x1 >= 5 & !(x1 >= 5)"), v, dec1));
  EXPECT_TRUE(evaluate(parse_formula("x1 < 5 | x2 = 3"), v, dec1));
  EXPECT_TRUE(evaluate(parse_formula("(x1 - 1) * x2 > 26"), v, dec1));
  EXPECT_TRUE(evaluate(parse_formula("x1 != x2 && true"), v, dec1));
  EXPECT_FALSE(evaluate(parse_formula("false || x2 <= 2"), v, dec1));
  EXPECT_TRUE(evaluate(parse_formula("(x1 >= 5)"), v, dec1));
  EXPECT_TRUE(evaluate(parse_formula("((x1) + 1 >= 11)"), v, dec1));
  EXPECT_TRUE(evaluate(parse_formula("x1 == 10"), v, dec1));
  EXPECT_THROW(parse_formula("x1 >="), ParseError);
  EXPECT_THROW(parse_formula("x1 + 1"), ParseError);
  EXPECT_THROW(parse_formula("big & x1 > 1"), ParseError);
  FormulaScope scope{{"big", parse_formula("x1 >= 100")}};
  EXPECT_FALSE(evaluate(parse_formula("big & x1 > 1", scope), v, dec1));
  Formula f = parse_formula("x1 >= 5 & !(x2 = 0) | x1 < 1");
  EXPECT_EQ(f.arity(), 2u);
  EXPECT_EQ(evaluate(parse_formula(to_string(f)), v, dec1), evaluate(f, v, dec1));
}

TEST(Formula, TargetFile) {
  auto targets = parse_targets(
      "# targets\n"
      "let small = x1 < 5\n"
      "big: !small\n"
      "pair: big & x2 >= 1\n");
  ASSERT_EQ(targets.size(), 2u);
  EXPECT_EQ(targets[0].name, "big");
  EXPECT_EQ(targets[1].name, "pair");
  EXPECT_TRUE(evaluate(targets[1].formula, vec({10, 3}, dec1), dec1));
  try {
    parse_targets("a: x1 >= 1\nb: x1 >=\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_targets("no colon here\n"), ParseError);
}

TEST(LiftTarget, Unfolding) {
  Formula y = parse_formula("x1 >= 1");
  Formula same = lift_target(y, 0, 1, 1);
  EXPECT_EQ(to_string(same), to_string(y));
  Formula lifted = lift_target(y, 1, 2, 1);
  // state 0 at phase 1 is index 1; phase 0 copy must vanish
  FpVector ok = vec({0, 3}, dec1);
  FpVector bad = vec({2, 3}, dec1);
  EXPECT_TRUE(evaluate(lifted, ok, dec1));
  EXPECT_FALSE(evaluate(lifted, bad, dec1));
  EXPECT_THROW(lift_target(y, 2, 2, 1), std::invalid_argument);
}

TEST(LiftTarget, HittingTimesSplitByPhase) {
  Lds lds({{0, 1}, {1, 0}}, {1, 0}, dec1);
  PhasedLds ph = blowup(lds);
  Formula y = parse_formula("x1 >= 1");
  auto orig = orbit(lds, 50);
  auto phased = orbit(ph.lds(), 50);
  for (std::size_t t = 0; t <= 50; ++t) {
    int hits = 0;
    for (std::size_t i = 0; i < ph.phases(); ++i) {
      if (evaluate(lift_target(y, i, ph.phases(), lds.dim()), phased[t], dec1)) ++hits;
    }
    EXPECT_EQ(hits, evaluate(y, orig[t], dec1) ? 1 : 0) << t;
  }
}

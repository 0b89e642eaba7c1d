#include <gtest/gtest.h>

#include "fpmc/fpnum.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fpmc;

namespace {

const FpFormat dec1{10, 1, TieRule::HalfAwayFromZero};

Rational pow10(std::int64_t k) { return pow_rational(10, k); }

}  // namespace

TEST(Round, CarryIntoNextDecade) {
  for (int c = -3; c <= 6; ++c) {
    EXPECT_EQ(to_rational(round(Rational(99, 10) * pow10(c - 1), dec1), dec1), pow10(c)) << c;
    EXPECT_EQ(to_rational(round(Rational(99, 100) * pow10(c), dec1), dec1), pow10(c)) << c;
    EXPECT_EQ(to_rational(round(Rational(999999, 1000000) * pow10(c), dec1), dec1), pow10(c)) << c;
  }
}

TEST(Round, ZeroHasNoExponent) {
  FpNumber z = round(0, dec1);
  EXPECT_TRUE(z.is_zero());
  EXPECT_FALSE(z.exponent().has_value());
  EXPECT_EQ(to_rational(z, dec1), 0);
}

TEST(Round, SumOfTwoPowersKeepsLarger) {
  EXPECT_EQ(to_rational(round(11, dec1), dec1), 10);
  EXPECT_EQ(round(11, dec1).digits(), 1);
  EXPECT_EQ(*round(11, dec1).exponent(), 2);
}

TEST(Round, TieRules) {
  auto r = [](const Rational& x, TieRule t) { return to_rational(round(x, FpFormat{10, 1, t}), FpFormat{10, 1, t}); };
  EXPECT_EQ(r(Rational(1, 4), TieRule::HalfAwayFromZero), Rational(3, 10));
  EXPECT_EQ(r(Rational(-1, 4), TieRule::HalfAwayFromZero), Rational(-3, 10));
  EXPECT_EQ(r(Rational(1, 4), TieRule::HalfToEven), Rational(1, 5));
  EXPECT_EQ(r(Rational(35, 100), TieRule::HalfToEven), Rational(2, 5));
  EXPECT_EQ(r(Rational(1, 4), TieRule::HalfUp), Rational(3, 10));
  EXPECT_EQ(r(Rational(-1, 4), TieRule::HalfUp), Rational(-1, 5));
  EXPECT_EQ(r(Rational(1, 4), TieRule::HalfDown), Rational(1, 5));
  EXPECT_EQ(r(Rational(-1, 4), TieRule::HalfDown), Rational(-3, 10));
  // only p+1 digits count: 0.2500001 is still a tie
  EXPECT_EQ(r(Rational(2500001, 10000000), TieRule::HalfToEven), Rational(1, 5));
  EXPECT_EQ(r(Rational(95, 1), TieRule::HalfAwayFromZero), 100);
}

TEST(Round, BaseTwo) {
  FpFormat b2{2, 2, TieRule::HalfToEven};
  // 0.111b -> tie between 0.11 and 1.00; even head is 1.0
  EXPECT_EQ(to_rational(round(Rational(7, 8), b2), b2), 1);
  EXPECT_EQ(to_rational(round(Rational(5, 8), b2), b2), Rational(1, 2));
  EXPECT_EQ(to_rational(round(3, b2), b2), 3);
}

TEST(Round, MatchesDigitExpansionOracle) {
  gen::Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    FpFormat fmt{gen::coin(rng) ? 2UL : gen::uniform(rng, 3, 16), static_cast<unsigned>(gen::uniform(rng, 1, 5)),
                 gen::tie_rule(rng)};
    Rational x = gen::rational(rng, fmt.base, true);
    ASSERT_EQ(round(x, fmt), oracle::round(x, fmt)) << to_string(x) << " base " << fmt.base << " p " << fmt.precision;
  }
}

TEST(Round, RoundScaledAgreesWithRound) {
  gen::Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    FpFormat fmt{10, static_cast<unsigned>(gen::uniform(rng, 1, 4)), gen::tie_rule(rng)};
    Rational x = gen::rational(rng, 10, true);
    std::int64_t shift = static_cast<std::int64_t>(gen::uniform(rng, 0, 20)) - 10;
    EXPECT_EQ(round_scaled(x.get_num(), x.get_den(), shift, fmt), round(x * pow10(shift), fmt));
  }
}

TEST(Round, Properties) {
  gen::Rng rng(13);
  for (int i = 0; i < 3000; ++i) {
    FpFormat fmt{gen::coin(rng) ? 2UL : 10UL, static_cast<unsigned>(gen::uniform(rng, 1, 4)), gen::tie_rule(rng)};
    Rational x = gen::rational(rng, fmt.base);
    FpNumber r = round(x, fmt);
    Rational rv = to_rational(r, fmt);
    EXPECT_EQ(r.sign(), sgn(x));
    EXPECT_LE(abs(rv), 2 * abs(x));
    EXPECT_LE(abs(x), 2 * abs(rv));
    std::int64_t k = static_cast<std::int64_t>(gen::uniform(rng, 0, 16)) - 8;
    EXPECT_EQ(round(x * pow_rational(fmt.base, k), fmt), r.scaled(k));
    EXPECT_TRUE(is_representable(rv, fmt));
    EXPECT_EQ(round(rv, fmt), r);
  }
}

TEST(Round, ScaledTieRulesHoldForNegatives) {
  // Signed tie rules are not symmetric, but scaling by b^k still commutes.
  FpFormat up{10, 1, TieRule::HalfUp};
  for (int k = -5; k <= 5; ++k) {
    EXPECT_EQ(round(Rational(-25, 1) * pow10(k), up), round(Rational(-25, 1), up).scaled(k));
  }
}

TEST(FpNumber, PartsAndMantissa) {
  FpFormat f2{10, 2, TieRule::HalfAwayFromZero};
  FpNumber x = FpNumber::from_parts(1, 11, 0, f2);
  EXPECT_EQ(to_rational(x, f2), Rational(11, 100));
  EXPECT_EQ(x.mantissa(f2), Rational(11, 100));
  FpNumber y = FpNumber::from_parts(1, 3, 2, dec1);
  EXPECT_EQ(to_rational(y, dec1), 30);
  EXPECT_EQ(y.mantissa(dec1), Rational(3, 10));
  EXPECT_THROW(FpNumber::from_parts(1, 30, 2, dec1), std::invalid_argument);
  EXPECT_THROW(FpNumber::from_parts(1, 0, 2, dec1), std::invalid_argument);
  EXPECT_EQ(y.negated().sign(), -1);
  EXPECT_EQ(std::hash<FpNumber>{}(y), std::hash<FpNumber>{}(round(30, dec1)));
}

TEST(IsClose, Examples) {
  FpNumber x = round(Rational(3) * pow10(4), dec1);  // 0.3e5
  FpNumber y = round(Rational(9) * pow10(3), dec1);  // 0.9e4
  EXPECT_TRUE(is_close(x, y, 2));
  EXPECT_FALSE(is_close(x, y, 1));
  FpNumber z;
  FpNumber one = round(Rational(1, 10), dec1);
  for (int d = 0; d < 50; d += 7) EXPECT_FALSE(is_close(z, one, d));
  EXPECT_TRUE(is_close(z, z, 1));
}

TEST(Render, FormsAndRoundTrip) {
  EXPECT_EQ(render(FpNumber(), dec1), "0");
  EXPECT_EQ(render(round(30, dec1), dec1), "0.3e2");
  EXPECT_EQ(render(round(-30, dec1), dec1), "-0.3e2");
  FpFormat f3{10, 3, TieRule::HalfAwayFromZero};
  EXPECT_EQ(render(round(Rational(-1, 80), f3), f3), "-0.125e-1");
  gen::Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    FpFormat fmt{gen::uniform(rng, 2, 36), static_cast<unsigned>(gen::uniform(rng, 1, 4)), gen::tie_rule(rng)};
    FpNumber x = gen::fp_number(rng, fmt, 30);
    EXPECT_EQ(parse_fp(render(x, fmt), fmt, true), x);
  }
}

TEST(ParseFp, LiteralsAndExactness) {
  EXPECT_EQ(parse_fp("27", dec1), round(27, dec1));
  EXPECT_EQ(parse_fp("1/4", dec1), round(Rational(1, 4), dec1));
  EXPECT_EQ(parse_fp("0.3e2", dec1, true), round(30, dec1));
  EXPECT_EQ(parse_fp("3e1", dec1, true), round(30, dec1));
  EXPECT_EQ(parse_fp("0", dec1, true), FpNumber());
  EXPECT_THROW(parse_fp("27", dec1, true), ParseError);
  EXPECT_THROW(parse_fp("0.3x2", dec1), ParseError);
}

TEST(TieRuleNames, ParseAndRender) {
  for (auto t : {TieRule::HalfAwayFromZero, TieRule::HalfToEven, TieRule::HalfUp, TieRule::HalfDown}) {
    EXPECT_EQ(parse_tie_rule(to_string(t)), t);
  }
  EXPECT_EQ(parse_tie_rule("even"), TieRule::HalfToEven);
  EXPECT_THROW(parse_tie_rule("sideways"), ParseError);
  EXPECT_THROW((FpFormat{1, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((FpFormat{10, 0}.validate()), std::invalid_argument);
}

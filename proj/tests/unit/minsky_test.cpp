#include <gtest/gtest.h>

#include "fpmc/minsky.hpp"
#include "oracles.hpp"

using namespace fpmc;

namespace {

const char* kFourStep =
    "L1: inc x -> L2\n"
    "L2: zero? x -> L3 | L4\n"
    "L4: dec x -> L2\n"
    "L3: halt\n";

const char* kCountToThree =
    "s0: inc x -> s1\n"
    "s1: inc x -> s2\n"
    "s2: inc x -> s3\n"
    "s3: halt\n";

const FpFormat fmt_for(TieRule tie) { return {10, 1, tie}; }

Rational ten_to(int c) { return pow_rational(10, c); }

const TieRule kTies[] = {TieRule::HalfAwayFromZero, TieRule::HalfToEven, TieRule::HalfUp, TieRule::HalfDown};

}  // namespace

TEST(MinskyParse, RoundTripAndErrors) {
  MinskyMachine m = parse_minsky(kFourStep);
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m.names[0], "L1");
  EXPECT_EQ(m.program[1].op, MinskyInstruction::Op::Zero);
  EXPECT_EQ(m.names[m.program[1].next], "L3");
  EXPECT_EQ(m.names[m.program[1].nonzero], "L4");
  MinskyMachine again = parse_minsky(render_minsky(m));
  EXPECT_EQ(render_minsky(again), render_minsky(m));
  EXPECT_EQ(again.names, m.names);

  auto line_of = [](const std::string& text) {
    try {
      parse_minsky(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t(0);
  };
  EXPECT_EQ(line_of("L1: inc x -> L9\n"), 1u);
  EXPECT_EQ(line_of("L1: inc x -> L2\nL2: jump L1\n"), 2u);
  EXPECT_EQ(line_of("L1: inc z -> L1\n"), 1u);
  EXPECT_EQ(line_of("L1: halt\nL1: halt\n"), 2u);
  EXPECT_THROW(parse_minsky(""), ParseError);
}

TEST(MinskyParse, CommentsAndBlankLines) {
  MinskyMachine m = parse_minsky("# counter\n\nA: inc y -> B\nB:halt\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.program[0].counter, Counter::Y);
  EXPECT_EQ(m.program[1].op, MinskyInstruction::Op::Halt);
}

TEST(MinskySemantics, StepsAndDecrementOnZero) {
  MinskyMachine m = parse_minsky(kFourStep);
  MinskyConfig c;
  std::vector<std::size_t> states;
  while (!is_halted(m, c)) {
    c = machine_step(m, c);
    states.push_back(c.state);
  }
  EXPECT_EQ(states, (std::vector<std::size_t>{1, 2, 1, 3}));
  EXPECT_EQ(c.x, 0u);
  MinskyMachine bad = parse_minsky("L1: dec y -> L2\nL2: halt\n");
  EXPECT_THROW(machine_step(bad, MinskyConfig{}), DecrementOnZero);
}

TEST(FilterGadget, ProofCases) {
  const FpFormat f = fmt_for(TieRule::HalfAwayFromZero);
  auto equal = evaluate_filter(ten_to(3), ten_to(3), f);
  EXPECT_EQ(oracle::value(equal.w, f), 1000);
  auto smaller = evaluate_filter(10, 1, f);
  EXPECT_TRUE(smaller.temp2.is_zero());
  EXPECT_TRUE(smaller.w.is_zero());
  EXPECT_EQ(oracle::value(smaller.minus, f), 1);
  auto next = evaluate_filter(1, 10, f);
  EXPECT_EQ(oracle::value(next.temp2, f), 9);
  EXPECT_EQ(oracle::value(next.w, f), 10);  // [9.9] = 10
  EXPECT_TRUE(next.minus.is_zero());
  auto far = evaluate_filter(1, 100, f);
  EXPECT_EQ(oracle::value(far.temp, f), 100);
  EXPECT_EQ(oracle::value(far.temp2, f), 100);  // [99] = 100
  EXPECT_EQ(oracle::value(far.w, f), 100);
  auto same = evaluate_filter(1, 1, f);
  EXPECT_TRUE(same.minus.is_zero());
  EXPECT_EQ(oracle::value(same.plus, f), 1);
}

TEST(FilterGadget, TableUnderEveryTieRule) {
  for (TieRule tie : kTies) {
    const FpFormat f = fmt_for(tie);
    for (int c1 = 0; c1 <= 30; ++c1) {
      for (int c2 = 0; c2 <= 30; ++c2) {
        Rational u = ten_to(c1), v = ten_to(c2);
        FilterTrace tr = evaluate_filter(u, v, f);
        Rational want_plus = c2 >= c1 ? v : Rational(0);
        Rational want_minus = c2 < c1 ? v : Rational(0);
        ASSERT_EQ(oracle::value(tr.w, f), want_plus) << c1 << " " << c2;
        ASSERT_EQ(oracle::value(tr.plus, f), want_plus) << c1 << " " << c2;
        ASSERT_EQ(oracle::value(tr.minus, f), want_minus) << c1 << " " << c2;
      }
    }
  }
}

TEST(FilterGadget, ZeroInputs) {
  const FpFormat f = fmt_for(TieRule::HalfToEven);
  EXPECT_EQ(oracle::value(evaluate_filter(0, 100, f).plus, f), 100);
  EXPECT_TRUE(evaluate_filter(0, 100, f).minus.is_zero());
  EXPECT_TRUE(evaluate_filter(100, 0, f).plus.is_zero());
  EXPECT_TRUE(evaluate_filter(100, 0, f).minus.is_zero());
}

TEST(Compile, FourStepMachineHalts) {
  MinskyMachine m = parse_minsky(kFourStep);
  CompiledReduction c = compile_minsky(m);
  EXPECT_EQ(c.lds.format().base, 10u);
  EXPECT_EQ(c.lds.format().precision, 1u);
  EXPECT_EQ(c.decode(c.lds.initial_point()), MinskyConfig{});
  CosimReport r = cosimulate(m, c, 100);
  EXPECT_TRUE(r.agreed) << r.message;
  EXPECT_TRUE(r.halted);
  EXPECT_EQ(r.machine_steps, 4u);
  EXPECT_EQ(r.zero_time, std::optional<std::uint64_t>(20));
  EXPECT_TRUE(r.boundary_mantissas_ok);
}

TEST(Compile, ZeroTestThenHalt) {
  MinskyMachine m = parse_minsky("L1: zero? x -> L2 | L2\nL2: halt\n");
  CosimReport r = cosimulate(m, compile_minsky(m), 10);
  EXPECT_TRUE(r.agreed) << r.message;
  EXPECT_EQ(r.machine_steps, 1u);
  EXPECT_EQ(r.zero_time, std::optional<std::uint64_t>(8));
}

TEST(Compile, IncrementLoopNeverHalts) {
  MinskyMachine m = parse_minsky("L1: inc x -> L1\n");
  CompiledReduction c = compile_minsky(m);
  CosimReport r = cosimulate(m, c, 60);
  EXPECT_TRUE(r.agreed) << r.message;
  EXPECT_FALSE(r.halted);
  EXPECT_FALSE(r.zero_time);
  auto pts = orbit(c.lds, 4 * 5);
  for (std::uint64_t s = 0; s <= 5; ++s) {
    auto cfg = c.decode(pts[4 * s]);
    ASSERT_TRUE(cfg);
    EXPECT_EQ(cfg->x, s);
    EXPECT_EQ(oracle::value(pts[4 * s][c.blocks[0].x], c.lds.format()), ten_to(static_cast<int>(s)));
  }
}

TEST(Compile, CountToThree) {
  MinskyMachine m = parse_minsky(kCountToThree);
  CompiledReduction c = compile_minsky(m);
  auto pts = orbit(c.lds, 12);
  auto cfg = c.decode(pts[12]);
  ASSERT_TRUE(cfg);
  EXPECT_EQ(cfg->state, 3u);
  EXPECT_EQ(cfg->x, 3u);
  EXPECT_EQ(oracle::value(pts[12][c.blocks[3].x], c.lds.format()), 1000);
  EXPECT_EQ(oracle::value(pts[12][c.blocks[3].a], c.lds.format()), 1000);
  CosimReport r = cosimulate(m, c, 10);
  EXPECT_TRUE(r.agreed && r.halted);
  EXPECT_EQ(r.zero_time, std::optional<std::uint64_t>(16));
}

TEST(Compile, DecrementOnZeroIsReported) {
  MinskyMachine m = parse_minsky("L1: inc y -> L2\nL2: dec x -> L3\nL3: halt\n");
  CosimReport r = cosimulate(m, compile_minsky(m), 10);
  EXPECT_TRUE(r.decrement_on_zero);
  EXPECT_FALSE(r.agreed);
  EXPECT_EQ(r.machine_steps, 1u);
}

TEST(Compile, TieRuleDoesNotMatter) {
  const char* both =
      "a: inc x -> b\n"
      "b: inc y -> c\n"
      "c: inc y -> d\n"
      "d: zero? y -> h | e\n"
      "e: dec y -> f\n"
      "f: zero? x -> h | g\n"
      "g: dec x -> d\n"
      "h: halt\n";
  MinskyMachine m = parse_minsky(both);
  std::optional<std::uint64_t> first;
  for (TieRule tie : kTies) {
    CosimReport r = cosimulate(m, compile_minsky(m, tie), 100);
    EXPECT_TRUE(r.agreed) << r.message;
    EXPECT_TRUE(r.halted);
    EXPECT_TRUE(r.boundary_mantissas_ok);
    if (!first) first = r.zero_time;
    EXPECT_EQ(r.zero_time, first);
  }
}

TEST(Compile, DecodeRejectsGarbage) {
  CompiledReduction c = compile_minsky(parse_minsky(kFourStep));
  FpVector v = c.lds.initial_point();
  FpVector two = v;
  two[c.blocks[1].unit] = v[c.blocks[0].unit];
  EXPECT_FALSE(c.decode(two));
  FpVector off = v;
  off[c.blocks[0].a] = FpNumber();
  EXPECT_FALSE(c.decode(off));
  FpVector zero(v.size(), FpNumber());
  EXPECT_FALSE(c.decode(zero));
}

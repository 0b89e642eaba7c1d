// Runs the eight acceptance criteria and prints one PASS/FAIL line each.
// Usage: fpmc_acceptance [criterion ...]

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fpmc/hitting.hpp"
#include "fpmc/minsky.hpp"
#include "fpmc/omega.hpp"
#include "fpmc/reach.hpp"
#include "generators.hpp"
#include "machines.hpp"
#include "oracles.hpp"

using namespace fpmc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(const std::string& why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(why);
  }
};

std::string str(const Rational& q) { return q.get_str(); }

const TieRule kTies[] = {TieRule::HalfAwayFromZero, TieRule::HalfToEven, TieRule::HalfUp, TieRule::HalfDown};

// The systems of criterion 4, reused by criterion 8.
struct CertifiedSystem {
  Lds lds;
  Certificate cert;
};
std::vector<CertifiedSystem> g_systems;

std::vector<Lds> criterion4_systems() {
  gen::Rng rng(4004);
  std::vector<Lds> out;
  for (int i = 0; i < 100; ++i) out.push_back(gen::nonneg_lds(rng));
  return out;
}

// 1. Rounding axioms.
Outcome rounding_axioms() {
  Outcome o;
  gen::Rng rng(1001);
  const unsigned long bases[] = {2, 10};
  std::size_t ties_hit = 0;
  for (int i = 0; i < 100000; ++i) {
    FpFormat fmt{bases[i % 2], static_cast<unsigned>(1 + (i / 2) % 4), kTies[(i / 8) % 4]};
    Rational x = gen::rational(rng, fmt.base, i % 50 == 0);
    FpNumber r = round(x, fmt);
    Rational rv = to_rational(r, fmt);
    std::string ctx = "x=" + str(x) + " b=" + std::to_string(fmt.base) + " p=" + std::to_string(fmt.precision) +
                      " tie=" + to_string(fmt.tie);
    if (!(r == oracle::round(x, fmt))) o.fail("differs from digit oracle: " + ctx);
    if (sgn(rv) != sgn(x)) o.fail("sign: " + ctx);
    if (sgn(x) == 0) continue;
    // log-bounded, c = 2
    if (abs(x) > 2 * abs(rv) || abs(rv) > 2 * abs(x)) o.fail("log-bounded: " + ctx);
    // mantissa-based
    std::int64_t a = static_cast<std::int64_t>(gen::uniform(rng, 0, 16)) - 8;
    Rational scale = pow_rational(fmt.base, a);
    if (to_rational(round(x * scale, fmt), fmt) != rv * scale) o.fail("mantissa-based: " + ctx);
    // p+1-finite: keep the first p+1 digits, replace the rest
    auto d = oracle::expand_digits(x, fmt.base, fmt.precision + 1);
    Rational head = 0;
    for (auto digit : d.digits) head = head * fmt.base + digit;
    std::int64_t low = d.exponent - static_cast<std::int64_t>(fmt.precision) - 1;
    Rational ulp = pow_rational(fmt.base, low);
    Rational tail(static_cast<long>(gen::uniform(rng, 0, 999)), 1000);
    if (d.digits.back() * 2 == fmt.base) ++ties_hit;
    Rational other = (head + tail) * ulp;
    if (sgn(x) < 0) other = -other;
    if (!(round(other, fmt) == r)) o.fail("p+1-finite: " + ctx + " other=" + str(other));
  }
  o.detail = "1e5 rationals, " + std::to_string(ties_hit) + " with a tie digit";
  if (ties_hit < 1000) o.fail("too few tie cases exercised");
  return o;
}

// 2. Filter gadget table.
Outcome gadget_table() {
  Outcome o;
  std::map<std::string, int> cases;
  for (TieRule tie : kTies) {
    FpFormat fmt{10, 1, tie};
    for (int c1 = 0; c1 <= 30; ++c1) {
      for (int c2 = 0; c2 <= 30; ++c2) {
        Rational u = pow_rational(10, c1), v = pow_rational(10, c2);
        FilterTrace tr = evaluate_filter(u, v, fmt);
        std::string ctx = "c1=" + std::to_string(c1) + " c2=" + std::to_string(c2) + " tie=" + to_string(tie);
        Rational plus = c2 >= c1 ? v : Rational(0);
        Rational minus = c2 < c1 ? v : Rational(0);
        if (to_rational(tr.w, fmt) != plus || to_rational(tr.plus, fmt) != plus) o.fail("filter+ " + ctx);
        if (to_rational(tr.minus, fmt) != minus) o.fail("filter- " + ctx);
        if (c2 < c1) {
          ++cases["v<u"];
          if (!tr.temp2.is_zero()) o.fail("temp2 should vanish: " + ctx);
        } else if (c2 == c1) {
          ++cases["v=u"];
        } else if (c2 == c1 + 1) {
          ++cases["v=10u"];
          // temp2 = 9 * 10^c1 and [9.9 * 10^c1] carries to 10^c2
          if (to_rational(tr.temp2, fmt) != 9 * u) o.fail("carry case temp2: " + ctx);
        } else {
          ++cases["v>10u"];
          if (to_rational(tr.temp2, fmt) != v) o.fail("[v - u] should be v: " + ctx);
        }
      }
    }
  }
  std::ostringstream s;
  int total = 0;
  for (const auto& [k, n] : cases) {
    s << k << ":" << n << " ";
    total += n;
  }
  s << "total " << total;
  o.detail = s.str();
  if (cases.size() != 4) o.fail("not all four cases exercised");
  return o;
}

// 3. Closeness calculus.
Outcome closeness() {
  Outcome o;
  gen::Rng rng(3003);
  int fired[3] = {0, 0, 0};
  auto positive = [&](const FpFormat& fmt, std::int64_t e) {
    FpNumber x = gen::fp_number(rng, fmt, 0);
    // shift to exponent e
    Rational v = abs(to_rational(x, fmt)) * pow_rational(fmt.base, e - *x.exponent());
    return round(v, fmt);
  };
  for (int i = 0; i < 10000; ++i) {
    FpFormat fmt{i % 3 == 0 ? 2ul : 10ul, static_cast<unsigned>(gen::uniform(rng, 1, 4)), gen::tie_rule(rng)};
    std::int64_t delta = static_cast<std::int64_t>(gen::uniform(rng, 1, 6));
    std::int64_t eta = static_cast<std::int64_t>(gen::uniform(rng, 1, 6));
    std::int64_t e0 = static_cast<std::int64_t>(gen::uniform(rng, 0, 40)) - 20;
    auto near = [&](std::int64_t e, std::int64_t spread) {
      return e + static_cast<std::int64_t>(gen::uniform(rng, 0, 2 * spread)) - spread;
    };
    FpNumber x = positive(fmt, e0);
    FpNumber x1 = positive(fmt, near(e0, delta + 1));
    FpNumber x2 = positive(fmt, near(*x1.exponent(), eta + 1));
    Rational r = to_rational(x, fmt) / to_rational(x1, fmt);
    std::string ctx = render(x, fmt) + " " + render(x1, fmt) + " " + render(x2, fmt) + " b=" +
                      std::to_string(fmt.base) + " delta=" + std::to_string(delta) + " eta=" + std::to_string(eta);
    // (1)
    if (is_close(x, x1, delta)) {
      ++fired[0];
      if (r < pow_rational(fmt.base, -delta - 1) || r > pow_rational(fmt.base, delta + 1)) o.fail("(1) " + ctx);
    }
    // (2)
    if (r >= pow_rational(fmt.base, -delta) && r <= pow_rational(fmt.base, delta)) {
      ++fired[1];
      if (!is_close(x, x1, delta + 2)) o.fail("(2) " + ctx);
    }
    // (3)
    if (is_close(x, x1, delta) && is_close(x1, x2, eta)) {
      ++fired[2];
      if (!is_close(x, x2, delta + eta + 4)) o.fail("(3) " + ctx);
    }
  }
  o.detail = "1e4 samples; hypotheses held " + std::to_string(fired[0]) + "/" + std::to_string(fired[1]) + "/" +
             std::to_string(fired[2]) + " times";
  for (int k = 0; k < 3; ++k) {
    if (fired[k] < 1000) o.fail("property (" + std::to_string(k + 1) + ") rarely exercised");
  }
  return o;
}

// 4. Pseudo-periodicity on random non-negative systems.
Outcome pseudo_periodicity() {
  Outcome o;
  g_systems.clear();
  DetectionOptions opts;
  opts.cap = 100000;
  std::uint64_t max_start = 0, max_period = 0;
  std::size_t idx = 0;
  for (const Lds& lds : criterion4_systems()) {
    ++idx;
    std::string ctx = "system " + std::to_string(idx) + " d=" + std::to_string(lds.dim()) +
                      " p=" + std::to_string(lds.format().precision);
    Certificate cert;
    try {
      cert = assemble_certificate(lds, opts);
    } catch (const std::exception& e) {
      o.fail(ctx + ": " + e.what());
      continue;
    }
    if (!verify_certificate(lds, cert, 3)) o.fail(ctx + ": verify_certificate(k=3) failed");
    max_start = std::max(max_start, cert.start);
    max_period = std::max(max_period, cert.period);
    // uniform growth per blown-up component
    PhasedLds ph = blowup(lds);
    auto dec = scc_decompose(ph.lds());
    auto pts = orbit(lds, cert.start + cert.period);
    for (std::size_t c = 0; c < dec.components.size(); ++c) {
      std::set<std::int64_t> rates;
      for (auto s : dec.components[c]) {
        std::size_t q = s / ph.phases();
        std::uint64_t phase = s % ph.phases();
        for (std::uint64_t t = cert.start; t < cert.start + cert.period; ++t) {
          if (t % ph.phases() != phase || pts[t][q].is_zero()) continue;
          const Growth& g = cert.growth_at(q, t);
          if (!g) o.fail(ctx + ": nonzero coordinate with -inf growth");
          else rates.insert(*g);
        }
      }
      if (rates.size() > 1) o.fail(ctx + ": component " + std::to_string(c) + " has several growth rates");
    }
    g_systems.push_back({lds, cert});
  }
  o.detail = std::to_string(g_systems.size()) + "/100 certified; max N=" + std::to_string(max_start) +
             " max T=" + std::to_string(max_period);
  return o;
}

// 5. Hitting sets against simulation.
Outcome hitting_sets() {
  Outcome o;
  gen::Rng rng(5005);
  int members = 0, checked = 0;
  for (int i = 0; i < 50; ++i) {
    Lds lds = gen::nonneg_lds(rng);
    Polynomial p = gen::polynomial(rng, lds.dim(), 3);
    Relation rel = static_cast<Relation>(gen::uniform(rng, 0, 2));
    Formula y = Formula::atom(p, rel);
    std::string ctx = "pair " + std::to_string(i) + ": " + to_string(y);
    try {
      Certificate cert = assemble_certificate(lds);
      SemiLinearSet z = hitting_set(y, lds, cert);
      std::uint64_t horizon = cert.start + 5 * cert.period;
      auto pts = oracle::orbit(lds, horizon);
      for (std::uint64_t t = 0; t <= horizon; ++t) {
        bool want = evaluate(y, pts[t], lds.format());
        ++checked;
        members += want;
        if (z.member(t) != want) {
          o.fail(ctx + " differs at t=" + std::to_string(t));
          break;
        }
      }
    } catch (const std::exception& e) {
      o.fail(ctx + ": " + e.what());
    }
  }
  o.detail = "50 pairs, " + std::to_string(checked) + " times checked, " + std::to_string(members) + " hits";
  return o;
}

// 6. Characteristic words and lasso acceptance.
Outcome lasso_buchi() {
  Outcome o;
  gen::Rng rng(6006);
  int letters = 0;
  for (int i = 0; i < 100; ++i) {
    Lds lds = gen::nonneg_lds(rng);
    std::vector<Formula> targets;
    std::size_t k = gen::uniform(rng, 1, 3);
    for (std::size_t j = 0; j < k; ++j) {
      targets.push_back(
          Formula::atom(gen::polynomial(rng, lds.dim(), 2), static_cast<Relation>(gen::uniform(rng, 0, 2))));
    }
    try {
      Certificate cert = assemble_certificate(lds);
      LassoWord w = characteristic_word(lds, targets, cert);
      std::size_t horizon = w.prefix.size() + 5 * w.cycle.size();
      auto pts = oracle::orbit(lds, horizon);
      for (std::size_t t = 0; t <= horizon; ++t) {
        ++letters;
        if (w.at(t) != oracle::letter_at(targets, pts[t], lds.format())) {
          o.fail("system " + std::to_string(i) + ": letter differs at t=" + std::to_string(t));
          break;
        }
      }
    } catch (const std::exception& e) {
      o.fail("system " + std::to_string(i) + ": " + e.what());
    }
  }
  int accepted = 0;
  for (int i = 0; i < 100; ++i) {
    unsigned alphabet = static_cast<unsigned>(gen::uniform(rng, 1, 3));
    BuchiAutomaton b = gen::buchi(rng, 6, alphabet);
    for (int j = 0; j < 20; ++j) {
      LassoWord w = gen::lasso(rng, alphabet, 5, 5);
      bool got = buchi_accepts_lasso(b, w);
      accepted += got;
      if (got != oracle::buchi_accepts(b, w)) o.fail("automaton " + std::to_string(i) + " on " + render(w));
    }
  }
  o.detail = std::to_string(letters) + " letters checked; 2000 lassos, " + std::to_string(accepted) + " accepted";
  if (accepted < 100 || accepted > 1900) o.fail("acceptance too one-sided to be informative");
  return o;
}

std::uint64_t machine_run_length(const MinskyMachine& m, std::uint64_t bound, bool& halted) {
  MinskyConfig c;
  for (std::uint64_t s = 0; s < bound; ++s) {
    if (is_halted(m, c)) {
      halted = true;
      return s;
    }
    c = machine_step(m, c);
  }
  halted = is_halted(m, c);
  return bound;
}

// 7. Compiled Minsky machines.
Outcome minsky_reduction() {
  Outcome o;
  int halting = 0, looping = 0;
  for (const auto& cm : acceptance::minsky_corpus()) {
    MinskyMachine m = parse_minsky(cm.text);
    std::uint64_t bound = cm.halts ? 200 : 1000;
    bool halted = false;
    std::uint64_t s = machine_run_length(m, bound, halted);
    if (halted != cm.halts) {
      o.fail(cm.name + ": corpus entry mislabelled");
      continue;
    }
    for (TieRule tie : cm.halts ? std::vector<TieRule>(std::begin(kTies), std::end(kTies))
                                : std::vector<TieRule>{TieRule::HalfAwayFromZero}) {
      CosimReport r = cosimulate(m, compile_minsky(m, tie), bound);
      std::string ctx = cm.name + " (" + to_string(tie) + ")";
      if (!r.agreed) o.fail(ctx + ": " + r.message);
      if (!r.boundary_mantissas_ok) o.fail(ctx + ": boundary mantissa outside {0, 0.1}");
      if (cm.halts) {
        if (!r.halted || r.machine_steps != s) o.fail(ctx + ": halting step mismatch");
        if (r.zero_time != 4 * s + 4) o.fail(ctx + ": zero vector not at LDS step " + std::to_string(4 * s + 4));
      } else {
        if (r.halted || r.zero_time) o.fail(ctx + ": zero vector within bound");
        if (r.machine_steps != bound) o.fail(ctx + ": stopped early");
      }
    }
    (cm.halts ? halting : looping)++;
  }
  o.detail = std::to_string(halting) + " halting machines (x4 tie rules), " + std::to_string(looping) +
             " loops to 1000 steps";
  if (halting < 10 || looping < 3) o.fail("corpus too small");
  return o;
}

// 8. Certified point reachability against bounded scans.
Outcome point_reachability() {
  Outcome o;
  if (g_systems.size() != 100) {
    o.fail("needs the 100 certified systems of criterion 4 (only " + std::to_string(g_systems.size()) + ")");
    return o;
  }
  gen::Rng rng(8008);
  const std::uint64_t bound = 10000;
  int positive = 0, negative = 0, negative_reached = 0, beyond = 0;
  // A scan to `bound` steps must see exactly the certified hits at or before the bound.
  auto agrees = [&](const ReachResult& c, const ReachResult& b) {
    if (c.status == ReachStatus::Reached && c.step <= bound) return b == c;
    return b.status == ReachStatus::BoundExhausted;
  };
  for (std::size_t i = 0; i < g_systems.size(); ++i) {
    const auto& [lds, cert] = g_systems[i];
    const FpFormat& fmt = lds.format();
    auto pts = orbit(lds, cert.start + 3 * cert.period + 20);
    for (int k = 0; k < 2; ++k) {
      const FpVector& x = pts[gen::uniform(rng, 0, pts.size() - 1)];
      std::vector<Rational> y;
      for (const auto& v : x) y.push_back(to_rational(v, fmt));
      std::string ctx = "system " + std::to_string(i + 1);
      ReachResult c = point_reach_with(lds, cert, y);
      ReachResult b = point_reach_bounded(lds, y, bound);
      ++positive;
      if (c.status == ReachStatus::Reached && c.step > bound) ++beyond;
      if (c.status != ReachStatus::Reached || !agrees(c, b)) {
        o.fail(ctx + " orbit target: certified " + to_string(c) + ", bounded " + to_string(b));
      }
      // one ulp up in a nonzero coordinate
      std::vector<std::size_t> nz;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (!x[j].is_zero()) nz.push_back(j);
      }
      if (nz.empty()) continue;
      std::size_t j = nz[gen::uniform(rng, 0, nz.size() - 1)];
      y[j] += pow_rational(fmt.base, *x[j].exponent() - static_cast<std::int64_t>(fmt.precision));
      c = point_reach_with(lds, cert, y);
      b = point_reach_bounded(lds, y, bound);
      ++negative;
      if (c.status == ReachStatus::Reached) ++negative_reached;
      if (!agrees(c, b)) o.fail(ctx + " perturbed target: certified " + to_string(c) + ", bounded " + to_string(b));
    }
  }
  o.detail = std::to_string(positive) + " orbit targets (" + std::to_string(beyond) + " first hit after step " +
             std::to_string(bound) + "), " + std::to_string(negative) + " perturbed (" +
             std::to_string(negative_reached) + " of them on the orbit anyway)";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {1, "rounding axioms", 60, rounding_axioms},
      {2, "filter gadget table", 30, gadget_table},
      {3, "closeness calculus", 30, closeness},
      {4, "pseudo-periodicity certificates", 300, pseudo_periodicity},
      {5, "hitting sets vs simulation", 300, hitting_sets},
      {6, "characteristic words and Buchi lassos", 60, lasso_buchi},
      {7, "Minsky reduction co-simulation", 120, minsky_reduction},
      {8, "certified vs bounded reachability", 120, point_reachability},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  if (only.count(8)) only.insert(4);

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("uncaught: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      out.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    }
    std::printf("[%s] criterion %d: %s (%.2fs) %s\n", out.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                out.detail.c_str());
    for (const auto& f : out.failures) std::printf("       %s\n", f.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

#include "fpmc/reach.hpp"

#include <optional>

namespace fpmc {

std::string to_string(const ReachResult& r) {
  switch (r.status) {
    case ReachStatus::Reached: return "REACHED(" + std::to_string(r.step) + ")";
    case ReachStatus::Never: return "NEVER";
    case ReachStatus::BoundExhausted: return "BOUND_EXHAUSTED";
  }
  return "?";
}

namespace {

std::optional<FpVector> exact_target(const Lds& lds, const std::vector<Rational>& y) {
  if (y.size() != lds.dim()) throw std::invalid_argument("target dimension does not match system");
  FpVector out;
  for (const auto& q : y) {
    FpNumber r = round(q, lds.format());
    if (to_rational(r, lds.format()) != q) return std::nullopt;
    out.push_back(r);
  }
  return out;
}

}  // namespace

ReachResult point_reach_with(const Lds& lds, const Certificate& cert, const std::vector<Rational>& y) {
  auto target = exact_target(lds, y);
  if (!target) return {ReachStatus::Never, 0};
  OrbitCache cache(lds);
  for (std::uint64_t t = 0; t < cert.start; ++t) {
    if (cache.at(t) == *target) return {ReachStatus::Reached, t};
  }
  std::optional<std::uint64_t> best;
  for (std::uint64_t r = 0; r < cert.period; ++r) {
    const std::uint64_t t0 = cert.start + r;
    const FpVector& x = cert.snapshot.empty() ? cache.at(t0) : cert.snapshot[r];
    // Constraints on k for x(t0 + kT) = target.
    std::optional<std::int64_t> forced;
    bool possible = true;
    for (std::size_t j = 0; j < x.size() && possible; ++j) {
      const FpNumber& want = (*target)[j];
      const Growth& g = cert.growth_at(j, t0);
      if (!g || x[j].is_zero()) {
        possible = want.is_zero() && x[j].is_zero();
        continue;
      }
      if (want.is_zero() || want.sign() != x[j].sign() || want.digits() != x[j].digits()) {
        possible = false;
        continue;
      }
      std::int64_t diff = want.raw_exponent() - x[j].raw_exponent();
      if (*g == 0) {
        possible = diff == 0;
        continue;
      }
      if (diff % *g != 0 || diff / *g < 0) {
        possible = false;
        continue;
      }
      std::int64_t k = diff / *g;
      if (forced && *forced != k) possible = false;
      forced = k;
    }
    if (!possible) continue;
    std::uint64_t t = t0 + static_cast<std::uint64_t>(forced.value_or(0)) * cert.period;
    if (!best || t < *best) best = t;
  }
  if (best) return {ReachStatus::Reached, *best};
  return {ReachStatus::Never, 0};
}

ReachResult point_reach_certified(const Lds& lds, const std::vector<Rational>& y, const DetectionOptions& opts) {
  if (!lds.non_negative()) throw NegativeSystemError();
  return point_reach_with(lds, assemble_certificate(lds, opts), y);
}

ReachResult point_reach_bounded(const Lds& lds, const std::vector<Rational>& y, std::uint64_t max_steps) {
  auto target = exact_target(lds, y);
  if (!target) return {ReachStatus::BoundExhausted, 0};
  FpVector x = lds.initial_point();
  for (std::uint64_t t = 0;; ++t) {
    if (x == *target) return {ReachStatus::Reached, t};
    if (t == max_steps) break;
    x = lds.step(x);
  }
  return {ReachStatus::BoundExhausted, 0};
}

}  // namespace fpmc

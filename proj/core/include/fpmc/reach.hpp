#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpmc/periodicity.hpp"

namespace fpmc {

enum class ReachStatus { Reached, Never, BoundExhausted };

struct ReachResult {
  ReachStatus status = ReachStatus::Never;
  std::uint64_t step = 0;  // first hitting time when Reached

  bool operator==(const ReachResult&) const = default;
};

std::string to_string(const ReachResult& r);

/// Decides whether y is on the rounded orbit, using a pseudo-period
/// certificate. Throws NegativeSystemError for systems with negative entries.
ReachResult point_reach_certified(const Lds& lds, const std::vector<Rational>& y, const DetectionOptions& opts = {});

/// Same decision against a given verified certificate.
ReachResult point_reach_with(const Lds& lds, const Certificate& cert, const std::vector<Rational>& y);

/// Scans t = 0..max_steps; BoundExhausted if y is not met.
ReachResult point_reach_bounded(const Lds& lds, const std::vector<Rational>& y, std::uint64_t max_steps);

}  // namespace fpmc

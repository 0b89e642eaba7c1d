#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpmc/lds.hpp"
#include "fpmc/structure.hpp"

namespace fpmc {

/// Growth exponent over one period; std::nullopt is the -inf marker
/// (the coordinate is zero from the certificate start on).
using Growth = std::optional<std::int64_t>;

/// Witness that x(t + T)_j = b^growth * x(t)_j for every t >= start.
///
/// The growth of coordinate j may depend on t mod `phases` (a divisor of
/// `period`); `growth[j][t % phases]` applies at start time t.
struct Certificate {
  std::uint64_t start = 0;
  std::uint64_t period = 1;
  std::uint64_t phases = 1;
  std::vector<std::vector<Growth>> growth;
  std::vector<FpVector> snapshot;  // x(start), ..., x(start + period - 1)
  bool verified = false;

  std::size_t dim() const { return growth.size(); }
  const Growth& growth_at(std::size_t j, std::uint64_t t) const { return growth[j][t % phases]; }
  /// The single growth valid at every phase, if there is one. Zero phases
  /// accept any value, so only nonzero phases have to agree.
  std::optional<Growth> reconciled(std::size_t j) const;
  /// Collapses to phases = 1 when every coordinate reconciles.
  void collapse_phases();

  bool operator==(const Certificate&) const = default;
};

/// Per-component result: for t >= start, every state of the component
/// scales by b^growth over `period` steps (growth nullopt: stays zero).
struct ComponentCertificate {
  std::uint64_t start = 0;
  std::uint64_t period = 1;
  Growth growth;
};

struct FeederCertificate {
  std::vector<std::size_t> states;  // phased state indices
  ComponentCertificate cert;
};

struct DetectionOptions {
  std::uint64_t cap = 100000;  // largest orbit index ever simulated
  PeriodMode mode = PeriodMode::Gcd;
  unsigned verify_periods = 3;
};

class DetectionCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when certification is requested for a system with a negative entry.
class NegativeSystemError : public std::invalid_argument {
 public:
  NegativeSystemError();
};

/// Certificate for a phased component without feeders, found by repeating
/// normalized signatures (equal mantissas and equal exponent offsets).
ComponentCertificate detect_top_scc(const PhasedLds& phased, const std::vector<std::size_t>& component,
                                    const DetectionOptions& opts = {});

/// Certificate for a component whose feeders are already certified. A repeat
/// is accepted only once it is proven that slower feeders can no longer move
/// any rounded value and that no feeder grows faster.
ComponentCertificate detect_lower_scc(const PhasedLds& phased, const std::vector<std::size_t>& component,
                                      const std::vector<FeederCertificate>& feeders,
                                      const DetectionOptions& opts = {});

struct Influence {
  bool will_influence = false;
  /// Step at which a difference is observed, or an upper bound on it.
  std::uint64_t at = 0;
  bool bound_only = false;
};

/// Compares the true orbit of `component` from time t against the component
/// simulated with its feeders removed.
Influence will_influence_again(const PhasedLds& phased, const std::vector<std::size_t>& component,
                               const std::vector<FeederCertificate>& feeders, std::uint64_t t,
                               const DetectionOptions& opts = {});

/// Whole-system certificate in original coordinates, verified before return.
Certificate assemble_certificate(const Lds& lds, const DetectionOptions& opts = {});
Certificate assemble_certificate(const PhasedLds& phased, const DetectionOptions& opts = {});

/// Checks x(t + T) = b^growth x(t) for start <= t <= start + k T, and the
/// snapshot if present.
bool verify_certificate(const Lds& lds, const Certificate& cert, unsigned k);

/// Largest exponent spread among same-phase nonzero states of one component
/// and among coordinates sharing a growth rate, over [start, start + periods*T).
struct ClosenessBound {
  std::int64_t beta = 0;
  std::int64_t eta = 0;
  std::uint64_t stabilization = 0;
};

ClosenessBound measure_closeness(const Lds& lds, const Certificate& cert, unsigned periods = 5);

}  // namespace fpmc

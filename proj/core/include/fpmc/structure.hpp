#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fpmc/lds.hpp"

namespace fpmc {

/// Successor lists. For a matrix M there is an edge j -> i iff M[i][j] != 0.
using Digraph = std::vector<std::vector<std::size_t>>;

Digraph matrix_graph(const RationalMatrix& m);

enum class PeriodMode {
  Gcd,              // gcd of cycle lengths (the usual SCC period)
  LcmSimpleCycles,  // lcm of all simple cycle lengths; exponential, tiny graphs only
};

struct SccDecomposition {
  /// Components in topological order: every edge between two components
  /// goes from a lower index to a higher one.
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> component_of;
  /// feeders[c]: components with an edge into c, ascending.
  std::vector<std::vector<std::size_t>> feeders;
  std::vector<std::uint64_t> periods;
  /// False for a single vertex without a self-loop.
  std::vector<bool> cyclic;
};

SccDecomposition scc_decompose(const Digraph& g, PeriodMode mode = PeriodMode::Gcd);
SccDecomposition scc_decompose(const Lds& lds, PeriodMode mode = PeriodMode::Gcd);

/// Period of a strongly connected vertex set; 1 for an acyclic singleton.
std::uint64_t scc_period(const Digraph& g, const std::vector<std::size_t>& component,
                         PeriodMode mode = PeriodMode::Gcd);

/// Lengths of all simple cycles inside `component` (Johnson-style enumeration).
std::vector<std::size_t> simple_cycle_lengths(const Digraph& g, const std::vector<std::size_t>& component);

/// The P-fold phase expansion: state (q, i) has index q * P + i, and
/// M'[(q, i+1 mod P), (q', i)] = M[q][q'], x'(q, 0) = x_q.
class PhasedLds {
 public:
  PhasedLds(const Lds& base, std::uint64_t phases);

  const Lds& base() const { return base_; }
  const Lds& lds() const { return lds_; }
  std::uint64_t phases() const { return phases_; }
  std::size_t base_dim() const { return base_.dim(); }
  std::size_t index(std::size_t q, std::uint64_t phase) const { return q * phases_ + phase; }
  std::size_t state_of(std::size_t idx) const { return idx / phases_; }
  std::uint64_t phase_of(std::size_t idx) const { return idx % phases_; }

  /// Reads the original coordinates out of a phased vector at step t.
  FpVector project(const FpVector& phased, std::size_t t) const;
  /// Embeds an original vector at step t (all other phases zero).
  FpVector embed(const FpVector& original, std::size_t t) const;

 private:
  Lds base_;
  std::uint64_t phases_;
  Lds lds_;
};

/// P = lcm of the component periods of `lds`.
std::uint64_t blowup_factor(const Lds& lds, PeriodMode mode = PeriodMode::Gcd);
PhasedLds blowup(const Lds& lds, PeriodMode mode = PeriodMode::Gcd);

/// Smallest multiple C of P such that the boolean C-th power of the matrix
/// restricted to `component` (a strongly connected set of phased states) links
/// every pair of same-phase states. 0 for an acyclic singleton. Throws
/// std::runtime_error if no such C <= P * (|component|^2 + 1) exists.
std::uint64_t positivity_index(const PhasedLds& phased, const std::vector<std::size_t>& component);

}  // namespace fpmc

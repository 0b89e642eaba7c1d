#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fpmc/fpnum.hpp"

namespace fpmc {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// A square rational matrix, an initial vector and the rounding format.
class Lds {
 public:
  /// Throws std::invalid_argument on shape mismatch or an invalid format.
  Lds(RationalMatrix matrix, std::vector<Rational> init, FpFormat fmt);

  std::size_t dim() const { return init_.size(); }
  const RationalMatrix& matrix() const { return matrix_; }
  const Rational& entry(std::size_t i, std::size_t j) const { return matrix_[i][j]; }
  const std::vector<Rational>& init() const { return init_; }
  const FpFormat& format() const { return fmt_; }
  bool non_negative() const { return non_negative_; }

  /// Componentwise rounding of the initial vector (the orbit at t = 0).
  FpVector initial_point() const;

  /// round(M v): the product is exact, each component rounded once.
  /// Summands far below the leading ones are skipped when a bound shows
  /// they cannot change the first p+1 digits.
  FpVector step(const FpVector& v) const;
  /// Same result, always summing every term.
  FpVector step_exact(const FpVector& v) const;

  bool operator==(const Lds& o) const {
    return matrix_ == o.matrix_ && init_ == o.init_ && fmt_ == o.fmt_;
  }

 private:
  struct Term {
    std::size_t col;
    Integer numer;  // entry * row_den
  };
  struct Row {
    std::vector<Term> terms;
    Integer den = 1;
    std::int64_t log_total = 0;  // ceil log_b of the sum of |numer|
  };

  RationalMatrix matrix_;
  std::vector<Rational> init_;
  FpFormat fmt_;
  bool non_negative_ = true;
  std::vector<Row> rows_;

  FpNumber row_exact(const Row& row, const FpVector& v) const;
  std::optional<FpNumber> row_fast(const Row& row, const FpVector& v) const;
};

/// x(0), ..., x(horizon).
std::vector<FpVector> orbit(const Lds& lds, std::size_t horizon);

/// Lazily extended orbit with random access.
class OrbitCache {
 public:
  explicit OrbitCache(const Lds& lds);

  const FpVector& at(std::size_t t);
  std::size_t computed() const { return points_.size(); }
  const Lds& lds() const { return *lds_; }

 private:
  const Lds* lds_;
  std::vector<FpVector> points_;
};

}  // namespace fpmc

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpmc/numeric.hpp"

namespace fpmc {

enum class TieRule {
  HalfAwayFromZero,
  HalfToEven,
  HalfUp,    // toward +inf
  HalfDown,  // toward -inf
};

std::string to_string(TieRule rule);
TieRule parse_tie_rule(std::string_view name);

struct FpFormat {
  unsigned long base = 10;
  unsigned precision = 1;
  TieRule tie = TieRule::HalfAwayFromZero;

  /// Throws std::invalid_argument unless base >= 2 and precision >= 1.
  void validate() const;
  bool operator==(const FpFormat&) const = default;
};

/// A p-digit base-b floating-point value sign * 0.d1...dp * b^e.
///
/// The mantissa is stored as the integer d1...dp (in [b^(p-1), b^p)), so the
/// value is sign * digits * b^(e - p). Zero has no exponent.
class FpNumber {
 public:
  FpNumber() = default;

  /// Builds a normalized nonzero value; throws std::invalid_argument if
  /// `digits` is out of range for the format.
  static FpNumber from_parts(int sign, Integer digits, std::int64_t exponent, const FpFormat& fmt);

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  const Integer& digits() const { return digits_; }
  /// std::nullopt stands for the -inf exponent of zero.
  std::optional<std::int64_t> exponent() const {
    if (sign_ == 0) return std::nullopt;
    return exponent_;
  }
  /// Exponent of a nonzero value without the optional wrapper.
  std::int64_t raw_exponent() const { return exponent_; }

  /// Mantissa as an exact rational in {0} U [1/b, 1).
  Rational mantissa(const FpFormat& fmt) const;

  /// Multiplies by b^k exactly (no rounding involved).
  FpNumber scaled(std::int64_t k) const;
  FpNumber negated() const;

  bool operator==(const FpNumber& o) const {
    return sign_ == o.sign_ && (sign_ == 0 || (exponent_ == o.exponent_ && digits_ == o.digits_));
  }

  std::size_t hash() const;

 private:
  int sign_ = 0;
  Integer digits_ = 0;
  std::int64_t exponent_ = 0;
};

using FpVector = std::vector<FpNumber>;

/// Nearest p-digit value, decided by the first p+1 significant digits of |x|.
FpNumber round(const Rational& x, const FpFormat& fmt);

/// round(num / den * b^shift) without building the rational. den > 0.
FpNumber round_scaled(const Integer& num, const Integer& den, std::int64_t shift, const FpFormat& fmt);

Rational to_rational(const FpNumber& x, const FpFormat& fmt);

/// |exp(x) - exp(y)| < delta; zero is close only to zero.
bool is_close(const FpNumber& x, const FpNumber& y, std::int64_t delta);

/// `0`, `0.3e2`, `-0.125e-1` (mantissa digits in the format's base).
std::string render(const FpNumber& x, const FpFormat& fmt);

/// Accepts the rendered form, `<digits>[.<digits>]e<exp>` in the format's
/// base, and plain rational literals. Inexact values are rounded unless
/// `exact_only` is set, in which case a ParseError is thrown.
FpNumber parse_fp(std::string_view text, const FpFormat& fmt, bool exact_only = false);

/// True if x is already a p-digit value.
bool is_representable(const Rational& x, const FpFormat& fmt);

}  // namespace fpmc

template <>
struct std::hash<fpmc::FpNumber> {
  std::size_t operator()(const fpmc::FpNumber& x) const { return x.hash(); }
};

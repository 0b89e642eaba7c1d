#pragma once

// Exact integer/rational helpers shared by every module. All arithmetic in
// the library goes through GMP; there is no binary floating point anywhere.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fpmc {

using Integer = mpz_class;
using Rational = mpq_class;

/// Thrown for malformed textual input. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// b^k for k >= 0.
Integer pow_int(unsigned long base, std::uint64_t k);

/// b^k as an exact rational; k may be negative.
Rational pow_rational(unsigned long base, std::int64_t k);

/// Largest k with base^k <= q. Requires q > 0.
std::int64_t floor_log(unsigned long base, const Rational& q);

/// Smallest k with q <= base^k. Requires q > 0.
std::int64_t ceil_log(unsigned long base, const Rational& q);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Throws std::overflow_error if the result does not fit in 64 bits.
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

/// Parses an exact rational literal: `-12`, `3/4`, `1.25`, `+7`.
/// Decimal literals are read in base 10.
Rational parse_rational(std::string_view text);

/// Canonical textual form: `n` or `n/d`.
std::string to_string(const Rational& q);

}  // namespace fpmc

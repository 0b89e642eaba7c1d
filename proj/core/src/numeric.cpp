#include "fpmc/numeric.hpp"

#include <cctype>
#include <limits>

namespace fpmc {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line == 0 ? what
                                   : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

Integer pow_int(unsigned long base, std::uint64_t k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, k);
  return r;
}

Rational pow_rational(unsigned long base, std::int64_t k) {
  if (k >= 0) return Rational(pow_int(base, static_cast<std::uint64_t>(k)));
  Rational r(Integer(1), pow_int(base, static_cast<std::uint64_t>(-k)));
  return r;
}

namespace {

// Compares q against base^k without materializing a rational.
int compare_with_power(unsigned long base, const Rational& q, std::int64_t k) {
  if (k >= 0) {
    Integer rhs = q.get_den() * pow_int(base, static_cast<std::uint64_t>(k));
    return cmp(q.get_num(), rhs);
  }
  Integer lhs = q.get_num() * pow_int(base, static_cast<std::uint64_t>(-k));
  return cmp(lhs, q.get_den());
}

}  // namespace

std::int64_t floor_log(unsigned long base, const Rational& q) {
  if (sgn(q) <= 0) throw std::domain_error("floor_log of a non-positive value");
  // sizeinbase is exact or one too large, so the estimate is within 1-2.
  auto num_digits = static_cast<std::int64_t>(mpz_sizeinbase(q.get_num_mpz_t(), static_cast<int>(base)));
  auto den_digits = static_cast<std::int64_t>(mpz_sizeinbase(q.get_den_mpz_t(), static_cast<int>(base)));
  std::int64_t k = num_digits - den_digits;
  while (compare_with_power(base, q, k) < 0) --k;
  while (compare_with_power(base, q, k + 1) >= 0) ++k;
  return k;
}

std::int64_t ceil_log(unsigned long base, const Rational& q) {
  std::int64_t k = floor_log(base, q);
  return compare_with_power(base, q, k) == 0 ? k : k + 1;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  std::uint64_t g = gcd_u64(a, b);
  std::uint64_t q = a / g;
  if (q > std::numeric_limits<std::uint64_t>::max() / b) {
    throw std::overflow_error("lcm overflows 64 bits");
  }
  return q * b;
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return ParseError("invalid rational literal '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  std::string_view body = text.substr(pos);
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    Integer d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    value = Rational(Integer{std::string(num)}, d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) throw fail();
    Integer n{std::string(whole.empty() ? "0" : whole) + std::string(frac)};
    value = Rational(n, pow_int(10, frac.size()));
  } else {
    if (!all_digits(body)) throw fail();
    value = Rational(Integer{std::string(body)});
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace fpmc

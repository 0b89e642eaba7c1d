#include "fpmc/fpnum.hpp"

#include <cctype>
#include <stdexcept>

namespace fpmc {

std::string to_string(TieRule rule) {
  switch (rule) {
    case TieRule::HalfAwayFromZero: return "half-away-from-zero";
    case TieRule::HalfToEven: return "half-to-even";
    case TieRule::HalfUp: return "half-up";
    case TieRule::HalfDown: return "half-down";
  }
  return "?";
}

TieRule parse_tie_rule(std::string_view name) {
  if (name == "half-away-from-zero" || name == "away") return TieRule::HalfAwayFromZero;
  if (name == "half-to-even" || name == "even") return TieRule::HalfToEven;
  if (name == "half-up" || name == "up") return TieRule::HalfUp;
  if (name == "half-down" || name == "down") return TieRule::HalfDown;
  throw ParseError("unknown tie rule '" + std::string(name) + "'");
}

void FpFormat::validate() const {
  if (base < 2) throw std::invalid_argument("base must be >= 2");
  if (base > 36) throw std::invalid_argument("base must be <= 36");
  if (precision < 1) throw std::invalid_argument("precision must be >= 1");
}

FpNumber FpNumber::from_parts(int sign, Integer digits, std::int64_t exponent, const FpFormat& fmt) {
  FpNumber r;
  if (sign == 0) return r;
  Integer hi = pow_int(fmt.base, fmt.precision);
  Integer lo = pow_int(fmt.base, fmt.precision - 1);
  if (digits < lo || digits >= hi) throw std::invalid_argument("mantissa digits out of range");
  r.sign_ = sign > 0 ? 1 : -1;
  r.digits_ = std::move(digits);
  r.exponent_ = exponent;
  return r;
}

Rational FpNumber::mantissa(const FpFormat& fmt) const {
  if (sign_ == 0) return 0;
  Rational m(digits_, pow_int(fmt.base, fmt.precision));
  m.canonicalize();
  return m;
}

FpNumber FpNumber::scaled(std::int64_t k) const {
  FpNumber r = *this;
  if (sign_ != 0) r.exponent_ += k;
  return r;
}

FpNumber FpNumber::negated() const {
  FpNumber r = *this;
  r.sign_ = -sign_;
  return r;
}

std::size_t FpNumber::hash() const {
  if (sign_ == 0) return 0x9e3779b97f4a7c15ULL;
  std::size_t h = std::hash<std::int64_t>{}(exponent_);
  h ^= mpz_get_ui(digits_.get_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::size_t>(sign_ + 2) * 0x100000001b3ULL;
  return h;
}

namespace {

// Rounds a truncated (p+1)-digit integer `t` in [b^p, b^(p+1)) to p digits.
// Returns the p-digit head and whether the exponent must grow by one.
std::pair<Integer, bool> round_head(const Integer& t, int sign, const FpFormat& fmt) {
  Integer head;
  Integer last;
  mpz_fdiv_qr_ui(head.get_mpz_t(), last.get_mpz_t(), t.get_mpz_t(), fmt.base);
  unsigned long twice = 2 * last.get_ui();
  bool up = false;
  if (twice > fmt.base) {
    up = true;
  } else if (twice == fmt.base) {
    switch (fmt.tie) {
      case TieRule::HalfAwayFromZero: up = true; break;
      case TieRule::HalfToEven: up = mpz_odd_p(head.get_mpz_t()) != 0; break;
      case TieRule::HalfUp: up = sign > 0; break;
      case TieRule::HalfDown: up = sign < 0; break;
    }
  }
  if (!up) return {head, false};
  head += 1;
  if (head == pow_int(fmt.base, fmt.precision)) return {pow_int(fmt.base, fmt.precision - 1), true};
  return {head, false};
}

}  // namespace

FpNumber round_scaled(const Integer& num, const Integer& den, std::int64_t shift, const FpFormat& fmt) {
  int sign = sgn(num);
  if (sign == 0) return FpNumber();
  Integer a = abs(num);
  Rational q(a, den);
  q.canonicalize();
  std::int64_t e = floor_log(fmt.base, q);
  // b^e <= q < b^(e+1); take the leading p+1 digits.
  std::int64_t k = static_cast<std::int64_t>(fmt.precision) - e;
  Integer t;
  if (k >= 0) {
    Integer n = a * pow_int(fmt.base, static_cast<std::uint64_t>(k));
    mpz_fdiv_q(t.get_mpz_t(), n.get_mpz_t(), den.get_mpz_t());
  } else {
    Integer d = den * pow_int(fmt.base, static_cast<std::uint64_t>(-k));
    mpz_fdiv_q(t.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
  }
  auto [head, carry] = round_head(t, sign, fmt);
  return FpNumber::from_parts(sign, std::move(head), e + 1 + shift + (carry ? 1 : 0), fmt);
}

FpNumber round(const Rational& x, const FpFormat& fmt) {
  return round_scaled(x.get_num(), x.get_den(), 0, fmt);
}

Rational to_rational(const FpNumber& x, const FpFormat& fmt) {
  if (x.is_zero()) return 0;
  Rational r = Rational(x.digits()) * pow_rational(fmt.base, x.raw_exponent() - static_cast<std::int64_t>(fmt.precision));
  return x.sign() < 0 ? Rational(-r) : r;
}

bool is_close(const FpNumber& x, const FpNumber& y, std::int64_t delta) {
  if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
  std::int64_t diff = x.raw_exponent() - y.raw_exponent();
  if (diff < 0) diff = -diff;
  return diff < delta;
}

bool is_representable(const Rational& x, const FpFormat& fmt) {
  return to_rational(round(x, fmt), fmt) == x;
}

std::string render(const FpNumber& x, const FpFormat& fmt) {
  if (x.is_zero()) return "0";
  std::string out = x.sign() < 0 ? "-0." : "0.";
  out += x.digits().get_str(static_cast<int>(fmt.base));
  out += "e" + std::to_string(x.raw_exponent());
  return out;
}

namespace {

int digit_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

// Parses `<digits>[.<digits>]` in `base` into an exact rational.
std::optional<Rational> parse_positional(std::string_view s, unsigned long base) {
  Integer n = 0;
  std::int64_t frac_digits = 0;
  bool seen_dot = false;
  bool any = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    int v = digit_value(c);
    if (v < 0 || static_cast<unsigned long>(v) >= base) return std::nullopt;
    n = n * base + v;
    any = true;
    if (seen_dot) ++frac_digits;
  }
  if (!any) return std::nullopt;
  return Rational(n) * pow_rational(base, -frac_digits);
}

}  // namespace

FpNumber parse_fp(std::string_view text, const FpFormat& fmt, bool exact_only) {
  if (text.empty()) throw ParseError("empty number");
  Rational value;
  auto e = text.rfind('e');
  auto E = text.rfind('E');
  if (E != std::string_view::npos && (e == std::string_view::npos || E > e)) e = E;
  bool positional = e != std::string_view::npos && text.find('/') == std::string_view::npos;
  if (positional) {
    std::string_view mant = text.substr(0, e);
    std::string_view expo = text.substr(e + 1);
    bool negative = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      negative = mant[0] == '-';
      mant.remove_prefix(1);
    }
    auto m = parse_positional(mant, fmt.base);
    if (!m) throw ParseError("invalid floating-point literal '" + std::string(text) + "'");
    std::int64_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoll(std::string(expo), &used);
      if (used != expo.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("invalid exponent in '" + std::string(text) + "'");
    }
    value = *m * pow_rational(fmt.base, k);
    if (negative) value = -value;
  } else {
    value = parse_rational(text);
  }
  FpNumber r = round(value, fmt);
  if (exact_only && to_rational(r, fmt) != value) {
    throw ParseError("value '" + std::string(text) + "' is not representable with " +
                     std::to_string(fmt.precision) + " digits");
  }
  return r;
}

}  // namespace fpmc

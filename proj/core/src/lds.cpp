#include "fpmc/lds.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace fpmc {

Lds::Lds(RationalMatrix matrix, std::vector<Rational> init, FpFormat fmt)
    : matrix_(std::move(matrix)), init_(std::move(init)), fmt_(fmt) {
  fmt_.validate();
  const std::size_t d = init_.size();
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
  if (matrix_.size() != d) throw std::invalid_argument("matrix row count does not match dimension");
  for (const auto& row : matrix_) {
    if (row.size() != d) throw std::invalid_argument("matrix is not square");
  }
  for (auto& row : matrix_) {
    for (auto& q : row) {
      q.canonicalize();
      if (sgn(q) < 0) non_negative_ = false;
    }
  }
  for (auto& q : init_) {
    q.canonicalize();
    if (sgn(q) < 0) non_negative_ = false;
  }

  rows_.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    Row& row = rows_[i];
    for (std::size_t j = 0; j < d; ++j) {
      if (sgn(matrix_[i][j]) != 0) mpz_lcm(row.den.get_mpz_t(), row.den.get_mpz_t(), matrix_[i][j].get_den_mpz_t());
    }
    for (std::size_t j = 0; j < d; ++j) {
      const Rational& q = matrix_[i][j];
      if (sgn(q) == 0) continue;
      row.terms.push_back({j, q.get_num() * (row.den / q.get_den())});
    }
    Integer total = 0;
    for (const Term& t : row.terms) total += abs(t.numer);
    if (sgn(total) > 0) row.log_total = ceil_log(fmt_.base, Rational(total));
  }
}

FpVector Lds::initial_point() const {
  FpVector v;
  v.reserve(init_.size());
  for (const auto& q : init_) v.push_back(round(q, fmt_));
  return v;
}

FpNumber Lds::row_exact(const Row& row, const FpVector& v) const {
  bool any = false;
  std::int64_t lowest = 0;
  for (const Term& t : row.terms) {
    const FpNumber& x = v[t.col];
    if (x.is_zero()) continue;
    lowest = any ? std::min(lowest, x.raw_exponent()) : x.raw_exponent();
    any = true;
  }
  if (!any) return FpNumber();
  Integer sum = 0;
  Integer term;
  for (const Term& t : row.terms) {
    const FpNumber& x = v[t.col];
    if (x.is_zero()) continue;
    term = t.numer * x.digits();
    std::int64_t gap = x.raw_exponent() - lowest;
    if (gap > 0) term *= pow_int(fmt_.base, static_cast<std::uint64_t>(gap));
    if (x.sign() < 0) sum -= term;
    else sum += term;
  }
  return round_scaled(sum, row.den, lowest - static_cast<std::int64_t>(fmt_.precision), fmt_);
}

// Splits the row at the first large exponent gap. With S the near sum, e its
// exponent and X = |S| b^(p-e) = n / m, the far terms add less than
// sum|numer| b^(far_max + p - e) / den to X, which stays below 1/m when
//   ceil_log(sum|numer|) + far_max + p - min(e, low_near) <= 0.
// Then floor(X) cannot move unless a far term has the opposite sign and X is
// an integer.
std::optional<FpNumber> Lds::row_fast(const Row& row, const FpVector& v) const {
  const auto p = static_cast<std::int64_t>(fmt_.precision);
  const std::int64_t margin = p + row.log_total + 1;
  std::int64_t hi = 0, lo = 0;
  std::size_t nonzero = 0;
  for (const Term& t : row.terms) {
    const FpNumber& x = v[t.col];
    if (x.is_zero()) continue;
    std::int64_t e = x.raw_exponent();
    hi = nonzero ? std::max(hi, e) : e;
    lo = nonzero ? std::min(lo, e) : e;
    ++nonzero;
  }
  if (nonzero < 2 || hi - lo <= margin) return std::nullopt;
  std::vector<std::int64_t> exps;
  exps.reserve(nonzero);
  for (const Term& t : row.terms) {
    if (!v[t.col].is_zero()) exps.push_back(v[t.col].raw_exponent());
  }
  std::sort(exps.begin(), exps.end(), std::greater<>());
  std::optional<std::int64_t> cut;  // near terms have exponent >= cut
  for (std::size_t k = 1; k < exps.size(); ++k) {
    if (exps[k - 1] - exps[k] > margin) {
      cut = exps[k - 1];
      break;
    }
  }
  if (!cut) return std::nullopt;

  std::int64_t low_near = *cut;
  std::int64_t far_max = 0;
  bool have_far = false;
  Integer near = 0;
  Integer term;
  int far_signs = 0;  // bit 0: some positive far term, bit 1: some negative
  for (const Term& t : row.terms) {
    const FpNumber& x = v[t.col];
    if (x.is_zero()) continue;
    int s = x.sign() * sgn(t.numer);
    if (x.raw_exponent() < *cut) {
      far_max = have_far ? std::max(far_max, x.raw_exponent()) : x.raw_exponent();
      have_far = true;
      far_signs |= s > 0 ? 1 : 2;
      continue;
    }
    term = t.numer * x.digits();
    std::int64_t gap = x.raw_exponent() - low_near;
    if (gap > 0) term *= pow_int(fmt_.base, static_cast<std::uint64_t>(gap));
    if (x.sign() < 0) near -= term;
    else near += term;
  }
  int near_sign = sgn(near);
  if (near_sign == 0) return std::nullopt;
  Rational mag(abs(near), row.den);
  mag.canonicalize();
  const std::int64_t e = floor_log(fmt_.base, mag) + low_near - p;
  // row.log_total bounds the far coefficients too
  if (row.log_total + far_max + p - std::min(e, low_near) > 0) return std::nullopt;
  const bool opposite = (far_signs & (near_sign > 0 ? 2 : 1)) != 0;
  if (opposite) {
    // X must not be an integer.
    Integer num = abs(near);
    Integer den = row.den;
    if (low_near >= e) num *= pow_int(fmt_.base, static_cast<std::uint64_t>(low_near - e));
    else den *= pow_int(fmt_.base, static_cast<std::uint64_t>(e - low_near));
    if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) return std::nullopt;
  }
  return round_scaled(near, row.den, low_near - p, fmt_);
}

FpVector Lds::step(const FpVector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("vector dimension does not match system");
  FpVector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    auto fast = row_fast(rows_[i], v);
    out[i] = fast ? std::move(*fast) : row_exact(rows_[i], v);
  }
  return out;
}

FpVector Lds::step_exact(const FpVector& v) const {
  if (v.size() != dim()) throw std::invalid_argument("vector dimension does not match system");
  FpVector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = row_exact(rows_[i], v);
  return out;
}

std::vector<FpVector> orbit(const Lds& lds, std::size_t horizon) {
  std::vector<FpVector> points;
  points.reserve(horizon + 1);
  points.push_back(lds.initial_point());
  for (std::size_t t = 1; t <= horizon; ++t) points.push_back(lds.step(points.back()));
  return points;
}

OrbitCache::OrbitCache(const Lds& lds) : lds_(&lds) { points_.push_back(lds.initial_point()); }

const FpVector& OrbitCache::at(std::size_t t) {
  while (points_.size() <= t) points_.push_back(lds_->step(points_.back()));
  return points_[t];
}

}  // namespace fpmc

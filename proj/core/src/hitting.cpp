#include "fpmc/hitting.hpp"

#include <algorithm>
#include <map>

namespace fpmc {

namespace {

// P along one residue class: sum over g of coeff[g] * b^(k g), k >= 0.
struct Stratified {
  std::map<std::int64_t, Rational> coeff;  // zero coefficients removed
  std::uint64_t settle = 0;                // sign is constant for k >= settle
  int tail_sign = 0;

  int sign_at(std::uint64_t k, unsigned long base) const {
    if (k >= settle) return tail_sign;
    Rational sum = 0;
    for (const auto& [g, c] : coeff) {
      std::int64_t e = g * static_cast<std::int64_t>(k);
      sum += c * pow_rational(base, e);
    }
    return sgn(sum);
  }
};

Stratified stratify(const Polynomial& p, const FpVector& x, const Certificate& cert, std::uint64_t t0,
                    const FpFormat& fmt) {
  Stratified s;
  for (const auto& [mono, c] : p.terms()) {
    Rational value = c;
    std::int64_t g = 0;
    bool zero = false;
    for (std::size_t j = 0; j < mono.size() && !zero; ++j) {
      if (mono[j] == 0) continue;
      const Growth& gj = cert.growth_at(j, t0);
      if (x[j].is_zero() || !gj) {
        zero = true;
        break;
      }
      Rational xj = to_rational(x[j], fmt);
      for (unsigned e = 0; e < mono[j]; ++e) value *= xj;
      g += static_cast<std::int64_t>(mono[j]) * *gj;
    }
    if (zero) continue;
    s.coeff[g] += value;
  }
  for (auto it = s.coeff.begin(); it != s.coeff.end();) {
    if (sgn(it->second) == 0) it = s.coeff.erase(it);
    else ++it;
  }
  if (s.coeff.empty()) return s;
  // Lower strata sit at least one power of b per step below the top:
  // sum_low |c_g| b^(kg) <= S_low b^(k(G-1)), so |c_G| b^k > S_low settles it.
  auto top = std::prev(s.coeff.end());
  s.tail_sign = sgn(top->second);
  Rational low = 0;
  for (auto it = s.coeff.begin(); it != top; ++it) low += abs(it->second);
  if (sgn(low) > 0) {
    std::int64_t k0 = floor_log(fmt.base, low / abs(top->second)) + 1;
    s.settle = static_cast<std::uint64_t>(std::max<std::int64_t>(0, k0));
  }
  return s;
}

void require_verified(const Lds& lds, const Certificate& cert) {
  if (!cert.verified) throw std::invalid_argument("hitting sets need a verified certificate");
  if (cert.dim() != lds.dim()) throw std::invalid_argument("certificate dimension does not match system");
}

}  // namespace

SemiLinearSet hitting_set_atom(const Polynomial& p, const Lds& lds, const Certificate& cert) {
  require_verified(lds, cert);
  if (p.arity() > lds.dim()) throw std::invalid_argument("target references a coordinate beyond the dimension");
  const FpFormat& fmt = lds.format();
  OrbitCache cache(lds);
  std::vector<Stratified> phase(cert.period);
  std::uint64_t settle = 0;
  for (std::uint64_t r = 0; r < cert.period; ++r) {
    std::uint64_t t0 = cert.start + r;
    const FpVector& x = cert.snapshot.empty() ? cache.at(t0) : cert.snapshot[r];
    phase[r] = stratify(p, x, cert, t0, fmt);
    settle = std::max(settle, phase[r].settle);
  }
  std::vector<int> prefix;
  for (std::uint64_t t = 0; t < cert.start; ++t) prefix.push_back(eval_sign(p, cache.at(t), fmt));
  std::uint64_t threshold = cert.start + settle * cert.period;
  return SemiLinearSet::from_predicate(threshold, cert.period, [&](std::uint64_t t) {
    if (t < cert.start) return prefix[t] >= 0;
    std::uint64_t r = (t - cert.start) % cert.period;
    std::uint64_t k = (t - cert.start) / cert.period;
    return phase[r].sign_at(k, fmt.base) >= 0;
  });
}

SemiLinearSet hitting_set(const Formula& y, const Lds& lds, const Certificate& cert) {
  require_verified(lds, cert);
  switch (y.kind) {
    case Formula::Kind::True: return SemiLinearSet::naturals();
    case Formula::Kind::False: return SemiLinearSet::empty();
    case Formula::Kind::Atom:
      switch (y.rel) {
        case Relation::Ge: return hitting_set_atom(y.poly, lds, cert);
        case Relation::Gt: return set_complement(hitting_set_atom(-y.poly, lds, cert));
        case Relation::Eq:
          return set_intersect(hitting_set_atom(y.poly, lds, cert), hitting_set_atom(-y.poly, lds, cert));
      }
      break;
    case Formula::Kind::Not: return set_complement(hitting_set(*y.kids[0], lds, cert));
    case Formula::Kind::And: return set_intersect(hitting_set(*y.kids[0], lds, cert), hitting_set(*y.kids[1], lds, cert));
    case Formula::Kind::Or: return set_union(hitting_set(*y.kids[0], lds, cert), hitting_set(*y.kids[1], lds, cert));
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace fpmc

#include "fpmc/periodicity.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace fpmc {

NegativeSystemError::NegativeSystemError()
    : std::invalid_argument(
          "system has a negative entry; pseudo-periodicity is only decidable for non-negative systems "
          "(reachability with negative entries is undecidable in general)") {}

std::optional<Growth> Certificate::reconciled(std::size_t j) const {
  std::optional<std::int64_t> value;
  for (const Growth& g : growth[j]) {
    if (!g) continue;
    if (value && *value != *g) return std::nullopt;
    value = *g;
  }
  return Growth(value);
}

void Certificate::collapse_phases() {
  if (phases == 1) return;
  std::vector<std::vector<Growth>> collapsed;
  for (std::size_t j = 0; j < growth.size(); ++j) {
    auto r = reconciled(j);
    if (!r) return;
    collapsed.push_back({*r});
  }
  growth = std::move(collapsed);
  phases = 1;
}

namespace {

// Rational floor.
Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Distance from x > 0 to the next number with at most p+1 significant digits.
Rational gap_above(const Rational& x, const FpFormat& fmt) {
  std::int64_t e = floor_log(fmt.base, x);
  Rational cell = pow_rational(fmt.base, e - static_cast<std::int64_t>(fmt.precision));
  Rational next = Rational(floor_q(x / cell) + 1) * cell;
  return next - x;
}

struct Edge {
  std::size_t from;
  Rational weight;
};

class Detector {
 public:
  Detector(const PhasedLds& phased, const DetectionOptions& opts)
      : phased_(phased), opts_(opts), cache_(phased.base()) {
    const Lds& m = phased.lds();
    incoming_.resize(m.dim());
    for (std::size_t u = 0; u < m.dim(); ++u) {
      for (std::size_t v = 0; v < m.dim(); ++v) {
        if (sgn(m.entry(u, v)) != 0) incoming_[u].push_back({v, m.entry(u, v)});
      }
    }
  }

  const FpFormat& fmt() const { return phased_.base().format(); }
  std::uint64_t phases() const { return phased_.phases(); }

  const FpNumber& value(std::size_t node, std::uint64_t t) {
    if (t > opts_.cap) {
      throw DetectionCapExceeded("no certificate within " + std::to_string(opts_.cap) + " steps");
    }
    if (t % phases() != phased_.phase_of(node)) return zero_;
    return cache_.at(t)[phased_.state_of(node)];
  }

  const FpVector& original(std::uint64_t t) {
    if (t > opts_.cap) {
      throw DetectionCapExceeded("no certificate within " + std::to_string(opts_.cap) + " steps");
    }
    return cache_.at(t);
  }

  ComponentCertificate detect(const std::vector<std::size_t>& comp, const std::vector<FeederCertificate>& feeders,
                              std::uint64_t min_start);

  Influence influence(const std::vector<std::size_t>& comp, const std::vector<FeederCertificate>& feeders,
                      std::uint64_t t);

 private:
  struct Context {
    std::vector<std::size_t> comp;
    std::vector<FeederCertificate> feeders;
    std::vector<long> role;  // -1 internal, f >= 0 feeder index, -2 other
    std::vector<Rational> rate;  // per feeder, growth / period (unused when zero)
    std::vector<std::optional<Rational>> emax;  // per feeder, lazily computed
  };

  Context make_context(const std::vector<std::size_t>& comp, const std::vector<FeederCertificate>& feeders);

  // Normalized signature of the component at time t. Returns false if zero.
  bool signature(const Context& ctx, std::uint64_t t, std::string& out, std::int64_t& ref);

  bool prove_scaling(Context& ctx, std::uint64_t t1, std::uint64_t len, std::int64_t gamma);
  bool prove_zero(const Context& ctx, std::uint64_t t1);
  const Rational& feeder_emax(Context& ctx, std::size_t f);

  const PhasedLds& phased_;
  DetectionOptions opts_;
  OrbitCache cache_;
  std::vector<std::vector<Edge>> incoming_;
  FpNumber zero_;
};

Detector::Context Detector::make_context(const std::vector<std::size_t>& comp,
                                         const std::vector<FeederCertificate>& feeders) {
  Context ctx;
  ctx.comp = comp;
  ctx.feeders = feeders;
  ctx.role.assign(phased_.lds().dim(), -2);
  for (std::size_t u : comp) ctx.role[u] = -1;
  for (std::size_t f = 0; f < feeders.size(); ++f) {
    for (std::size_t v : feeders[f].states) ctx.role[v] = static_cast<long>(f);
    const auto& c = feeders[f].cert;
    ctx.rate.push_back(c.growth ? Rational(*c.growth, static_cast<long>(c.period)) : Rational(0));
    ctx.rate.back().canonicalize();
  }
  ctx.emax.resize(feeders.size());
  for (std::size_t u : comp) {
    for (const Edge& e : incoming_[u]) {
      if (ctx.role[e.from] == -2) {
        throw std::invalid_argument("component has an incoming edge from a state outside the given feeders");
      }
    }
  }
  return ctx;
}

bool Detector::signature(const Context& ctx, std::uint64_t t, std::string& out, std::int64_t& ref) {
  out.clear();
  bool any = false;
  for (std::size_t u : ctx.comp) {
    if (t % phases() != phased_.phase_of(u)) continue;
    const FpNumber& x = value(u, t);
    if (x.is_zero()) {
      out += "z;";
      continue;
    }
    if (!any) {
      ref = x.raw_exponent();
      any = true;
    }
    out += x.sign() < 0 ? '-' : '+';
    out += x.digits().get_str(16);
    out += ':';
    out += std::to_string(x.raw_exponent() - ref);
    out += ';';
  }
  return any;
}

const Rational& Detector::feeder_emax(Context& ctx, std::size_t f) {
  if (!ctx.emax[f]) {
    const auto& c = ctx.feeders[f].cert;
    std::optional<Rational> best;
    for (std::uint64_t s = c.start; s < c.start + c.period; ++s) {
      for (std::size_t v : ctx.feeders[f].states) {
        const FpNumber& x = value(v, s);
        if (x.is_zero()) continue;
        Rational e = Rational(x.raw_exponent()) - ctx.rate[f] * static_cast<long>(s - c.start);
        if (!best || e > *best) best = e;
      }
    }
    ctx.emax[f] = best.value_or(Rational(0));
  }
  return *ctx.emax[f];
}

// Zero at t1 and no feeder term reaches the component from t1 on.
bool Detector::prove_zero(const Context& ctx, std::uint64_t t1) {
  for (std::size_t f = 0; f < ctx.feeders.size(); ++f) {
    const auto& c = ctx.feeders[f].cert;
    if (t1 < c.start) return false;
    if (!c.growth) continue;
    for (std::uint64_t s = t1; s < t1 + c.period; ++s) {
      for (std::size_t u : ctx.comp) {
        for (const Edge& e : incoming_[u]) {
          if (ctx.role[e.from] == static_cast<long>(f) && !value(e.from, s).is_zero()) return false;
        }
      }
    }
  }
  return true;
}

// Given x_K(t1 + len) = b^gamma x_K(t1), proves the same relation for every
// later time. Feeders growing at the component's rate scale alongside it;
// slower feeders must stay below the distance to the next (p+1)-digit grid
// point of the remaining sum. That distance scales by b^gamma per period while
// the slower feeder bound grows strictly less, so one period suffices.
bool Detector::prove_scaling(Context& ctx, std::uint64_t t1, std::uint64_t len, std::int64_t gamma) {
  Rational rho(gamma, static_cast<long>(len));
  rho.canonicalize();
  std::vector<char> slow(ctx.feeders.size(), 0);
  bool any_slow = false;
  for (std::size_t f = 0; f < ctx.feeders.size(); ++f) {
    const auto& c = ctx.feeders[f].cert;
    if (t1 < c.start) return false;
    if (!c.growth) continue;
    int cmpr = cmp(ctx.rate[f], rho);
    if (cmpr > 0) return false;
    if (cmpr == 0) {
      if (len % c.period != 0) return false;
    } else {
      slow[f] = 1;
      any_slow = true;
    }
  }
  if (!any_slow) return true;

  const FpFormat& format = fmt();
  for (std::uint64_t s = t1; s < t1 + len; ++s) {
    std::uint64_t next_phase = (s + 1) % phases();
    for (std::size_t u : ctx.comp) {
      if (phased_.phase_of(u) != next_phase) continue;
      Rational main = 0;
      Rational slow_weight = 0;
      std::optional<Integer> slow_exp;
      for (const Edge& e : incoming_[u]) {
        long role = ctx.role[e.from];
        if (role >= 0 && slow[role]) {
          slow_weight += e.weight;
          const auto& c = ctx.feeders[role].cert;
          Integer bound = floor_q(feeder_emax(ctx, role) + ctx.rate[role] * static_cast<long>(s - c.start));
          if (!slow_exp || bound > *slow_exp) slow_exp = bound;
          continue;
        }
        const FpNumber& x = value(e.from, s);
        if (!x.is_zero()) main += e.weight * to_rational(x, format);
      }
      if (sgn(slow_weight) == 0) continue;
      if (sgn(main) <= 0) return false;
      Rational gap = gap_above(main, format);
      Integer lhs = Integer(ceil_log(format.base, slow_weight)) + *slow_exp;
      if (lhs > Integer(floor_log(format.base, gap))) return false;
    }
  }
  return true;
}

ComponentCertificate Detector::detect(const std::vector<std::size_t>& comp,
                                      const std::vector<FeederCertificate>& feeders, std::uint64_t min_start) {
  Context ctx = make_context(comp, feeders);
  std::uint64_t start = min_start;
  std::optional<Rational> fastest;
  for (std::size_t f = 0; f < feeders.size(); ++f) {
    start = std::max(start, feeders[f].cert.start);
    if (feeders[f].cert.growth && (!fastest || ctx.rate[f] > *fastest)) fastest = ctx.rate[f];
  }
  std::uint64_t key_mod = phases();
  for (std::size_t f = 0; f < feeders.size(); ++f) {
    if (feeders[f].cert.growth && ctx.rate[f] == *fastest) key_mod = lcm_u64(key_mod, feeders[f].cert.period);
  }

  std::unordered_map<std::string, std::pair<std::uint64_t, std::int64_t>> seen;
  std::string sig;
  for (std::uint64_t t = start;; ++t) {
    std::int64_t ref = 0;
    bool nonzero = signature(ctx, t, sig, ref);
    sig += '#';
    sig += std::to_string(t % key_mod);
    auto it = seen.find(sig);
    if (it != seen.end()) {
      auto [t1, ref1] = it->second;
      if (!nonzero) {
        if (prove_zero(ctx, t1)) return {t1, phases(), std::nullopt};
      } else if (prove_scaling(ctx, t1, t - t1, ref - ref1)) {
        return {t1, t - t1, ref - ref1};
      }
      it->second = {t, ref};
    } else {
      seen.emplace(sig, std::make_pair(t, ref));
    }
  }
}

Influence Detector::influence(const std::vector<std::size_t>& comp, const std::vector<FeederCertificate>& feeders,
                              std::uint64_t t) {
  Context ctx = make_context(comp, feeders);
  const FpFormat& format = fmt();
  const Lds& m = phased_.lds();

  // Isolated copy of the component, indexed like `comp`.
  std::vector<std::size_t> pos(m.dim(), comp.size());
  for (std::size_t k = 0; k < comp.size(); ++k) pos[comp[k]] = k;
  std::vector<FpVector> iso;
  {
    FpVector y(comp.size());
    for (std::size_t k = 0; k < comp.size(); ++k) y[k] = value(comp[k], t);
    iso.push_back(std::move(y));
  }
  auto iso_at = [&](std::uint64_t s) -> const FpVector& {
    if (s - t > opts_.cap) throw DetectionCapExceeded("isolated simulation exceeded the step cap");
    while (iso.size() <= s - t) {
      const FpVector& y = iso.back();
      FpVector z(comp.size());
      for (std::size_t k = 0; k < comp.size(); ++k) {
        Rational sum = 0;
        for (const Edge& e : incoming_[comp[k]]) {
          if (ctx.role[e.from] != -1) continue;
          const FpNumber& x = y[pos[e.from]];
          if (!x.is_zero()) sum += e.weight * to_rational(x, format);
        }
        z[k] = round(sum, format);
      }
      iso.push_back(std::move(z));
    }
    return iso[s - t];
  };
  auto agree_at = [&](std::uint64_t s) {
    const FpVector& y = iso_at(s);
    for (std::size_t k = 0; k < comp.size(); ++k) {
      if (!(y[k] == value(comp[k], s))) return false;
    }
    return true;
  };

  // Isolated pseudo-period: any repeat of the normalized state is exact.
  std::uint64_t t1 = t, len = phases();
  Growth gamma;
  {
    std::unordered_map<std::string, std::pair<std::uint64_t, std::int64_t>> seen;
    for (std::uint64_t s = t;; ++s) {
      const FpVector& y = iso_at(s);
      std::string sig = std::to_string(s % phases()) + "#";
      std::int64_t ref = 0;
      bool any = false;
      for (const FpNumber& x : y) {
        if (x.is_zero()) {
          sig += "z;";
          continue;
        }
        if (!any) ref = x.raw_exponent();
        any = true;
        sig += x.digits().get_str(16) + ":" + std::to_string(x.raw_exponent() - ref) + ";";
      }
      auto [it, fresh] = seen.emplace(sig, std::make_pair(s, ref));
      if (!fresh) {
        t1 = it->second.first;
        len = s - t1;
        if (any) gamma = ref - it->second.second;
        break;
      }
    }
  }

  std::uint64_t window = len;
  std::uint64_t from = std::max(t, t1);
  std::optional<Rational> fastest;
  for (std::size_t f = 0; f < feeders.size(); ++f) {
    const auto& c = feeders[f].cert;
    from = std::max(from, c.start);
    if (!c.growth) continue;
    window = lcm_u64(window, c.period);
    if (!fastest || ctx.rate[f] > *fastest) fastest = ctx.rate[f];
  }

  for (std::uint64_t s = t; s <= from; ++s) {
    if (!agree_at(s)) return {true, s, false};
  }

  std::optional<Rational> iso_rate;
  if (gamma) iso_rate = Rational(*gamma, static_cast<long>(len));
  if (iso_rate) iso_rate->canonicalize();

  if (fastest && (!iso_rate || *fastest > *iso_rate)) {
    // A faster feeder eventually outweighs twice the isolated value, and a
    // non-negative sum rounds to at least half of itself.
    for (std::uint64_t s = from;; ++s) {
      if (s - from > 64 * opts_.cap) throw DetectionCapExceeded("influence bound search exceeded the cap");
      if (s < opts_.cap && !agree_at(s)) return {true, s, false};
      std::uint64_t next_phase = (s + 1) % phases();
      for (std::size_t k = 0; k < comp.size(); ++k) {
        std::size_t u = comp[k];
        if (phased_.phase_of(u) != next_phase) continue;
        // Isolated value at s + 1 by periodicity.
        std::uint64_t sk = s + 1;
        FpNumber y;
        if (sk >= t1 + len && gamma) {
          std::uint64_t reps = (sk - t1) / len;
          y = iso_at(sk - reps * len)[k].scaled(static_cast<std::int64_t>(reps) * *gamma);
        } else if (sk < t1 + len) {
          y = iso_at(sk)[k];
        }
        Rational iso_value = to_rational(y, format);
        for (const Edge& e : incoming_[u]) {
          long role = ctx.role[e.from];
          if (role < 0 || !feeders[role].cert.growth) continue;
          const auto& c = feeders[role].cert;
          std::uint64_t reps = (s - c.start) / c.period;
          FpNumber x = value(e.from, s - reps * c.period).scaled(static_cast<std::int64_t>(reps) * *c.growth);
          if (x.is_zero()) continue;
          if (e.weight * to_rational(x, format) > 2 * iso_value) return {true, s + 1, true};
        }
      }
    }
  }

  if (!fastest) return {false, 0, false};

  // Feeders no faster than the isolated component: agreement over a
  // synchronized window plus the grid-gap argument settles it.
  for (std::uint64_t ts = from;; ts += window) {
    for (std::uint64_t s = ts; s <= ts + window; ++s) {
      if (!agree_at(s)) return {true, s, false};
    }
    if (!gamma) {
      if (prove_zero(ctx, ts)) return {false, 0, false};
    } else {
      std::int64_t g = *gamma * static_cast<std::int64_t>(window / len);
      if (prove_scaling(ctx, ts, window, g)) return {false, 0, false};
    }
  }
}

bool relation_holds(const FpVector& now, const FpVector& later, const Certificate& cert, std::uint64_t t) {
  for (std::size_t j = 0; j < now.size(); ++j) {
    const Growth& g = cert.growth_at(j, t);
    if (!g) {
      if (!now[j].is_zero() || !later[j].is_zero()) return false;
    } else if (!(later[j] == now[j].scaled(*g))) {
      return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Certificate combine(Detector& det, const PhasedLds& phased, const SccDecomposition& dec,
                    const std::vector<ComponentCertificate>& certs) {
  const std::uint64_t P = phased.phases();
  const std::size_t d = phased.base_dim();
  Certificate cert;
  cert.phases = P;
  cert.period = P;
  for (const auto& c : certs) {
    cert.start = std::max(cert.start, c.start);
    if (c.growth) cert.period = lcm_u64(cert.period, c.period);
  }
  cert.growth.assign(d, std::vector<Growth>(P));
  for (std::size_t q = 0; q < d; ++q) {
    for (std::uint64_t r = 0; r < P; ++r) {
      const auto& c = certs[dec.component_of[phased.index(q, r)]];
      if (c.growth) cert.growth[q][r] = *c.growth * static_cast<std::int64_t>(cert.period / c.period);
    }
  }
  Detector& x = det;
  // Phases that are zero across a whole period stay zero.
  for (std::size_t q = 0; q < d; ++q) {
    for (std::uint64_t r = 0; r < P; ++r) {
      bool all_zero = true;
      for (std::uint64_t t = cert.start; t < cert.start + cert.period && all_zero; ++t) {
        if (t % P == r && !x.original(t)[q].is_zero()) all_zero = false;
      }
      if (all_zero) cert.growth[q][r] = std::nullopt;
    }
  }
  auto tighten = [&] {
    while (cert.start > 0 && relation_holds(x.original(cert.start - 1), x.original(cert.start - 1 + cert.period),
                                            cert, cert.start - 1)) {
      --cert.start;
    }
  };
  tighten();
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (std::uint64_t p : prime_factors(cert.period / P)) {
      Certificate trial = cert;
      trial.period = cert.period / p;
      bool divisible = true;
      for (auto& row : trial.growth) {
        for (auto& g : row) {
          if (!g) continue;
          if (*g % static_cast<std::int64_t>(p) != 0) divisible = false;
          else *g /= static_cast<std::int64_t>(p);
        }
      }
      if (!divisible) continue;
      bool ok = true;
      for (std::uint64_t t = cert.start; t < cert.start + cert.period && ok; ++t) {
        ok = relation_holds(x.original(t), x.original(t + trial.period), trial, t);
      }
      if (ok) {
        cert = std::move(trial);
        shrunk = true;
        break;
      }
    }
  }
  tighten();
  for (std::uint64_t t = cert.start; t < cert.start + cert.period; ++t) cert.snapshot.push_back(x.original(t));
  cert.collapse_phases();
  return cert;
}

std::vector<FeederCertificate> feeders_of(const SccDecomposition& dec, std::size_t c,
                                          const std::vector<ComponentCertificate>& certs) {
  std::vector<FeederCertificate> out;
  for (std::size_t f : dec.feeders[c]) out.push_back({dec.components[f], certs[f]});
  return out;
}

}  // namespace

ComponentCertificate detect_top_scc(const PhasedLds& phased, const std::vector<std::size_t>& component,
                                    const DetectionOptions& opts) {
  if (!phased.base().non_negative()) throw NegativeSystemError();
  Detector det(phased, opts);
  return det.detect(component, {}, 0);
}

ComponentCertificate detect_lower_scc(const PhasedLds& phased, const std::vector<std::size_t>& component,
                                      const std::vector<FeederCertificate>& feeders, const DetectionOptions& opts) {
  if (!phased.base().non_negative()) throw NegativeSystemError();
  Detector det(phased, opts);
  return det.detect(component, feeders, 0);
}

Influence will_influence_again(const PhasedLds& phased, const std::vector<std::size_t>& component,
                               const std::vector<FeederCertificate>& feeders, std::uint64_t t,
                               const DetectionOptions& opts) {
  if (!phased.base().non_negative()) throw NegativeSystemError();
  Detector det(phased, opts);
  return det.influence(component, feeders, t);
}

Certificate assemble_certificate(const PhasedLds& phased, const DetectionOptions& opts) {
  if (!phased.base().non_negative()) throw NegativeSystemError();
  Detector det(phased, opts);
  SccDecomposition dec = scc_decompose(matrix_graph(phased.lds().matrix()), opts.mode);
  std::uint64_t floor = 0;
  while (true) {
    std::vector<ComponentCertificate> certs(dec.components.size());
    for (std::size_t c = 0; c < dec.components.size(); ++c) {
      certs[c] = det.detect(dec.components[c], feeders_of(dec, c, certs), floor);
    }
    Certificate cert = combine(det, phased, dec, certs);
    if (verify_certificate(phased.base(), cert, std::max(2u, opts.verify_periods))) {
      cert.verified = true;
      return cert;
    }
    floor = cert.start + cert.period;
  }
}

Certificate assemble_certificate(const Lds& lds, const DetectionOptions& opts) {
  if (!lds.non_negative()) throw NegativeSystemError();
  return assemble_certificate(blowup(lds, opts.mode), opts);
}

bool verify_certificate(const Lds& lds, const Certificate& cert, unsigned k) {
  if (cert.period == 0 || cert.phases == 0 || cert.period % cert.phases != 0) return false;
  if (cert.growth.size() != lds.dim()) return false;
  for (const auto& row : cert.growth) {
    if (row.size() != cert.phases) return false;
  }
  if (!cert.snapshot.empty() && cert.snapshot.size() != cert.period) return false;
  OrbitCache cache(lds);
  for (std::uint64_t i = 0; i < cert.snapshot.size(); ++i) {
    if (cert.snapshot[i] != cache.at(cert.start + i)) return false;
  }
  for (std::uint64_t t = cert.start; t <= cert.start + k * cert.period; ++t) {
    if (!relation_holds(cache.at(t), cache.at(t + cert.period), cert, t)) return false;
  }
  return true;
}

ClosenessBound measure_closeness(const Lds& lds, const Certificate& cert, unsigned periods) {
  ClosenessBound out;
  out.stabilization = cert.start;
  PhasedLds phased = blowup(lds);
  SccDecomposition dec = scc_decompose(matrix_graph(phased.lds().matrix()));
  OrbitCache cache(lds);
  const std::uint64_t P = phased.phases();
  for (std::uint64_t t = cert.start; t < cert.start + periods * cert.period; ++t) {
    const FpVector& x = cache.at(t);
    for (const auto& comp : dec.components) {
      std::optional<std::int64_t> lo, hi;
      for (std::size_t u : comp) {
        if (phased.phase_of(u) != t % P) continue;
        const FpNumber& v = x[phased.state_of(u)];
        if (v.is_zero()) continue;
        lo = lo ? std::min(*lo, v.raw_exponent()) : v.raw_exponent();
        hi = hi ? std::max(*hi, v.raw_exponent()) : v.raw_exponent();
      }
      if (lo) out.beta = std::max(out.beta, *hi - *lo);
    }
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> by_rate;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const Growth& g = cert.growth_at(j, t);
      if (!g || x[j].is_zero()) continue;
      auto [it, fresh] = by_rate.emplace(*g, std::make_pair(x[j].raw_exponent(), x[j].raw_exponent()));
      if (!fresh) {
        it->second.first = std::min(it->second.first, x[j].raw_exponent());
        it->second.second = std::max(it->second.second, x[j].raw_exponent());
      }
    }
    for (const auto& [g, range] : by_rate) out.eta = std::max(out.eta, range.second - range.first);
  }
  return out;
}

}  // namespace fpmc

#include "fpmc/semilinear.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "fpmc/numeric.hpp"

namespace fpmc {

SemiLinearSet::SemiLinearSet() : threshold_(0), period_(1), bits_{false} {}

SemiLinearSet::SemiLinearSet(std::uint64_t threshold, std::uint64_t period, std::vector<bool> bits)
    : threshold_(threshold), period_(period), bits_(std::move(bits)) {
  normalize();
}

void SemiLinearSet::normalize() {
  // Smallest period of the repeating block.
  for (std::uint64_t q = 1; q < period_; ++q) {
    if (period_ % q != 0) continue;
    bool ok = true;
    for (std::uint64_t i = q; i < period_ && ok; ++i) ok = bits_[threshold_ + i] == bits_[threshold_ + i % q];
    if (ok) {
      period_ = q;
      break;
    }
  }
  bits_.resize(threshold_ + period_);
  while (threshold_ > 0 && bits_[threshold_ - 1] == bits_[threshold_ - 1 + period_]) {
    --threshold_;
    bits_.pop_back();
  }
}

SemiLinearSet SemiLinearSet::empty() { return SemiLinearSet(); }

SemiLinearSet SemiLinearSet::naturals() { return SemiLinearSet(0, 1, {true}); }

SemiLinearSet SemiLinearSet::progression(std::uint64_t base, std::uint64_t period) {
  return from_parts({}, period, {base});
}

SemiLinearSet SemiLinearSet::finite(const std::vector<std::uint64_t>& elements) {
  return from_parts(elements, 1, {});
}

SemiLinearSet SemiLinearSet::from_parts(const std::vector<std::uint64_t>& finite_part, std::uint64_t period,
                                        const std::vector<std::uint64_t>& bases) {
  if (period == 0) throw std::invalid_argument("period must be >= 1");
  std::uint64_t threshold = 0;
  for (auto f : finite_part) threshold = std::max(threshold, f + 1);
  for (auto b : bases) threshold = std::max(threshold, b);
  return from_predicate(threshold, period, [&](std::uint64_t t) {
    if (std::find(finite_part.begin(), finite_part.end(), t) != finite_part.end()) return true;
    for (auto b : bases) {
      if (t >= b && (t - b) % period == 0) return true;
    }
    return false;
  });
}

SemiLinearSet SemiLinearSet::from_predicate(std::uint64_t threshold, std::uint64_t period,
                                            const std::function<bool(std::uint64_t)>& pred) {
  if (period == 0) throw std::invalid_argument("period must be >= 1");
  std::vector<bool> bits(threshold + period);
  for (std::uint64_t t = 0; t < bits.size(); ++t) bits[t] = pred(t);
  return SemiLinearSet(threshold, period, std::move(bits));
}

bool SemiLinearSet::member(std::uint64_t t) const {
  if (t < threshold_ + period_) return bits_[t];
  return bits_[threshold_ + (t - threshold_) % period_];
}

bool SemiLinearSet::is_empty() const {
  return std::none_of(bits_.begin(), bits_.end(), [](bool b) { return b; });
}

std::vector<std::uint64_t> SemiLinearSet::finite_part() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 0; t < threshold_; ++t) {
    if (bits_[t]) out.push_back(t);
  }
  return out;
}

std::vector<std::uint64_t> SemiLinearSet::bases() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = threshold_; t < threshold_ + period_; ++t) {
    if (bits_[t]) out.push_back(t);
  }
  return out;
}

namespace {

SemiLinearSet combine(const SemiLinearSet& a, const SemiLinearSet& b, bool (*op)(bool, bool)) {
  std::uint64_t threshold = std::max(a.threshold(), b.threshold());
  std::uint64_t period = lcm_u64(a.period(), b.period());
  return SemiLinearSet::from_predicate(threshold, period,
                                       [&](std::uint64_t t) { return op(a.member(t), b.member(t)); });
}

}  // namespace

SemiLinearSet set_union(const SemiLinearSet& a, const SemiLinearSet& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

SemiLinearSet set_intersect(const SemiLinearSet& a, const SemiLinearSet& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

SemiLinearSet set_complement(const SemiLinearSet& a) {
  return SemiLinearSet::from_predicate(a.threshold(), a.period(), [&](std::uint64_t t) { return !a.member(t); });
}

SemiLinearSet set_shift_down(const SemiLinearSet& a, std::uint64_t shift) {
  std::uint64_t threshold = a.threshold() > shift ? a.threshold() - shift : 0;
  return SemiLinearSet::from_predicate(threshold, a.period(), [&](std::uint64_t t) { return a.member(t + shift); });
}

namespace {

std::string render_list(const std::vector<std::uint64_t>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out + "}";
}

std::vector<std::uint64_t> parse_list(std::string_view s) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw ParseError("expected {..} list");
  std::vector<std::uint64_t> out;
  std::string body(s.substr(1, s.size() - 2));
  std::stringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size() || item[0] == '-') throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("invalid natural '" + item + "'");
    }
  }
  return out;
}

}  // namespace

std::string render(const SemiLinearSet& s) {
  return "F=" + render_list(s.finite_part()) + " p=" + std::to_string(s.period()) + " B=" + render_list(s.bases());
}

SemiLinearSet parse_semilinear(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  std::vector<std::uint64_t> f, b;
  std::uint64_t p = 0;
  bool seen_f = false, seen_p = false, seen_b = false;
  while (in >> tok) {
    if (tok.rfind("F=", 0) == 0) {
      f = parse_list(std::string_view(tok).substr(2));
      seen_f = true;
    } else if (tok.rfind("B=", 0) == 0) {
      b = parse_list(std::string_view(tok).substr(2));
      seen_b = true;
    } else if (tok.rfind("p=", 0) == 0) {
      try {
        p = std::stoull(tok.substr(2));
      } catch (const std::exception&) {
        throw ParseError("invalid period '" + tok + "'");
      }
      seen_p = true;
    } else {
      throw ParseError("unexpected token '" + tok + "'");
    }
  }
  if (!seen_f || !seen_p || !seen_b || p == 0) throw ParseError("expected 'F={..} p=<int> B={..}'");
  return SemiLinearSet::from_parts(f, p, b);
}

}  // namespace fpmc

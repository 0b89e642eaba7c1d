#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace fpmc {

/// Ultimately periodic subset of the naturals in canonical form: membership
/// is listed for [0, threshold + period) and repeats with `period` from
/// `threshold` on. Period and then threshold are minimal, so equal sets have
/// equal representations.
class SemiLinearSet {
 public:
  SemiLinearSet();  // empty set

  static SemiLinearSet empty();
  static SemiLinearSet naturals();
  /// {base + k * period : k >= 0}
  static SemiLinearSet progression(std::uint64_t base, std::uint64_t period);
  static SemiLinearSet finite(const std::vector<std::uint64_t>& elements);
  /// F U {b + k p : b in bases, k >= 0}
  static SemiLinearSet from_parts(const std::vector<std::uint64_t>& finite_part, std::uint64_t period,
                                  const std::vector<std::uint64_t>& bases);
  /// Membership given by `pred` on [0, threshold + period), periodic after.
  static SemiLinearSet from_predicate(std::uint64_t threshold, std::uint64_t period,
                                      const std::function<bool(std::uint64_t)>& pred);

  bool member(std::uint64_t t) const;
  bool is_empty() const;

  std::uint64_t threshold() const { return threshold_; }
  std::uint64_t period() const { return period_; }
  /// Elements below the threshold.
  std::vector<std::uint64_t> finite_part() const;
  /// Residue representatives in [threshold, threshold + period).
  std::vector<std::uint64_t> bases() const;

  bool operator==(const SemiLinearSet&) const = default;

 private:
  SemiLinearSet(std::uint64_t threshold, std::uint64_t period, std::vector<bool> bits);
  void normalize();

  std::uint64_t threshold_ = 0;
  std::uint64_t period_ = 1;
  std::vector<bool> bits_;
};

SemiLinearSet set_union(const SemiLinearSet& a, const SemiLinearSet& b);
SemiLinearSet set_intersect(const SemiLinearSet& a, const SemiLinearSet& b);
/// Complement with respect to the naturals.
SemiLinearSet set_complement(const SemiLinearSet& a);
/// {t : t + shift in a}
SemiLinearSet set_shift_down(const SemiLinearSet& a, std::uint64_t shift);

/// `F={0,3} p=2 B={5}`
std::string render(const SemiLinearSet& s);
SemiLinearSet parse_semilinear(std::string_view text);

}  // namespace fpmc

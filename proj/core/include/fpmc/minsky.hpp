#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpmc/lds.hpp"

namespace fpmc {

enum class Counter { X, Y };

struct MinskyInstruction {
  enum class Op { Inc, Dec, Zero, Halt };
  Op op = Op::Halt;
  Counter counter = Counter::X;
  std::size_t next = 0;     // Inc/Dec target; Zero target when the counter is 0
  std::size_t nonzero = 0;  // Zero target when the counter is positive
};

/// Two-counter machine; state 0 is the start state.
struct MinskyMachine {
  std::vector<std::string> names;
  std::vector<MinskyInstruction> program;

  std::size_t size() const { return program.size(); }
};

/// One instruction per line, the first line being the start state:
///   L1: inc x -> L2
///   L2: zero? x -> L3 | L4     (L3 when x = 0, L4 otherwise)
///   L4: dec x -> L2
///   L3: halt
MinskyMachine parse_minsky(std::string_view text);
std::string render_minsky(const MinskyMachine& m);

struct MinskyConfig {
  std::size_t state = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  bool operator==(const MinskyConfig&) const = default;
};

class DecrementOnZero : public std::runtime_error {
 public:
  DecrementOnZero(std::size_t step, std::size_t state);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// One machine step; throws DecrementOnZero (with step 0) for dec on an empty counter.
MinskyConfig machine_step(const MinskyMachine& m, const MinskyConfig& c);
bool is_halted(const MinskyMachine& m, const MinskyConfig& c);

/// Helper to assemble rational update rows from named variables.
class RowBuilder {
 public:
  std::size_t add_var(std::string name);
  /// target += coeff * source (at the next step)
  void add(std::size_t target, std::size_t source, const Rational& coeff);
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  RationalMatrix matrix() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows_;
};

using LinearExpr = std::vector<std::pair<std::size_t, Rational>>;

/// Variables of one filter instance.
struct FilterVars {
  std::size_t temp, u1, temp2, temp2_copy, w, v1, v2, v3;
};

/// Emits the filter rows reading u and v at step 1. After step 3, w holds
/// v if v >= u else 0; at step 4 `plus_target` receives w and
/// `minus_target` receives v - w (v if v < u else 0). Either target may be
/// omitted.
FilterVars emit_filter(RowBuilder& rb, const LinearExpr& u, const LinearExpr& v, std::optional<std::size_t> plus_target,
                       std::optional<std::size_t> minus_target, const std::string& prefix);

struct FilterTrace {
  FpNumber temp, temp2, w;  // after steps 1, 2, 3
  FpNumber plus, minus;     // after step 4
};

/// Runs the gadget rows on inputs u, v with the given rounding.
FilterTrace evaluate_filter(const Rational& u, const Rational& v, const FpFormat& fmt);

struct StateBlock {
  std::size_t x, y, a, unit;
};

struct CompiledReduction {
  Lds lds;
  std::vector<std::string> names;
  std::vector<StateBlock> blocks;
  std::uint64_t step_ratio = 4;

  /// Machine configuration encoded by an LDS vector at a step boundary:
  /// only block j nonzero with x_j = 10^x, y_j = 10^y, a_j = 10^(x+y),
  /// unit 1. std::nullopt if the vector encodes nothing.
  std::optional<MinskyConfig> decode(const FpVector& v) const;
};

/// Base 10, precision 1. `tie` only matters for experiments: the gadgets
/// never produce a tie.
CompiledReduction compile_minsky(const MinskyMachine& m, TieRule tie = TieRule::HalfAwayFromZero);

struct CosimReport {
  bool agreed = true;
  bool halted = false;
  bool decrement_on_zero = false;
  std::uint64_t machine_steps = 0;  // steps executed
  std::optional<std::uint64_t> zero_time;  // first LDS step with the zero vector
  bool boundary_mantissas_ok = true;       // every boundary value is 0 or 0.1 * 10^k
  std::string message;
};

/// Runs machine and compiled system in lockstep (4 LDS steps per machine
/// step), decoding at every boundary.
CosimReport cosimulate(const MinskyMachine& m, const CompiledReduction& compiled, std::uint64_t max_machine_steps);

}  // namespace fpmc

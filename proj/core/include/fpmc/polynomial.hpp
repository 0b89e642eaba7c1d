#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fpmc/fpnum.hpp"

namespace fpmc {

/// Exponent vector; entry i is the degree of x_{i+1}. No trailing zeros.
using Monomial = std::vector<unsigned>;

/// Multivariate polynomial with rational coefficients over x1..xd.
class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  /// x_{index+1}
  static Polynomial variable(std::size_t index);

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Number of variables referenced (largest index + 1).
  std::size_t arity() const;
  unsigned degree() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial pow(unsigned k) const;

  Rational eval(const std::vector<Rational>& x) const;
  /// Renames x_{i+1} to x_{map[i]+1}.
  Polynomial rename(const std::vector<std::size_t>& map) const;

  bool operator==(const Polynomial&) const = default;

 private:
  void add_term(Monomial m, const Rational& c);
  std::map<Monomial, Rational> terms_;
};

std::string to_string(const Polynomial& p);

/// Sign of p at the rational values of v: -1, 0 or 1.
int eval_sign(const Polynomial& p, const FpVector& v, const FpFormat& fmt);

enum class Relation { Ge, Gt, Eq };

/// Boolean combination of atoms `P rel 0`.
struct Formula {
  enum class Kind { True, False, Atom, Not, And, Or };
  Kind kind = Kind::True;
  Polynomial poly;  // Atom only
  Relation rel = Relation::Ge;
  std::vector<std::shared_ptr<const Formula>> kids;

  static Formula truth(bool value);
  static Formula atom(Polynomial p, Relation rel);
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);

  std::size_t arity() const;
  unsigned degree() const;
};

std::string to_string(const Formula& f);

bool evaluate(const Formula& f, const FpVector& v, const FpFormat& fmt);

/// Same formula on the phased system: x_q becomes the phase-`phase` copy
/// (index q * phases + phase), and every other phase copy must be zero.
Formula lift_target(const Formula& f, std::size_t phase, std::size_t phases, std::size_t dim);

Polynomial parse_polynomial(std::string_view text);

/// Definitions visible to formula parsing (`let name = ...`).
using FormulaScope = std::map<std::string, Formula>;

/// Connectives `& | !`, relations `>= > = <= < !=`, constants true/false,
/// parentheses, and names bound in `scope`.
Formula parse_formula(std::string_view text, const FormulaScope& scope = {});

struct NamedFormula {
  std::string name;
  Formula formula;
};

/// Predicate file: `name: formula` lines are targets in order,
/// `let name = formula` lines bind helpers, `#` comments.
std::vector<NamedFormula> parse_targets(std::string_view text);

}  // namespace fpmc

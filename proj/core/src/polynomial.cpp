#include "fpmc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace fpmc {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

}  // namespace

void Polynomial::add_term(Monomial m, const Rational& c) {
  trim(m);
  if (sgn(c) == 0) return;
  auto [it, fresh] = terms_.emplace(std::move(m), c);
  if (!fresh) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::constant(const Rational& c) {
  Polynomial p;
  p.add_term({}, c);
  return p;
}

Polynomial Polynomial::variable(std::size_t index) {
  Polynomial p;
  Monomial m(index + 1, 0);
  m[index] = 1;
  p.add_term(std::move(m), 1);
  return p;
}

std::size_t Polynomial::arity() const {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) {
    unsigned s = 0;
    for (unsigned e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r;
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      Monomial m(std::max(m1.size(), m2.size()), 0);
      for (std::size_t i = 0; i < m1.size(); ++i) m[i] += m1[i];
      for (std::size_t i = 0; i < m2.size(); ++i) m[i] += m2[i];
      r.add_term(std::move(m), c1 * c2);
    }
  }
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial r = constant(1);
  for (unsigned i = 0; i < k; ++i) r = r * *this;
  return r;
}

Rational Polynomial::eval(const std::vector<Rational>& x) const {
  if (arity() > x.size()) throw std::invalid_argument("polynomial references a coordinate beyond the dimension");
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (unsigned e = 0; e < m[i]; ++e) term *= x[i];
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::rename(const std::vector<std::size_t>& map) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    Monomial out;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (out.size() <= map[i]) out.resize(map[i] + 1, 0);
      out[map[i]] += m[i];
    }
    r.add_term(std::move(out), c);
  }
  return r;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Highest degree first.
  std::vector<std::pair<Monomial, Rational>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    unsigned da = 0, db = 0;
    for (unsigned e : a.first) da += e;
    for (unsigned e : b.first) db += e;
    return da > db;
  });
  for (const auto& [m, c] : terms) {
    Rational mag = abs(c);
    if (first) out += sgn(c) < 0 ? "-" : "";
    else out += sgn(c) < 0 ? " - " : " + ";
    first = false;
    std::string body;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!body.empty()) body += "*";
      body += "x" + std::to_string(i + 1);
      if (m[i] > 1) body += "^" + std::to_string(m[i]);
    }
    if (body.empty()) out += to_string(mag);
    else if (mag == 1) out += body;
    else out += to_string(mag) + "*" + body;
  }
  return out;
}

int eval_sign(const Polynomial& p, const FpVector& v, const FpFormat& fmt) {
  std::vector<Rational> x;
  x.reserve(v.size());
  for (const auto& f : v) x.push_back(to_rational(f, fmt));
  return sgn(p.eval(x));
}

Formula Formula::truth(bool value) {
  Formula f;
  f.kind = value ? Kind::True : Kind::False;
  return f;
}

Formula Formula::atom(Polynomial p, Relation rel) {
  Formula f;
  f.kind = Kind::Atom;
  f.poly = std::move(p);
  f.rel = rel;
  return f;
}

Formula Formula::negation(Formula a) {
  Formula f;
  f.kind = Kind::Not;
  f.kids.push_back(std::make_shared<const Formula>(std::move(a)));
  return f;
}

Formula Formula::conjunction(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::And;
  f.kids.push_back(std::make_shared<const Formula>(std::move(a)));
  f.kids.push_back(std::make_shared<const Formula>(std::move(b)));
  return f;
}

Formula Formula::disjunction(Formula a, Formula b) {
  Formula f;
  f.kind = Kind::Or;
  f.kids.push_back(std::make_shared<const Formula>(std::move(a)));
  f.kids.push_back(std::make_shared<const Formula>(std::move(b)));
  return f;
}

std::size_t Formula::arity() const {
  std::size_t n = kind == Kind::Atom ? poly.arity() : 0;
  for (const auto& k : kids) n = std::max(n, k->arity());
  return n;
}

unsigned Formula::degree() const {
  unsigned d = kind == Kind::Atom ? poly.degree() : 0;
  for (const auto& k : kids) d = std::max(d, k->degree());
  return d;
}

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Atom: {
      const char* rel = f.rel == Relation::Ge ? " >= 0" : f.rel == Relation::Gt ? " > 0" : " = 0";
      return to_string(f.poly) + rel;
    }
    case Formula::Kind::Not: return "!(" + to_string(*f.kids[0]) + ")";
    case Formula::Kind::And: return "(" + to_string(*f.kids[0]) + " & " + to_string(*f.kids[1]) + ")";
    case Formula::Kind::Or: return "(" + to_string(*f.kids[0]) + " | " + to_string(*f.kids[1]) + ")";
  }
  return "?";
}

namespace {

bool evaluate_rational(const Formula& f, const std::vector<Rational>& x) {
  switch (f.kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: {
      int s = sgn(f.poly.eval(x));
      return f.rel == Relation::Ge ? s >= 0 : f.rel == Relation::Gt ? s > 0 : s == 0;
    }
    case Formula::Kind::Not: return !evaluate_rational(*f.kids[0], x);
    case Formula::Kind::And: return evaluate_rational(*f.kids[0], x) && evaluate_rational(*f.kids[1], x);
    case Formula::Kind::Or: return evaluate_rational(*f.kids[0], x) || evaluate_rational(*f.kids[1], x);
  }
  return false;
}

Formula rename_formula(const Formula& f, const std::vector<std::size_t>& map) {
  Formula out = f;
  if (f.kind == Formula::Kind::Atom) out.poly = f.poly.rename(map);
  out.kids.clear();
  for (const auto& k : f.kids) out.kids.push_back(std::make_shared<const Formula>(rename_formula(*k, map)));
  return out;
}

}  // namespace

bool evaluate(const Formula& f, const FpVector& v, const FpFormat& fmt) {
  std::vector<Rational> x;
  x.reserve(v.size());
  for (const auto& n : v) x.push_back(to_rational(n, fmt));
  return evaluate_rational(f, x);
}

Formula lift_target(const Formula& f, std::size_t phase, std::size_t phases, std::size_t dim) {
  if (phase >= phases) throw std::invalid_argument("phase out of range");
  if (f.arity() > dim) throw std::invalid_argument("formula references a coordinate beyond the dimension");
  std::vector<std::size_t> map(dim);
  for (std::size_t q = 0; q < dim; ++q) map[q] = q * phases + phase;
  Formula out = rename_formula(f, map);
  for (std::size_t q = 0; q < dim; ++q) {
    for (std::size_t i = 0; i < phases; ++i) {
      if (i == phase) continue;
      out = Formula::conjunction(std::move(out), Formula::atom(Polynomial::variable(q * phases + i), Relation::Eq));
    }
  }
  return out;
}

namespace {

struct Token {
  enum class Type { Num, Var, Ident, Op, End } type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == '/')) ++i;
      out.push_back({Token::Type::Num, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string word(s.substr(start, i - start));
      bool var = word.size() > 1 && word[0] == 'x' &&
                 std::all_of(word.begin() + 1, word.end(), [](unsigned char ch) { return std::isdigit(ch); });
      out.push_back({var ? Token::Type::Var : Token::Type::Ident, word, start});
      continue;
    }
    static const char* two[] = {">=", "<=", "!=", "==", "&&", "||"};
    bool matched = false;
    for (const char* op : two) {
      if (s.substr(i, 2) == op) {
        out.push_back({Token::Type::Op, op, start});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("+-*^()&|!<>=").find(c) != std::string_view::npos) {
      out.push_back({Token::Type::Op, std::string(1, c), start});
      ++i;
      continue;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "' at column " + std::to_string(i + 1));
  }
  out.push_back({Token::Type::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const FormulaScope& scope) : toks_(tokenize(text)), scope_(scope) {}

  Polynomial whole_polynomial() {
    Polynomial p = sum();
    expect_end();
    return p;
  }

  Formula whole_formula() {
    Formula f = disjunction();
    expect_end();
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_op(const char* op) const { return peek().type == Token::Type::Op && peek().text == op; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at column " + std::to_string(peek().pos + 1));
  }
  void expect(const char* op) {
    if (!is_op(op)) fail(std::string("expected '") + op + "'");
    ++pos_;
  }
  void expect_end() {
    if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "'");
  }

  Polynomial sum() {
    Polynomial p = product();
    while (is_op("+") || is_op("-")) {
      bool minus = is_op("-");
      ++pos_;
      Polynomial q = product();
      p = minus ? p - q : p + q;
    }
    return p;
  }

  Polynomial product() {
    Polynomial p = unary();
    while (is_op("*")) {
      ++pos_;
      p = p * unary();
    }
    return p;
  }

  Polynomial unary() {
    if (is_op("-")) {
      ++pos_;
      return -unary();
    }
    if (is_op("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (is_op("^")) {
      ++pos_;
      if (peek().type != Token::Type::Num) fail("expected integer exponent");
      const std::string& t = peek().text;
      if (!std::all_of(t.begin(), t.end(), [](unsigned char ch) { return std::isdigit(ch); }) || t.size() > 3) {
        fail("expected small integer exponent");
      }
      unsigned k = static_cast<unsigned>(std::stoul(t));
      ++pos_;
      return base.pow(k);
    }
    return base;
  }

  Polynomial primary() {
    const Token& t = peek();
    if (t.type == Token::Type::Num) {
      ++pos_;
      try {
        return Polynomial::constant(parse_rational(t.text));
      } catch (const ParseError&) {
        fail("invalid number '" + t.text + "'");
      }
    }
    if (t.type == Token::Type::Var) {
      std::size_t index = std::stoul(t.text.substr(1));
      if (index == 0) fail("variables are numbered from x1");
      ++pos_;
      return Polynomial::variable(index - 1);
    }
    if (is_op("(")) {
      ++pos_;
      Polynomial p = sum();
      expect(")");
      return p;
    }
    fail(t.type == Token::Type::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (is_op("|") || is_op("||")) {
      ++pos_;
      f = Formula::disjunction(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = negation();
    while (is_op("&") || is_op("&&")) {
      ++pos_;
      f = Formula::conjunction(std::move(f), negation());
    }
    return f;
  }

  Formula negation() {
    if (is_op("!")) {
      ++pos_;
      return Formula::negation(negation());
    }
    return boolean_primary();
  }

  bool at_arith_or_relation() const {
    if (peek().type != Token::Type::Op) return false;
    static const char* ops[] = {"+", "-", "*", "^", ">=", ">", "<=", "<", "=", "==", "!="};
    for (const char* op : ops) {
      if (peek().text == op) return true;
    }
    return false;
  }

  Formula boolean_primary() {
    const Token& t = peek();
    if (t.type == Token::Type::Ident) {
      if (t.text == "true" || t.text == "false") {
        ++pos_;
        return Formula::truth(t.text == "true");
      }
      auto it = scope_.find(t.text);
      if (it == scope_.end()) fail("unknown name '" + t.text + "'");
      ++pos_;
      return it->second;
    }
    if (is_op("(")) {
      std::size_t saved = pos_;
      try {
        ++pos_;
        Formula f = disjunction();
        expect(")");
        if (!at_arith_or_relation()) return f;
      } catch (const ParseError&) {
      }
      pos_ = saved;
    }
    return comparison();
  }

  Formula comparison() {
    Polynomial lhs = sum();
    if (peek().type != Token::Type::Op) fail("expected a relation");
    std::string op = peek().text;
    ++pos_;
    Polynomial rhs = sum();
    if (op == ">=") return Formula::atom(lhs - rhs, Relation::Ge);
    if (op == ">") return Formula::atom(lhs - rhs, Relation::Gt);
    if (op == "<=") return Formula::atom(rhs - lhs, Relation::Ge);
    if (op == "<") return Formula::atom(rhs - lhs, Relation::Gt);
    if (op == "=" || op == "==") return Formula::atom(lhs - rhs, Relation::Eq);
    if (op == "!=") return Formula::negation(Formula::atom(lhs - rhs, Relation::Eq));
    --pos_;
    fail("expected a relation");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const FormulaScope& scope_;
};

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

std::string strip(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Polynomial parse_polynomial(std::string_view text) { return Parser(text, {}).whole_polynomial(); }

Formula parse_formula(std::string_view text, const FormulaScope& scope) { return Parser(text, scope).whole_formula(); }

std::vector<NamedFormula> parse_targets(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  FormulaScope scope;
  std::vector<NamedFormula> out;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string body = strip(line);
    if (body.empty()) continue;
    try {
      if (body.rfind("let ", 0) == 0) {
        auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'let name = formula'");
        std::string name = strip(std::string_view(body).substr(4, eq - 4));
        if (!valid_name(name) || name == "true" || name == "false") throw ParseError("invalid name '" + name + "'");
        scope[name] = parse_formula(std::string_view(body).substr(eq + 1), scope);
        continue;
      }
      auto colon = body.find(':');
      if (colon == std::string::npos) throw ParseError("expected 'name: formula'");
      std::string name = strip(std::string_view(body).substr(0, colon));
      if (!valid_name(name)) throw ParseError("invalid name '" + name + "'");
      Formula f = parse_formula(std::string_view(body).substr(colon + 1), scope);
      scope[name] = f;
      out.push_back({name, std::move(f)});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (out.empty()) throw ParseError("no targets defined", lineno);
  return out;
}

}  // namespace fpmc

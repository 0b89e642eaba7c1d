#include "fpmc/minsky.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "fpmc/lds_io.hpp"

namespace fpmc {

DecrementOnZero::DecrementOnZero(std::size_t step, std::size_t state)
    : std::runtime_error("decrement on a zero counter at machine step " + std::to_string(step) + " (state index " +
                         std::to_string(state) + ")"),
      step_(step) {}

MinskyMachine parse_minsky(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  MinskyMachine m;
  struct Pending {
    std::size_t line;
    std::string next, nonzero;
  };
  std::vector<Pending> pending;
  std::map<std::string, std::size_t> index;
  auto counter = [](const std::string& s, std::size_t line) {
    if (s == "x") return Counter::X;
    if (s == "y") return Counter::Y;
    throw ParseError("unknown counter '" + s + "' (expected x or y)", line);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    auto toks = split_tokens(raw);
    if (toks.empty()) continue;
    std::string label = toks[0];
    std::vector<std::string> rest(toks.begin() + 1, toks.end());
    if (label.size() > 1 && label.back() == ':') {
      label.pop_back();
    } else if (auto colon = label.find(':'); colon != std::string::npos) {
      rest.insert(rest.begin(), label.substr(colon + 1));
      label = label.substr(0, colon);
    } else if (!rest.empty() && rest[0] == ":") {
      rest.erase(rest.begin());
    } else {
      throw ParseError("expected '<state>: <instruction>'", lineno);
    }
    if (label.empty()) throw ParseError("empty state name", lineno);
    if (index.count(label)) throw ParseError("state '" + label + "' defined twice", lineno);
    if (rest.empty()) throw ParseError("missing instruction", lineno);
    MinskyInstruction ins;
    Pending p{lineno, "", ""};
    const std::string& op = rest[0];
    if (op == "halt") {
      if (rest.size() != 1) throw ParseError("unexpected text after halt", lineno);
      ins.op = MinskyInstruction::Op::Halt;
    } else if (op == "inc" || op == "dec") {
      if (rest.size() != 4 || rest[2] != "->") throw ParseError("expected '" + op + " <x|y> -> <state>'", lineno);
      ins.op = op == "inc" ? MinskyInstruction::Op::Inc : MinskyInstruction::Op::Dec;
      ins.counter = counter(rest[1], lineno);
      p.next = rest[3];
    } else if (op == "zero?") {
      if (rest.size() != 6 || rest[2] != "->" || rest[4] != "|") {
        throw ParseError("expected 'zero? <x|y> -> <state> | <state>'", lineno);
      }
      ins.op = MinskyInstruction::Op::Zero;
      ins.counter = counter(rest[1], lineno);
      p.next = rest[3];
      p.nonzero = rest[5];
    } else {
      throw ParseError("unknown instruction '" + op + "'", lineno);
    }
    index[label] = m.names.size();
    m.names.push_back(label);
    m.program.push_back(ins);
    pending.push_back(p);
  }
  if (m.program.empty()) throw ParseError("machine has no states", lineno);
  for (std::size_t i = 0; i < m.program.size(); ++i) {
    auto resolve = [&](const std::string& name) {
      auto it = index.find(name);
      if (it == index.end()) throw ParseError("undeclared state '" + name + "'", pending[i].line);
      return it->second;
    };
    if (!pending[i].next.empty()) m.program[i].next = resolve(pending[i].next);
    if (!pending[i].nonzero.empty()) m.program[i].nonzero = resolve(pending[i].nonzero);
  }
  return m;
}

std::string render_minsky(const MinskyMachine& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& ins = m.program[i];
    const char* c = ins.counter == Counter::X ? "x" : "y";
    out << m.names[i] << ": ";
    switch (ins.op) {
      case MinskyInstruction::Op::Halt: out << "halt"; break;
      case MinskyInstruction::Op::Inc: out << "inc " << c << " -> " << m.names[ins.next]; break;
      case MinskyInstruction::Op::Dec: out << "dec " << c << " -> " << m.names[ins.next]; break;
      case MinskyInstruction::Op::Zero:
        out << "zero? " << c << " -> " << m.names[ins.next] << " | " << m.names[ins.nonzero];
        break;
    }
    out << "\n";
  }
  return out.str();
}

bool is_halted(const MinskyMachine& m, const MinskyConfig& c) {
  return m.program[c.state].op == MinskyInstruction::Op::Halt;
}

MinskyConfig machine_step(const MinskyMachine& m, const MinskyConfig& c) {
  const auto& ins = m.program[c.state];
  MinskyConfig out = c;
  std::uint64_t& reg = ins.counter == Counter::X ? out.x : out.y;
  switch (ins.op) {
    case MinskyInstruction::Op::Halt: return c;
    case MinskyInstruction::Op::Inc:
      ++reg;
      out.state = ins.next;
      return out;
    case MinskyInstruction::Op::Dec:
      if (reg == 0) throw DecrementOnZero(0, c.state);
      --reg;
      out.state = ins.next;
      return out;
    case MinskyInstruction::Op::Zero:
      out.state = reg == 0 ? ins.next : ins.nonzero;
      return out;
  }
  return out;
}

std::size_t RowBuilder::add_var(std::string name) {
  names_.push_back(std::move(name));
  rows_.emplace_back();
  return names_.size() - 1;
}

void RowBuilder::add(std::size_t target, std::size_t source, const Rational& coeff) {
  rows_[target].emplace_back(source, coeff);
}

RationalMatrix RowBuilder::matrix() const {
  RationalMatrix m(size(), std::vector<Rational>(size(), Rational(0)));
  for (std::size_t i = 0; i < size(); ++i) {
    for (const auto& [j, c] : rows_[i]) m[i][j] += c;
  }
  return m;
}

FilterVars emit_filter(RowBuilder& rb, const LinearExpr& u, const LinearExpr& v, std::optional<std::size_t> plus_target,
                       std::optional<std::size_t> minus_target, const std::string& prefix) {
  FilterVars f{};
  f.temp = rb.add_var(prefix + ".temp");
  f.u1 = rb.add_var(prefix + ".u1");
  f.temp2 = rb.add_var(prefix + ".temp2");
  f.temp2_copy = rb.add_var(prefix + ".temp2'");
  f.w = rb.add_var(prefix + ".w");
  f.v1 = rb.add_var(prefix + ".v1");
  f.v2 = rb.add_var(prefix + ".v2");
  f.v3 = rb.add_var(prefix + ".v3");
  // step 1
  for (const auto& [s, c] : u) {
    rb.add(f.temp, s, c);
    rb.add(f.u1, s, c);
  }
  for (const auto& [s, c] : v) {
    rb.add(f.temp, s, c);
    rb.add(f.v1, s, c);
  }
  // step 2
  for (std::size_t t : {f.temp2, f.temp2_copy}) {
    rb.add(t, f.temp, 1);
    rb.add(t, f.u1, -1);
  }
  rb.add(f.v2, f.v1, 1);
  // step 3: 1.1 * temp2 as temp2 + 0.1 * temp2'
  rb.add(f.w, f.temp2, 1);
  rb.add(f.w, f.temp2_copy, Rational(1, 10));
  rb.add(f.v3, f.v2, 1);
  // step 4
  if (plus_target) rb.add(*plus_target, f.w, 1);
  if (minus_target) {
    rb.add(*minus_target, f.v3, 1);
    rb.add(*minus_target, f.w, -1);
  }
  return f;
}

FilterTrace evaluate_filter(const Rational& u, const Rational& v, const FpFormat& fmt) {
  RowBuilder rb;
  std::size_t U = rb.add_var("u");
  std::size_t V = rb.add_var("v");
  std::size_t plus = rb.add_var("plus");
  std::size_t minus = rb.add_var("minus");
  FilterVars f = emit_filter(rb, {{U, 1}}, {{V, 1}}, plus, minus, "f");
  std::vector<Rational> init(rb.size(), Rational(0));
  init[U] = u;
  init[V] = v;
  Lds lds(rb.matrix(), init, fmt);
  auto points = orbit(lds, 4);
  return {points[1][f.temp], points[2][f.temp2], points[3][f.w], points[4][plus], points[4][minus]};
}

CompiledReduction compile_minsky(const MinskyMachine& m, TieRule tie) {
  RowBuilder rb;
  std::vector<StateBlock> blocks;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::string& n = m.names[j];
    blocks.push_back({rb.add_var("x." + n), rb.add_var("y." + n), rb.add_var("a." + n), rb.add_var("o." + n)});
  }
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto& ins = m.program[j];
    const StateBlock& src = blocks[j];
    const std::string& n = m.names[j];
    if (ins.op == MinskyInstruction::Op::Zero) {
      const StateBlock& z = blocks[ins.next];
      const StateBlock& nz = blocks[ins.nonzero];
      // c is the tested counter, d the other one; c = 10^k is 1 iff k = 0.
      std::size_t c = ins.counter == Counter::X ? src.x : src.y;
      std::size_t d = ins.counter == Counter::X ? src.y : src.x;
      std::size_t cz = ins.counter == Counter::X ? z.x : z.y, cnz = ins.counter == Counter::X ? nz.x : nz.y;
      std::size_t dz = ins.counter == Counter::X ? z.y : z.x, dnz = ins.counter == Counter::X ? nz.y : nz.x;
      // c >= 10 iff the counter is positive
      emit_filter(rb, {{src.unit, 10}}, {{c, 1}}, cnz, cz, n + ".fc");
      // d >= a iff the counter is zero
      emit_filter(rb, {{src.a, 1}}, {{d, 1}}, dz, dnz, n + ".fd");
      // a >= 10 d iff the counter is positive
      emit_filter(rb, {{d, 10}}, {{src.a, 1}}, nz.a, z.a, n + ".fa");
      // 1 >= c iff the counter is zero
      emit_filter(rb, {{c, 1}}, {{src.unit, 1}}, z.unit, nz.unit, n + ".fo");
      continue;
    }
    // inc / dec / halt: three staging copies, the update on the fourth step
    std::size_t stage[4][3];
    const std::size_t prim[4] = {src.x, src.y, src.a, src.unit};
    const char* tag[4] = {"x", "y", "a", "o"};
    for (int v = 0; v < 4; ++v) {
      for (int s = 0; s < 3; ++s) {
        stage[v][s] = rb.add_var(n + ".s" + std::to_string(s + 1) + tag[v]);
        rb.add(stage[v][s], s == 0 ? prim[v] : stage[v][s - 1], 1);
      }
    }
    if (ins.op == MinskyInstruction::Op::Halt) continue;  // values are dropped
    const StateBlock& dst = blocks[ins.next];
    Rational f = ins.op == MinskyInstruction::Op::Inc ? Rational(10) : Rational(1, 10);
    bool on_x = ins.counter == Counter::X;
    rb.add(dst.x, stage[0][2], on_x ? f : Rational(1));
    rb.add(dst.y, stage[1][2], on_x ? Rational(1) : f);
    rb.add(dst.a, stage[2][2], f);
    rb.add(dst.unit, stage[3][2], 1);
  }
  std::vector<Rational> init(rb.size(), Rational(0));
  init[blocks[0].x] = init[blocks[0].y] = init[blocks[0].a] = init[blocks[0].unit] = 1;
  FpFormat fmt{10, 1, tie};
  return CompiledReduction{Lds(rb.matrix(), init, fmt), rb.names(), blocks, 4};
}

namespace {

// 10^k as a p = 1 value: digit 1, exponent k + 1.
std::optional<std::uint64_t> power_of_ten(const FpNumber& v) {
  if (v.sign() <= 0 || v.digits() != 1 || v.raw_exponent() < 1) return std::nullopt;
  return static_cast<std::uint64_t>(v.raw_exponent() - 1);
}

bool all_zero(const FpVector& v) {
  return std::all_of(v.begin(), v.end(), [](const FpNumber& x) { return x.is_zero(); });
}

}  // namespace

std::optional<MinskyConfig> CompiledReduction::decode(const FpVector& v) const {
  std::optional<std::size_t> active;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& b = blocks[j];
    bool any = !v[b.x].is_zero() || !v[b.y].is_zero() || !v[b.a].is_zero() || !v[b.unit].is_zero();
    if (!any) continue;
    if (active) return std::nullopt;
    active = j;
  }
  if (!active) return std::nullopt;
  const auto& b = blocks[*active];
  auto x = power_of_ten(v[b.x]);
  auto y = power_of_ten(v[b.y]);
  auto a = power_of_ten(v[b.a]);
  auto unit = power_of_ten(v[b.unit]);
  if (!x || !y || !a || !unit || *unit != 0 || *a != *x + *y) return std::nullopt;
  // Every non-primary variable must be zero at a boundary.
  std::vector<bool> primary(v.size(), false);
  for (const auto& blk : blocks) primary[blk.x] = primary[blk.y] = primary[blk.a] = primary[blk.unit] = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!primary[i] && !v[i].is_zero()) return std::nullopt;
  }
  return MinskyConfig{*active, *x, *y};
}

CosimReport cosimulate(const MinskyMachine& m, const CompiledReduction& compiled, std::uint64_t max_machine_steps) {
  CosimReport rep;
  const Lds& lds = compiled.lds;
  MinskyConfig cfg;
  FpVector x = lds.initial_point();
  std::uint64_t t = 0;
  auto check_boundary_mantissas = [&](const FpVector& v) {
    for (const auto& n : v) {
      if (!n.is_zero() && n.digits() != 1) rep.boundary_mantissas_ok = false;
    }
  };
  auto advance = [&] {
    x = lds.step(x);
    ++t;
    if (all_zero(x) && !rep.zero_time) rep.zero_time = t;
  };
  for (std::uint64_t s = 0;; ++s) {
    check_boundary_mantissas(x);
    auto decoded = compiled.decode(x);
    if (!decoded || !(*decoded == cfg)) {
      rep.agreed = false;
      rep.message = "decoder mismatch at machine step " + std::to_string(s) + " (LDS step " + std::to_string(t) + ")";
      return rep;
    }
    if (is_halted(m, cfg)) {
      for (int k = 0; k < 4; ++k) advance();
      rep.halted = true;
      rep.machine_steps = s;
      if (rep.zero_time != t) {
        rep.agreed = false;
        rep.message = "zero vector not first reached at LDS step " + std::to_string(t);
      } else {
        rep.message = "both halt; zero vector at LDS step " + std::to_string(t);
      }
      return rep;
    }
    if (s == max_machine_steps) {
      rep.machine_steps = s;
      rep.message = "no halt within " + std::to_string(s) + " machine steps";
      return rep;
    }
    try {
      cfg = machine_step(m, cfg);
    } catch (const DecrementOnZero&) {
      rep.decrement_on_zero = true;
      rep.agreed = false;
      rep.machine_steps = s;
      rep.message = DecrementOnZero(s, cfg.state).what();
      return rep;
    }
    for (int k = 0; k < 4; ++k) advance();
    if (rep.zero_time) {
      rep.agreed = false;
      rep.message = "zero vector reached before the machine halted (LDS step " + std::to_string(*rep.zero_time) + ")";
      return rep;
    }
  }
}

}  // namespace fpmc

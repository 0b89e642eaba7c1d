#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fpmc/certificate_io.hpp"
#include "fpmc/hitting.hpp"
#include "fpmc/lds_io.hpp"
#include "fpmc/minsky.hpp"
#include "fpmc/omega.hpp"
#include "fpmc/reach.hpp"
#include "json.hpp"

namespace fpmc::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<unsigned long> base;
  std::optional<unsigned> precision;
  std::string tie;
  std::string format = "human";
  std::uint64_t steps = 10;
  std::uint64_t cap = 100000;
  bool skip_initial = false;

  bool machine() const { return format == "machine"; }
  DetectionOptions detection() const {
    DetectionOptions d;
    d.cap = cap;
    return d;
  }
};

std::optional<TieRule> tie_override(const Options& o) {
  if (o.tie.empty()) return std::nullopt;
  try {
    return parse_tie_rule(o.tie);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--tie: ") + e.what());
  }
}

// Header fields present in the file, so flags can be checked against them.
std::vector<std::string> header_keys(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    std::vector<std::string> keys;
    for (std::size_t k = 1; k < toks.size(); ++k) keys.push_back(toks[k].substr(0, toks[k].find('=')));
    return keys;
  }
  return {};
}

Lds load_lds(const std::string& path, const Options& o) {
  std::string text = read_text_file(path);
  Lds lds = parse_lds(text);
  auto keys = header_keys(text);
  auto has = [&](const char* k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
  FpFormat fmt = lds.format();
  if (o.base) {
    if (has("base") && *o.base != fmt.base) {
      throw UsageError("--base " + std::to_string(*o.base) + " conflicts with base=" + std::to_string(fmt.base) +
                       " in " + path);
    }
    fmt.base = *o.base;
  }
  if (o.precision) {
    if (has("p") && *o.precision != fmt.precision) {
      throw UsageError("--precision " + std::to_string(*o.precision) + " conflicts with p=" +
                       std::to_string(fmt.precision) + " in " + path);
    }
    fmt.precision = *o.precision;
  }
  if (auto t = tie_override(o)) {
    if (has("tie") && *t != fmt.tie) {
      throw UsageError("--tie " + to_string(*t) + " conflicts with tie=" + to_string(fmt.tie) + " in " + path);
    }
    fmt.tie = *t;
  }
  if (fmt == lds.format()) return lds;
  try {
    return Lds(lds.matrix(), lds.init(), fmt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<NamedFormula> load_targets(const std::string& path, const Lds& lds) {
  auto targets = parse_targets(read_text_file(path));
  for (const auto& t : targets) {
    if (t.formula.arity() > lds.dim()) {
      throw UsageError("target '" + t.name + "' mentions x" + std::to_string(t.formula.arity()) +
                       " but the system has dimension " + std::to_string(lds.dim()));
    }
  }
  return targets;
}

std::string render_vector(const FpVector& v, const FpFormat& fmt) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += render(v[i], fmt);
  }
  return s;
}

json vector_json(const FpVector& v, const FpFormat& fmt) {
  json a = json::array();
  for (const auto& x : v) a.push_back(render(x, fmt));
  return a;
}

json growth_json(const Certificate& c) {
  json g = json::array();
  for (const auto& row : c.growth) {
    json r = json::array();
    for (const auto& x : row) r.push_back(x ? json(*x) : json(nullptr));
    g.push_back(r);
  }
  return g;
}

json certificate_json(const Certificate& c, const FpFormat& fmt) {
  json snap = json::array();
  for (const auto& v : c.snapshot) snap.push_back(vector_json(v, fmt));
  return {{"record", "certificate"}, {"start", c.start},       {"period", c.period},  {"phases", c.phases},
          {"growth", growth_json(c)}, {"verified", c.verified}, {"snapshot", snap}};
}

int refuse(std::ostream& err, const std::string& what) {
  err << "refused: " << what
      << "; reachability and model checking are undecidable once negative entries are allowed\n";
  return kRefused;
}

int cmd_simulate(const std::string& file, const Options& o, std::ostream& out) {
  Lds lds = load_lds(file, o);
  FpVector x = lds.initial_point();
  for (std::uint64_t t = 0;; ++t) {
    if (o.machine()) {
      out << json{{"record", "point"}, {"t", t}, {"x", vector_json(x, lds.format())}}.dump() << '\n';
    } else {
      out << t << ' ' << render_vector(x, lds.format()) << '\n';
    }
    if (t == o.steps) break;
    x = lds.step(x);
  }
  return kTrue;
}

int cmd_certificate(const std::string& file, const Options& o, std::ostream& out, std::ostream& err) {
  Lds lds = load_lds(file, o);
  if (!lds.non_negative()) return refuse(err, "the system has a negative entry");
  Certificate c;
  try {
    c = assemble_certificate(lds, o.detection());
  } catch (const DetectionCapExceeded& e) {
    err << "no certificate: " << e.what() << '\n';
    return kFalse;
  }
  bool ok = verify_certificate(lds, c, 3);
  c.verified = ok;
  if (o.machine()) {
    out << certificate_json(c, lds.format()).dump() << '\n';
  } else {
    out << summarize_certificate(c) << '\n' << render_certificate(c, lds.format());
  }
  return ok ? kTrue : kFalse;
}

int cmd_structure(const std::string& file, const Options& o, std::ostream& out) {
  Lds lds = load_lds(file, o);
  auto dec = scc_decompose(lds);
  if (o.machine()) {
    for (std::size_t c = 0; c < dec.components.size(); ++c) {
      json states = json::array();
      for (auto q : dec.components[c]) states.push_back(q + 1);
      out << json{{"record", "scc"},          {"index", c},
                  {"states", states},         {"period", dec.periods[c]},
                  {"cyclic", bool(dec.cyclic[c])}, {"feeders", dec.feeders[c]}}
                 .dump()
          << '\n';
    }
    out << json{{"record", "blowup"}, {"P", blowup_factor(lds)}}.dump() << '\n';
    return kTrue;
  }
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    out << "scc " << c << ": {";
    for (std::size_t k = 0; k < dec.components[c].size(); ++k) out << (k ? "," : "") << "x" << dec.components[c][k] + 1;
    out << "} period=" << dec.periods[c] << (dec.cyclic[c] ? "" : " acyclic");
    if (!dec.feeders[c].empty()) {
      out << " fed-by=";
      for (std::size_t k = 0; k < dec.feeders[c].size(); ++k) out << (k ? "," : "") << dec.feeders[c][k];
    }
    out << '\n';
  }
  out << "P=" << blowup_factor(lds) << '\n';
  return kTrue;
}

std::vector<Rational> parse_point(const std::string& text, const Lds& lds) {
  std::vector<Rational> y;
  for (const auto& tok : split_tokens(text)) {
    // plain rationals are kept exact, so an unrepresentable target is NEVER
    try {
      y.push_back(parse_rational(tok));
      continue;
    } catch (const ParseError&) {
    }
    try {
      y.push_back(to_rational(parse_fp(tok, lds.format(), true), lds.format()));
    } catch (const ParseError& e) {
      throw UsageError("--target: " + std::string(e.what()));
    }
  }
  if (y.size() != lds.dim()) {
    throw UsageError("--target has " + std::to_string(y.size()) + " values, the system has dimension " +
                     std::to_string(lds.dim()));
  }
  return y;
}

int cmd_reach(const std::string& file, const std::string& target, std::optional<std::uint64_t> bound,
              const Options& o, std::ostream& out, std::ostream& err) {
  Lds lds = load_lds(file, o);
  std::vector<Rational> y = parse_point(target, lds);
  ReachResult r;
  Certificate cert;
  bool certified = lds.non_negative() && !bound;
  if (certified) {
    try {
      cert = assemble_certificate(lds, o.detection());
    } catch (const DetectionCapExceeded& e) {
      err << "no certificate: " << e.what() << '\n';
      return kFalse;
    }
    r = point_reach_with(lds, cert, y);
  } else if (bound) {
    r = point_reach_bounded(lds, y, *bound);
  } else {
    return refuse(err, "certified reachability needs a non-negative system (use --bound for a bounded scan)");
  }
  if (o.machine()) {
    json rec{{"record", "reach"}, {"result", to_string(r)}, {"certified", certified}};
    if (r.status == ReachStatus::Reached) rec["step"] = r.step;
    out << rec.dump() << '\n';
    if (certified) out << certificate_json(cert, lds.format()).dump() << '\n';
  } else {
    out << to_string(r) << '\n';
    if (certified) out << summarize_certificate(cert) << '\n';
  }
  return r.status == ReachStatus::Reached ? kTrue : kFalse;
}

int cmd_hitting(const std::string& lds_file, const std::string& pred_file, const Options& o, std::ostream& out,
                std::ostream& err) {
  Lds lds = load_lds(lds_file, o);
  if (!lds.non_negative()) return refuse(err, "the system has a negative entry");
  auto targets = load_targets(pred_file, lds);
  Certificate cert;
  try {
    cert = assemble_certificate(lds, o.detection());
  } catch (const DetectionCapExceeded& e) {
    err << "no certificate: " << e.what() << '\n';
    return kFalse;
  }
  if (o.machine()) out << certificate_json(cert, lds.format()).dump() << '\n';
  else out << summarize_certificate(cert) << '\n';
  for (const auto& t : targets) {
    SemiLinearSet z = hitting_set(t.formula, lds, cert);
    if (o.machine()) {
      out << json{{"record", "hitting"}, {"target", t.name}, {"set", render(z)}}.dump() << '\n';
    } else {
      out << t.name << ": " << render(z) << '\n';
    }
  }
  return kTrue;
}

int cmd_check(const std::string& lds_file, const std::string& pred_file, const std::string& aut_file,
              const Options& o, std::ostream& out, std::ostream& err) {
  Lds lds = load_lds(lds_file, o);
  auto targets = load_targets(pred_file, lds);
  BuchiAutomaton aut = parse_buchi(read_text_file(aut_file));
  if (aut.alphabet > targets.size() || (aut.alphabet_declared && aut.alphabet != targets.size())) {
    throw UsageError("automaton alphabet has " + std::to_string(aut.alphabet) + " propositions, " + pred_file +
                     " defines " + std::to_string(targets.size()));
  }
  if (!lds.non_negative()) return refuse(err, "the system has a negative entry");
  std::vector<Formula> fs;
  for (const auto& t : targets) fs.push_back(t.formula);
  ModelCheckResult r;
  try {
    r = model_check(lds, fs, aut, o.detection(), o.skip_initial);
  } catch (const DetectionCapExceeded& e) {
    err << "no certificate: " << e.what() << '\n';
    return kFalse;
  }
  const char* verdict = r.satisfied ? "SATISFIED" : "VIOLATED";
  if (o.machine()) {
    out << json{{"record", "verdict"}, {"result", verdict}}.dump() << '\n';
    out << json{{"record", "lasso"}, {"word", render(r.word)}}.dump() << '\n';
    out << certificate_json(r.cert, lds.format()).dump() << '\n';
    for (std::size_t j = 0; j < targets.size(); ++j) {
      out << json{{"record", "hitting"}, {"target", targets[j].name}, {"set", render(r.hits[j])}}.dump() << '\n';
    }
  } else {
    out << verdict << '\n' << "lasso " << render(r.word) << '\n' << summarize_certificate(r.cert) << '\n';
    for (std::size_t j = 0; j < targets.size(); ++j) out << targets[j].name << ": " << render(r.hits[j]) << '\n';
  }
  return r.satisfied ? kTrue : kFalse;
}

MinskyMachine load_machine(const std::string& path) { return parse_minsky(read_text_file(path)); }

TieRule machine_tie(const Options& o) {
  if (o.base && *o.base != 10) throw UsageError("compiled machines use base 10");
  if (o.precision && *o.precision != 1) throw UsageError("compiled machines use precision 1");
  return tie_override(o).value_or(TieRule::HalfAwayFromZero);
}

int cmd_compile(const std::string& file, const std::string& out_path, const Options& o, std::ostream& out) {
  MinskyMachine m = load_machine(file);
  CompiledReduction c = compile_minsky(m, machine_tie(o));
  std::string text = "# compiled from " + file + ": " + std::to_string(c.names.size()) + " variables\n# vars:";
  for (const auto& n : c.names) text += " " + n;
  text += "\n" + render_lds(c.lds);
  if (out_path.empty()) {
    out << text;
    return kTrue;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + out_path);
  if (o.machine()) {
    out << json{{"record", "compiled"}, {"path", out_path}, {"dim", c.lds.dim()}, {"states", m.size()}}.dump() << '\n';
  } else {
    out << "wrote " << out_path << " (d=" << c.lds.dim() << ", " << m.size() << " machine states)\n";
  }
  return kTrue;
}

int cmd_cosim(const std::string& file, const Options& o, std::ostream& out, std::ostream& err) {
  MinskyMachine m = load_machine(file);
  CompiledReduction c = compile_minsky(m, machine_tie(o));
  CosimReport r = cosimulate(m, c, o.steps);
  if (o.machine()) {
    json rec{{"record", "cosim"},
             {"agreed", r.agreed},
             {"halted", r.halted},
             {"machine_steps", r.machine_steps},
             {"boundary_mantissas_ok", r.boundary_mantissas_ok},
             {"decrement_on_zero", r.decrement_on_zero},
             {"message", r.message}};
    rec["zero_time"] = r.zero_time ? json(*r.zero_time) : json(nullptr);
    out << rec.dump() << '\n';
  } else {
    out << (r.agreed ? "AGREE" : "DISAGREE") << ' ' << r.message << '\n';
    out << "machine_steps=" << r.machine_steps << " halted=" << (r.halted ? "true" : "false") << " zero_time="
        << (r.zero_time ? std::to_string(*r.zero_time) : std::string("none"))
        << " boundary_mantissas=" << (r.boundary_mantissas_ok ? "ok" : "bad") << '\n';
  }
  if (r.decrement_on_zero) err << "error: " << r.message << '\n';
  return r.agreed && r.boundary_mantissas_ok ? kTrue : kFalse;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking of rounded linear dynamical systems", "fpmc"};
  app.require_subcommand(1);
  Options o;
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--base", o.base, "Base; must match the file header if it sets one");
    sub->add_option("--precision", o.precision, "Digits of precision; must match the file header if it sets one");
    sub->add_option("--tie", o.tie, "Tie rule: half-away-from-zero, half-to-even, half-up, half-down");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "machine"}));
  };
  auto add_cap = [&](CLI::App* sub) {
    sub->add_option("--cap", o.cap, "Largest orbit index simulated while looking for a certificate");
  };

  std::string lds_file, pred_file, aut_file, machine_file, out_path, target;
  std::optional<std::uint64_t> bound;

  auto* simulate = app.add_subcommand("simulate", "Print the rounded orbit");
  simulate->add_option("system", lds_file, "System file")->required();
  simulate->add_option("--steps", o.steps, "Last step printed");
  add_format(simulate);

  auto* certificate = app.add_subcommand("certificate", "Find and verify a pseudo-period certificate");
  certificate->add_option("system", lds_file, "System file")->required();
  add_format(certificate);
  add_cap(certificate);

  auto* structure = app.add_subcommand("structure", "Strongly connected components, periods and blow-up factor");
  structure->add_option("system", lds_file, "System file")->required();
  add_format(structure);

  auto* reach = app.add_subcommand("reach", "Point reachability");
  reach->add_option("system", lds_file, "System file")->required();
  reach->add_option("--target", target, "Target point, space separated")->required();
  reach->add_option("--bound", bound, "Scan at most this many steps instead of certifying");
  add_format(reach);
  add_cap(reach);

  auto* hitting = app.add_subcommand("hitting", "Hitting sets of the targets in a predicate file");
  hitting->add_option("system", lds_file, "System file")->required();
  hitting->add_option("predicates", pred_file, "Predicate file")->required();
  add_format(hitting);
  add_cap(hitting);

  auto* check = app.add_subcommand("check", "Model check against a Büchi automaton");
  check->add_option("system", lds_file, "System file")->required();
  check->add_option("predicates", pred_file, "Predicate file")->required();
  check->add_option("automaton", aut_file, "Automaton file")->required();
  check->add_flag("--skip-initial", o.skip_initial, "Start the word at x(1)");
  add_format(check);
  add_cap(check);

  auto* compile = app.add_subcommand("compile-minsky", "Compile a two-counter machine into a system");
  compile->add_option("machine", machine_file, "Machine file")->required();
  compile->add_option("--out", out_path, "Output system file (default: standard output)");
  add_format(compile);

  auto* cosim = app.add_subcommand("cosim", "Run a machine and its compiled system in lockstep");
  cosim->add_option("machine", machine_file, "Machine file")->required();
  cosim->add_option("--steps", o.steps, "Machine step bound")->default_val(200);
  add_format(cosim);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kTrue : kUsage;
  }

  try {
    if (*simulate) return cmd_simulate(lds_file, o, out);
    if (*certificate) return cmd_certificate(lds_file, o, out, err);
    if (*structure) return cmd_structure(lds_file, o, out);
    if (*reach) return cmd_reach(lds_file, target, bound, o, out, err);
    if (*hitting) return cmd_hitting(lds_file, pred_file, o, out, err);
    if (*check) return cmd_check(lds_file, pred_file, aut_file, o, out, err);
    if (*compile) return cmd_compile(machine_file, out_path, o, out);
    if (*cosim) return cmd_cosim(machine_file, o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const NegativeSystemError& e) {
    return refuse(err, e.what());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace fpmc::cli

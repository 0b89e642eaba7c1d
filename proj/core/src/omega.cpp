#include "fpmc/omega.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "fpmc/lds_io.hpp"
#include "fpmc/structure.hpp"

namespace fpmc {

std::string render_letter(Letter a) {
  std::string out = "{";
  bool first = true;
  for (unsigned j = 0; j < 64; ++j) {
    if (!(a >> j & 1)) continue;
    out += (first ? "" : ",") + std::to_string(j + 1);
    first = false;
  }
  return out + "}";
}

Letter LassoWord::at(std::uint64_t t) const {
  if (t < prefix.size()) return prefix[t];
  return cycle[(t - prefix.size()) % cycle.size()];
}

void LassoWord::canonicalize() {
  if (cycle.empty()) throw std::invalid_argument("lasso cycle must be nonempty");
  const std::size_t n = cycle.size();
  for (std::size_t q = 1; q < n; ++q) {
    if (n % q != 0) continue;
    bool ok = true;
    for (std::size_t i = q; i < n && ok; ++i) ok = cycle[i] == cycle[i % q];
    if (ok) {
      cycle.resize(q);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == cycle.back()) {
    prefix.pop_back();
    std::rotate(cycle.rbegin(), cycle.rbegin() + 1, cycle.rend());
  }
}

std::string render(const LassoWord& w) {
  auto list = [](const std::vector<Letter>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + render_letter(xs[i]);
    return out + "]";
  };
  return "u=" + list(w.prefix) + " v=" + list(w.cycle);
}

SemiLinearSet letter_class(const std::vector<SemiLinearSet>& hits, Letter s) {
  SemiLinearSet out = SemiLinearSet::naturals();
  for (std::size_t j = 0; j < hits.size(); ++j) {
    out = set_intersect(out, (s >> j & 1) ? hits[j] : set_complement(hits[j]));
  }
  return out;
}

LassoWord lasso_from_hits(const std::vector<SemiLinearSet>& hits, bool skip_initial) {
  if (hits.size() > 64) throw std::invalid_argument("at most 64 targets");
  std::uint64_t threshold = 0, period = 1;
  for (const auto& h : hits) {
    threshold = std::max(threshold, h.threshold());
    period = lcm_u64(period, h.period());
  }
  const std::uint64_t shift = skip_initial ? 1 : 0;
  auto letter = [&](std::uint64_t t) {
    Letter a = 0;
    for (std::size_t j = 0; j < hits.size(); ++j) {
      if (hits[j].member(t + shift)) a |= Letter(1) << j;
    }
    return a;
  };
  LassoWord w;
  w.alphabet = static_cast<unsigned>(hits.size());
  for (std::uint64_t t = 0; t < threshold; ++t) w.prefix.push_back(letter(t));
  for (std::uint64_t t = threshold; t < threshold + period; ++t) w.cycle.push_back(letter(t));
  w.canonicalize();
  return w;
}

LassoWord characteristic_word(const Lds& lds, const std::vector<Formula>& targets, const Certificate& cert,
                              bool skip_initial) {
  std::vector<SemiLinearSet> hits;
  for (const auto& y : targets) hits.push_back(hitting_set(y, lds, cert));
  return lasso_from_hits(hits, skip_initial);
}

std::size_t BuchiAutomaton::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw std::invalid_argument("unknown state '" + name + "'");
  return static_cast<std::size_t>(it - states.begin());
}

namespace {

Letter parse_label(const std::string& s, unsigned& max_index, std::size_t line) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw ParseError("expected a letter like {1,3}", line);
  Letter a = 0;
  std::stringstream in(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    unsigned long j = 0;
    try {
      std::size_t used = 0;
      j = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("invalid target index '" + item + "'", line);
    }
    if (j < 1 || j > 64) throw ParseError("target index out of range: " + item, line);
    a |= Letter(1) << (j - 1);
    max_index = std::max(max_index, static_cast<unsigned>(j));
  }
  return a;
}

}  // namespace

BuchiAutomaton parse_buchi(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  BuchiAutomaton b;
  bool have_states = false;
  unsigned max_index = 0;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> pending;  // init/accept/trans lines
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    // Allow `q0 --{1}--> q1` with spaces inside braces.
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "states:") {
      if (have_states) throw ParseError("duplicate 'states:'", lineno);
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (std::find(b.states.begin(), b.states.end(), toks[k]) != b.states.end()) {
          throw ParseError("duplicate state '" + toks[k] + "'", lineno);
        }
        b.states.push_back(toks[k]);
      }
      if (b.states.empty()) throw ParseError("no states declared", lineno);
      have_states = true;
    } else if (key == "alphabet:") {
      if (toks.size() != 2) throw ParseError("expected 'alphabet: <k>'", lineno);
      try {
        b.alphabet = static_cast<unsigned>(std::stoul(toks[1]));
      } catch (const std::exception&) {
        throw ParseError("invalid alphabet size", lineno);
      }
      if (b.alphabet > 64) throw ParseError("alphabet larger than 64", lineno);
      b.alphabet_declared = true;
    } else if (key == "init:" || key == "accept:" || key == "trans:") {
      pending.emplace_back(lineno, toks);
    } else {
      throw ParseError("unknown line '" + key + "'", lineno);
    }
  }
  if (!have_states) throw ParseError("missing 'states:' line", lineno);
  b.accepting.assign(b.states.size(), false);
  auto index = [&](const std::string& name, std::size_t line) {
    auto it = std::find(b.states.begin(), b.states.end(), name);
    if (it == b.states.end()) throw ParseError("undeclared state '" + name + "'", line);
    return static_cast<std::size_t>(it - b.states.begin());
  };
  bool have_init = false;
  for (auto& [line, toks] : pending) {
    if (toks[0] == "init:") {
      for (std::size_t k = 1; k < toks.size(); ++k) b.initial.push_back(index(toks[k], line));
      have_init = true;
    } else if (toks[0] == "accept:") {
      for (std::size_t k = 1; k < toks.size(); ++k) b.accepting[index(toks[k], line)] = true;
    } else {
      std::string rest;
      for (std::size_t k = 1; k < toks.size(); ++k) rest += toks[k];
      auto open = rest.find("--");
      auto close = rest.find("-->", open == std::string::npos ? 0 : open + 2);
      if (open == std::string::npos || close == std::string::npos) {
        throw ParseError("expected 'trans: q --{..}--> q2'", line);
      }
      BuchiAutomaton::Transition tr;
      tr.from = index(rest.substr(0, open), line);
      tr.to = index(rest.substr(close + 3), line);
      std::string label = rest.substr(open + 2, close - open - 2);
      if (label == "*") {
        tr.wildcard = true;
        tr.label = 0;
      } else {
        tr.label = parse_label(label, max_index, line);
      }
      b.transitions.push_back(tr);
    }
  }
  if (!have_init || b.initial.empty()) throw ParseError("missing 'init:' line", lineno);
  if (b.alphabet_declared) {
    if (max_index > b.alphabet) throw ParseError("transition letter uses an index beyond the alphabet", lineno);
  } else {
    b.alphabet = max_index;
  }
  return b;
}

std::string render_buchi(const BuchiAutomaton& b) {
  std::ostringstream out;
  out << "states:";
  for (const auto& s : b.states) out << " " << s;
  out << "\ninit:";
  for (auto i : b.initial) out << " " << b.states[i];
  out << "\naccept:";
  for (std::size_t i = 0; i < b.states.size(); ++i) {
    if (b.accepting[i]) out << " " << b.states[i];
  }
  out << "\nalphabet: " << b.alphabet << "\n";
  for (const auto& t : b.transitions) {
    out << "trans: " << b.states[t.from] << " --" << (t.wildcard ? "*" : render_letter(t.label)) << "--> "
        << b.states[t.to] << "\n";
  }
  return out.str();
}

bool buchi_accepts_lasso(const BuchiAutomaton& b, const LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso cycle must be nonempty");
  const std::size_t len = w.prefix.size() + w.cycle.size();
  const Letter allowed = b.alphabet >= 64 ? ~Letter(0) : (Letter(1) << b.alphabet) - 1;
  for (std::size_t pos = 0; pos < len; ++pos) {
    if (w.at(pos) & ~allowed) {
      throw std::invalid_argument("word letter " + render_letter(w.at(pos)) + " is outside the automaton alphabet");
    }
  }
  const std::size_t n = b.states.size();
  auto node = [&](std::size_t q, std::size_t pos) { return q * len + pos; };
  auto next_pos = [&](std::size_t pos) { return pos + 1 < len ? pos + 1 : w.prefix.size(); };
  Digraph g(n * len);
  for (const auto& tr : b.transitions) {
    for (std::size_t pos = 0; pos < len; ++pos) {
      if (tr.wildcard || tr.label == w.at(pos)) g[node(tr.from, pos)].push_back(node(tr.to, next_pos(pos)));
    }
  }
  std::vector<bool> reached(g.size(), false);
  std::deque<std::size_t> queue;
  for (auto q : b.initial) {
    if (!reached[node(q, 0)]) {
      reached[node(q, 0)] = true;
      queue.push_back(node(q, 0));
    }
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (auto u : g[v]) {
      if (!reached[u]) {
        reached[u] = true;
        queue.push_back(u);
      }
    }
  }
  SccDecomposition dec = scc_decompose(g);
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    if (!dec.cyclic[c]) continue;
    for (std::size_t v : dec.components[c]) {
      if (reached[v] && b.accepting[v / len]) return true;
    }
  }
  return false;
}

ModelCheckResult model_check(const Lds& lds, const std::vector<Formula>& targets, const BuchiAutomaton& spec,
                             const DetectionOptions& opts, bool skip_initial) {
  if (!lds.non_negative()) throw NegativeSystemError();
  if (spec.alphabet_declared && spec.alphabet != targets.size()) {
    throw std::invalid_argument("automaton alphabet has " + std::to_string(spec.alphabet) + " targets, predicates give " +
                                std::to_string(targets.size()));
  }
  if (spec.alphabet > targets.size()) {
    throw std::invalid_argument("automaton refers to target " + std::to_string(spec.alphabet) + " but only " +
                                std::to_string(targets.size()) + " are defined");
  }
  for (const auto& y : targets) {
    if (y.arity() > lds.dim()) throw std::invalid_argument("target references a coordinate beyond the dimension");
  }
  ModelCheckResult out;
  out.cert = assemble_certificate(lds, opts);
  for (const auto& y : targets) out.hits.push_back(hitting_set(y, lds, out.cert));
  out.word = lasso_from_hits(out.hits, skip_initial);
  BuchiAutomaton widened = spec;
  widened.alphabet = static_cast<unsigned>(targets.size());
  out.satisfied = buchi_accepts_lasso(widened, out.word);
  return out;
}

}  // namespace fpmc

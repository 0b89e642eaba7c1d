#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fpmc/hitting.hpp"

namespace fpmc {

/// A set of target indices; bit j-1 stands for target j.
using Letter = std::uint64_t;

std::string render_letter(Letter a);

/// The ultimately periodic word u v v v ...
struct LassoWord {
  unsigned alphabet = 0;  // letters are subsets of {1..alphabet}
  std::vector<Letter> prefix;
  std::vector<Letter> cycle;  // nonempty

  Letter at(std::uint64_t t) const;
  /// Shortest cycle, then shortest prefix; equal words become identical.
  void canonicalize();
  bool operator==(const LassoWord&) const = default;
};

std::string render(const LassoWord& w);

/// {t : the letter at t is exactly S}, from the hitting sets of the targets.
SemiLinearSet letter_class(const std::vector<SemiLinearSet>& hits, Letter s);

/// Word whose letter at t is {j : t in hits[j-1]}. With `skip_initial` the
/// word starts at t = 1.
LassoWord lasso_from_hits(const std::vector<SemiLinearSet>& hits, bool skip_initial = false);

LassoWord characteristic_word(const Lds& lds, const std::vector<Formula>& targets, const Certificate& cert,
                              bool skip_initial = false);

struct BuchiAutomaton {
  struct Transition {
    std::size_t from;
    std::size_t to;
    Letter label;
    bool wildcard = false;  // matches every letter
  };
  std::vector<std::string> states;
  unsigned alphabet = 0;
  bool alphabet_declared = false;
  std::vector<std::size_t> initial;
  std::vector<bool> accepting;
  std::vector<Transition> transitions;

  std::size_t state_index(const std::string& name) const;
};

/// Text format:
///   states: q0 q1
///   init: q0
///   accept: q1
///   alphabet: 2            (optional; defaults to the largest index used)
///   trans: q0 --{1,2}--> q1
///   trans: q1 --{}--> q1
///   trans: q1 --*--> q0    (any letter)
BuchiAutomaton parse_buchi(std::string_view text);
std::string render_buchi(const BuchiAutomaton& b);

/// Membership of u v^omega: search the product of automaton states and lasso
/// positions for a reachable cycle through an accepting state.
bool buchi_accepts_lasso(const BuchiAutomaton& b, const LassoWord& w);

struct ModelCheckResult {
  bool satisfied = false;
  Certificate cert;
  std::vector<SemiLinearSet> hits;
  LassoWord word;
};

/// Certificate, hitting sets, characteristic word, then lasso acceptance.
/// Throws NegativeSystemError for systems with negative entries.
ModelCheckResult model_check(const Lds& lds, const std::vector<Formula>& targets, const BuchiAutomaton& spec,
                             const DetectionOptions& opts = {}, bool skip_initial = false);

}  // namespace fpmc

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sgplan/ltl.hpp"

namespace sgplan {

class StateBlowupError : public std::runtime_error {
 public:
  explicit StateBlowupError(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic finite automaton for a co-safe formula. States are
/// canonically normalized progressed formulas; the single accepting state is
/// the constant true. Transitions are stored densely over each state's
/// relevant propositions (the props appearing in its formula), so a label is
/// consumed by masking it against that subset.
struct Dfa {
  struct State {
    std::vector<int> relevant;  // indices into props, sorted
    std::vector<int> succ;      // size 1 << relevant.size()
  };

  std::vector<LtlPtr> formulas;
  std::vector<std::string> props;  // canonical proposition order
  std::vector<State> states;
  int initial = 0;
  std::vector<char> accepting;
  std::vector<char> can_accept;  // acceptance reachable from this state

  int num_states() const { return static_cast<int>(states.size()); }
  bool is_accepting(int q) const { return accepting[static_cast<size_t>(q)] != 0; }
  bool is_sink(int q) const { return can_accept[static_cast<size_t>(q)] == 0; }

  int mask_of(int q, const LabelSet& label) const;
  int step(int q, const LabelSet& label) const;
  int step_mask(int q, int mask) const { return states[static_cast<size_t>(q)].succ[static_cast<size_t>(mask)]; }

  /// Reconstructs the label set selected by a transition mask.
  LabelSet label_of_mask(int q, int mask) const;
};

/// Canonical normalization used for automaton states: And/Or flattened,
/// children sorted and deduplicated, boolean constants folded.
LtlPtr normalize_formula(const LtlPtr& f);

/// One-step formula progression by a label (input must be normalized co-safe NNF).
LtlPtr progress(const LtlPtr& f, const LabelSet& label);

Dfa compile(const LtlPtr& f, int state_cap = 10000);

bool accepts(const Dfa& dfa, const Word& word);

struct AutomatonStep {
  LabelSet label;
  int to = 0;
};

/// Minimum-hop path from q to any accepting state; empty when q accepts
/// already, nullopt when no accepting state is reachable. Each step carries
/// the cheapest label (fewest propositions, canonical tie-break) realizing it.
std::optional<std::vector<AutomatonStep>> shortest_accepting_path(const Dfa& dfa, int q);

/// Plain-text edge list: `initial:` / `accepting:` headers, then one line per
/// transition in the form `q --{p1,p2}--> q'`.
std::string automaton_to_text(const Dfa& dfa);
std::string automaton_to_dot(const Dfa& dfa);

}  // namespace sgplan

#include "sgplan/automaton.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace sgplan {

namespace {

bool is_literal(const LtlPtr& f) {
  return f->kind == LtlKind::Atom ||
         (f->kind == LtlKind::Not && f->lhs->kind == LtlKind::Atom);
}

// Complement of a literal, for And-level contradiction detection.
bool complementary(const LtlPtr& a, const LtlPtr& b) {
  if (a->kind == LtlKind::Atom && b->kind == LtlKind::Not)
    return b->lhs->atom == a->atom;
  if (b->kind == LtlKind::Atom && a->kind == LtlKind::Not)
    return a->lhs->atom == b->atom;
  return false;
}

void flatten(LtlKind op, const LtlPtr& f, std::vector<LtlPtr>& out) {
  if (f->kind == op) {
    flatten(op, f->lhs, out);
    flatten(op, f->rhs, out);
  } else {
    out.push_back(f);
  }
}

LtlPtr rebuild(LtlKind op, std::vector<LtlPtr>& kids, const LtlPtr& empty_value) {
  if (kids.empty()) return empty_value;
  LtlPtr acc = kids.back();
  for (size_t i = kids.size() - 1; i-- > 0;) {
    acc = op == LtlKind::And ? ltl::f_and(kids[i], acc) : ltl::f_or(kids[i], acc);
  }
  return acc;
}

}  // namespace

LtlPtr normalize_formula(const LtlPtr& f) {
  using namespace ltl;
  switch (f->kind) {
    case LtlKind::True:
    case LtlKind::False:
    case LtlKind::Atom: return f;
    case LtlKind::Not: {
      LtlPtr c = normalize_formula(f->lhs);
      if (c->kind == LtlKind::True) return make_false();
      if (c->kind == LtlKind::False) return make_true();
      if (c->kind == LtlKind::Not) return c->lhs;
      return f_not(c);
    }
    case LtlKind::Next: {
      LtlPtr c = normalize_formula(f->lhs);
      if (c->kind == LtlKind::True || c->kind == LtlKind::False) return c;
      return next(c);
    }
    case LtlKind::Eventually: {
      LtlPtr c = normalize_formula(f->lhs);
      if (c->kind == LtlKind::True || c->kind == LtlKind::False) return c;
      if (c->kind == LtlKind::Eventually) return c;  // F F x == F x
      return eventually(c);
    }
    case LtlKind::Always: {
      LtlPtr c = normalize_formula(f->lhs);
      if (c->kind == LtlKind::True) return make_true();
      if (c->kind == LtlKind::False) return make_false();
      return always(c);
    }
    case LtlKind::Until: {
      LtlPtr a = normalize_formula(f->lhs);
      LtlPtr b = normalize_formula(f->rhs);
      if (b->kind == LtlKind::True) return make_true();
      if (b->kind == LtlKind::False) return make_false();
      if (a->kind == LtlKind::False) return b;
      if (a->kind == LtlKind::True) return normalize_formula(eventually(b));
      return until(a, b);
    }
    case LtlKind::Release: {
      LtlPtr a = normalize_formula(f->lhs);
      LtlPtr b = normalize_formula(f->rhs);
      return release(a, b);
    }
    case LtlKind::Imply:
      return normalize_formula(ltl::f_or(ltl::f_not(f->lhs), f->rhs));
    case LtlKind::And:
    case LtlKind::Or: {
      // The boolean level is flattened into a canonical Or-of-Ands. Without
      // the And-over-Or distribution, formula progression keeps stacking
      // alternating And/Or layers and the state closure never converges; in
      // disjunctive form the states are bounded by antichains of conjunct
      // sets over the subformula closure.
      //
      // Note: Or(p, !p) is deliberately left unsimplified. The acceptance
      // oracle cannot certify a tautology past the end of a finite word, so
      // folding it to true would make the automaton accept the empty word
      // where the oracle does not.
      using Clause = std::vector<LtlPtr>;  // conjuncts, sorted, deduped
      auto clause_less = [](const Clause& a, const Clause& b) {
        size_t n = std::min(a.size(), b.size());
        for (size_t i = 0; i < n; ++i) {
          int c = compare(a[i], b[i]);
          if (c != 0) return c < 0;
        }
        return a.size() < b.size();
      };
      auto clause_eq = [](const Clause& a, const Clause& b) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
          if (!equal(a[i], b[i])) return false;
        return true;
      };
      // subset check over sorted clauses
      auto clause_subset = [](const Clause& a, const Clause& b) {
        size_t j = 0;
        for (const LtlPtr& x : a) {
          while (j < b.size() && compare(b[j], x) < 0) ++j;
          if (j == b.size() || !equal(b[j], x)) return false;
        }
        return true;
      };

      // clauses(n): disjunctive form of an already-normalized child.
      auto clauses = [](const LtlPtr& n) {
        std::vector<Clause> out;
        std::vector<LtlPtr> ds;
        flatten(LtlKind::Or, n, ds);
        for (const LtlPtr& d : ds) {
          Clause c;
          flatten(LtlKind::And, d, c);
          out.push_back(std::move(c));
        }
        return out;
      };

      std::vector<LtlPtr> raw;
      flatten(f->kind, f, raw);
      std::vector<std::vector<Clause>> kid_clauses;
      const bool is_and = f->kind == LtlKind::And;
      for (const auto& k : raw) {
        LtlPtr n = normalize_formula(k);
        if (is_and) {
          if (n->kind == LtlKind::False) return make_false();
          if (n->kind == LtlKind::True) continue;
        } else {
          if (n->kind == LtlKind::True) return make_true();
          if (n->kind == LtlKind::False) continue;
        }
        kid_clauses.push_back(clauses(n));
      }
      if (kid_clauses.empty()) return is_and ? make_true() : make_false();

      std::vector<Clause> result;
      if (is_and) {
        result.push_back({});
        for (const auto& kc : kid_clauses) {
          std::vector<Clause> next;
          for (const Clause& acc : result)
            for (const Clause& c : kc) {
              Clause merged = acc;
              merged.insert(merged.end(), c.begin(), c.end());
              next.push_back(std::move(merged));
            }
          result = std::move(next);
        }
      } else {
        for (auto& kc : kid_clauses)
          for (Clause& c : kc) result.push_back(std::move(c));
      }

      // Canonicalize each clause; drop contradictory ones.
      std::vector<Clause> live;
      for (Clause& c : result) {
        std::sort(c.begin(), c.end(),
                  [](const LtlPtr& a, const LtlPtr& b) { return compare(a, b) < 0; });
        c.erase(std::unique(c.begin(), c.end(),
                            [](const LtlPtr& a, const LtlPtr& b) { return equal(a, b); }),
                c.end());
        bool dead = false;
        for (size_t i = 0; i + 1 < c.size() && !dead; ++i)
          for (size_t j = i + 1; j < c.size(); ++j)
            if (is_literal(c[i]) && is_literal(c[j]) && complementary(c[i], c[j])) {
              dead = true;
              break;
            }
        if (!dead) live.push_back(std::move(c));
      }
      if (live.empty()) return make_false();
      std::sort(live.begin(), live.end(), clause_less);
      live.erase(std::unique(live.begin(), live.end(), clause_eq), live.end());
      // Absorption: Or(x, And(x, y)) == x.
      std::vector<char> absorbed(live.size(), 0);
      for (size_t i = 0; i < live.size(); ++i)
        for (size_t j = 0; j < live.size() && !absorbed[i]; ++j)
          if (j != i && live[j].size() < live[i].size() && clause_subset(live[j], live[i]))
            absorbed[i] = 1;
      std::vector<Clause> kept;
      for (size_t i = 0; i < live.size(); ++i)
        if (!absorbed[i]) kept.push_back(std::move(live[i]));
      if (kept.size() == 1 && kept[0].empty()) return make_true();

      std::vector<LtlPtr> disjuncts;
      for (Clause& c : kept) disjuncts.push_back(rebuild(LtlKind::And, c, make_true()));
      return rebuild(LtlKind::Or, disjuncts, make_false());
    }
  }
  throw std::logic_error("unreachable");
}

LtlPtr progress(const LtlPtr& f, const LabelSet& label) {
  using namespace ltl;
  switch (f->kind) {
    case LtlKind::True: return make_true();
    case LtlKind::False: return make_false();
    case LtlKind::Atom: return label.count(f->atom) ? make_true() : make_false();
    case LtlKind::Not:
      if (f->lhs->kind != LtlKind::Atom)
        throw std::logic_error("progress expects NNF input");
      return label.count(f->lhs->atom) ? make_false() : make_true();
    case LtlKind::And: return f_and(progress(f->lhs, label), progress(f->rhs, label));
    case LtlKind::Or: return f_or(progress(f->lhs, label), progress(f->rhs, label));
    case LtlKind::Next: return f->lhs;
    case LtlKind::Until:
      return f_or(progress(f->rhs, label), f_and(progress(f->lhs, label), f));
    case LtlKind::Eventually: return f_or(progress(f->lhs, label), f);
    case LtlKind::Imply:
    case LtlKind::Release:
    case LtlKind::Always: throw std::logic_error("progress requires a co-safe NNF formula");
  }
  throw std::logic_error("unreachable");
}

int Dfa::mask_of(int q, const LabelSet& label) const {
  const State& st = states[static_cast<size_t>(q)];
  int mask = 0;
  for (size_t b = 0; b < st.relevant.size(); ++b) {
    if (label.count(props[static_cast<size_t>(st.relevant[b])])) mask |= 1 << b;
  }
  return mask;
}

int Dfa::step(int q, const LabelSet& label) const {
  return states[static_cast<size_t>(q)].succ[static_cast<size_t>(mask_of(q, label))];
}

LabelSet Dfa::label_of_mask(int q, int mask) const {
  const State& st = states[static_cast<size_t>(q)];
  LabelSet label;
  for (size_t b = 0; b < st.relevant.size(); ++b) {
    if (mask & (1 << b)) label.insert(props[static_cast<size_t>(st.relevant[b])]);
  }
  return label;
}

Dfa compile(const LtlPtr& f, int state_cap) {
  CosafetyVerdict v = check_cosafe(f);
  if (!v.is_cosafe)
    throw NotCosafeError("compile: formula is not co-safe: " +
                         v.offending_subformula.value_or(""));

  Dfa dfa;
  LtlPtr init = normalize_formula(to_nnf(f));
  dfa.props = props(init);

  std::unordered_map<std::string, int> index;  // canonical prefix string -> state id
  auto intern = [&](const LtlPtr& g) {
    std::string key = print_prefix(g);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(dfa.formulas.size());
    if (id >= state_cap)
      throw StateBlowupError("automaton state count exceeds cap of " +
                             std::to_string(state_cap));
    index.emplace(std::move(key), id);
    dfa.formulas.push_back(g);
    return id;
  };

  std::unordered_map<std::string, int> prop_index;
  for (size_t i = 0; i < dfa.props.size(); ++i)
    prop_index[dfa.props[i]] = static_cast<int>(i);

  dfa.initial = intern(init);
  // intern() assigns ids in discovery order, so iterating q while formulas
  // grows is a breadth-first worklist.
  for (size_t q = 0; q < dfa.formulas.size(); ++q) {
    Dfa::State st;
    for (const std::string& p : props(dfa.formulas[q]))
      st.relevant.push_back(prop_index.at(p));
    std::sort(st.relevant.begin(), st.relevant.end());
    const size_t n = st.relevant.size();
    if (n > 24) throw StateBlowupError("too many relevant propositions in one state");
    st.succ.resize(static_cast<size_t>(1) << n);
    for (size_t mask = 0; mask < st.succ.size(); ++mask) {
      LabelSet label;
      for (size_t b = 0; b < n; ++b)
        if (mask & (static_cast<size_t>(1) << b))
          label.insert(dfa.props[static_cast<size_t>(st.relevant[b])]);
      st.succ[mask] = intern(normalize_formula(progress(dfa.formulas[q], label)));
    }
    dfa.states.push_back(std::move(st));
  }

  dfa.accepting.resize(dfa.formulas.size(), 0);
  for (size_t i = 0; i < dfa.formulas.size(); ++i)
    dfa.accepting[i] = dfa.formulas[i]->kind == LtlKind::True ? 1 : 0;

  // Reverse reachability of acceptance.
  dfa.can_accept.assign(dfa.formulas.size(), 0);
  std::vector<std::vector<int>> preds(dfa.formulas.size());
  for (size_t q = 0; q < dfa.states.size(); ++q)
    for (int s : dfa.states[q].succ) preds[static_cast<size_t>(s)].push_back(static_cast<int>(q));
  std::deque<int> bfs;
  for (size_t q = 0; q < dfa.formulas.size(); ++q)
    if (dfa.accepting[q]) {
      dfa.can_accept[q] = 1;
      bfs.push_back(static_cast<int>(q));
    }
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop_front();
    for (int p : preds[static_cast<size_t>(q)])
      if (!dfa.can_accept[static_cast<size_t>(p)]) {
        dfa.can_accept[static_cast<size_t>(p)] = 1;
        bfs.push_back(p);
      }
  }
  return dfa;
}

bool accepts(const Dfa& dfa, const Word& word) {
  int q = dfa.initial;
  if (dfa.is_accepting(q)) return true;
  for (const LabelSet& l : word) {
    q = dfa.step(q, l);
    if (dfa.is_accepting(q)) return true;  // co-safe acceptance is absorbing
  }
  return false;
}

std::optional<std::vector<AutomatonStep>> shortest_accepting_path(const Dfa& dfa, int q) {
  if (dfa.is_accepting(q)) return std::vector<AutomatonStep>{};
  // BFS over states; per (state, successor) keep the cheapest realizing mask
  // (fewest set bits, then lowest value) for a deterministic label choice.
  std::vector<int> parent(dfa.states.size(), -1);
  std::vector<int> parent_mask(dfa.states.size(), -1);
  std::deque<int> frontier{q};
  std::vector<char> seen(dfa.states.size(), 0);
  seen[static_cast<size_t>(q)] = 1;
  int goal = -1;
  while (!frontier.empty() && goal < 0) {
    int cur = frontier.front();
    frontier.pop_front();
    const Dfa::State& st = dfa.states[static_cast<size_t>(cur)];
    // Cheapest mask per successor.
    std::map<int, int> best;
    for (size_t mask = 0; mask < st.succ.size(); ++mask) {
      int s = st.succ[mask];
      auto it = best.find(s);
      if (it == best.end()) {
        best[s] = static_cast<int>(mask);
      } else {
        int m = static_cast<int>(mask);
        int old = it->second;
        if (std::popcount(static_cast<unsigned>(m)) < std::popcount(static_cast<unsigned>(old)) ||
            (std::popcount(static_cast<unsigned>(m)) == std::popcount(static_cast<unsigned>(old)) && m < old))
          it->second = m;
      }
    }
    for (const auto& [s, mask] : best) {
      if (s == cur || seen[static_cast<size_t>(s)]) continue;
      seen[static_cast<size_t>(s)] = 1;
      parent[static_cast<size_t>(s)] = cur;
      parent_mask[static_cast<size_t>(s)] = mask;
      if (dfa.is_accepting(s)) {
        goal = s;
        break;
      }
      frontier.push_back(s);
    }
  }
  if (goal < 0) return std::nullopt;
  std::vector<AutomatonStep> path;
  for (int cur = goal; cur != q; cur = parent[static_cast<size_t>(cur)]) {
    int p = parent[static_cast<size_t>(cur)];
    path.push_back({dfa.label_of_mask(p, parent_mask[static_cast<size_t>(cur)]), cur});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {
std::string label_to_string(const LabelSet& l) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : l) {
    if (!first) out += ",";
    out += p;
    first = false;
  }
  return out + "}";
}
}  // namespace

std::string automaton_to_text(const Dfa& dfa) {
  std::ostringstream out;
  out << "initial: q" << dfa.initial << "\n";
  out << "accepting:";
  for (size_t q = 0; q < dfa.states.size(); ++q)
    if (dfa.accepting[q]) out << " q" << q;
  out << "\n";
  for (size_t q = 0; q < dfa.states.size(); ++q) {
    const Dfa::State& st = dfa.states[q];
    for (size_t mask = 0; mask < st.succ.size(); ++mask) {
      out << "q" << q << " --" << label_to_string(dfa.label_of_mask(static_cast<int>(q), static_cast<int>(mask)))
          << "--> q" << st.succ[mask] << "\n";
    }
  }
  return out.str();
}

std::string automaton_to_dot(const Dfa& dfa) {
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n";
  for (size_t q = 0; q < dfa.states.size(); ++q) {
    out << "  q" << q << " [shape=" << (dfa.accepting[q] ? "doublecircle" : "circle") << "];\n";
  }
  out << "  init [shape=point]; init -> q" << dfa.initial << ";\n";
  for (size_t q = 0; q < dfa.states.size(); ++q) {
    const Dfa::State& st = dfa.states[q];
    for (size_t mask = 0; mask < st.succ.size(); ++mask) {
      out << "  q" << q << " -> q" << st.succ[mask] << " [label=\""
          << label_to_string(dfa.label_of_mask(static_cast<int>(q), static_cast<int>(mask)))
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace sgplan

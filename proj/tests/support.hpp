#pragma once

// Shared test-only helpers: random formula generation, an independent
// co-safety checker, and word enumeration. Everything here must stay
// independent of the implementation paths it is used to check.

#include <random>
#include <string>
#include <vector>

#include "sgplan/ltl.hpp"

namespace sgplan::test {

inline Alphabet small_alphabet(int n_atoms = 3) {
  std::vector<Proposition> ps;
  for (int i = 1; i <= n_atoms; ++i)
    ps.push_back({"p" + std::to_string(i), "prop " + std::to_string(i)});
  return Alphabet(ps);
}

// Random formula over the full grammar (may or may not be co-safe).
inline LtlPtr random_formula(std::mt19937_64& rng, int depth, int n_atoms = 3) {
  std::uniform_int_distribution<int> atom_pick(1, n_atoms);
  auto leaf = [&]() -> LtlPtr {
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
      case 0: return ltl::make_true();
      case 1: return ltl::make_false();
      default: return ltl::atom("p" + std::to_string(atom_pick(rng)));
    }
  };
  if (depth <= 0) return leaf();
  switch (std::uniform_int_distribution<int>(0, 10)(rng)) {
    case 0: return leaf();
    case 1: return ltl::f_not(random_formula(rng, depth - 1, n_atoms));
    case 2: return ltl::f_and(random_formula(rng, depth - 1, n_atoms),
                              random_formula(rng, depth - 1, n_atoms));
    case 3: return ltl::f_or(random_formula(rng, depth - 1, n_atoms),
                             random_formula(rng, depth - 1, n_atoms));
    case 4: return ltl::imply(random_formula(rng, depth - 1, n_atoms),
                              random_formula(rng, depth - 1, n_atoms));
    case 5: return ltl::next(random_formula(rng, depth - 1, n_atoms));
    case 6:
    case 7: return ltl::until(random_formula(rng, depth - 1, n_atoms),
                              random_formula(rng, depth - 1, n_atoms));
    case 8:
    case 9: return ltl::eventually(random_formula(rng, depth - 1, n_atoms));
    default: return ltl::always(random_formula(rng, depth - 1, n_atoms));
  }
}

// Random syntactically co-safe formula: negation only on atoms, no G.
inline LtlPtr random_cosafe_formula(std::mt19937_64& rng, int depth, int n_atoms = 3) {
  std::uniform_int_distribution<int> atom_pick(1, n_atoms);
  auto literal = [&]() -> LtlPtr {
    LtlPtr a = ltl::atom("p" + std::to_string(atom_pick(rng)));
    return std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? ltl::f_not(a) : a;
  };
  if (depth <= 0) return literal();
  switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
    case 0: return literal();
    case 1: return ltl::make_true();
    case 2: return ltl::f_and(random_cosafe_formula(rng, depth - 1, n_atoms),
                              random_cosafe_formula(rng, depth - 1, n_atoms));
    case 3: return ltl::f_or(random_cosafe_formula(rng, depth - 1, n_atoms),
                             random_cosafe_formula(rng, depth - 1, n_atoms));
    case 4: return ltl::next(random_cosafe_formula(rng, depth - 1, n_atoms));
    case 5:
    case 6: return ltl::until(random_cosafe_formula(rng, depth - 1, n_atoms),
                              random_cosafe_formula(rng, depth - 1, n_atoms));
    default: return ltl::eventually(random_cosafe_formula(rng, depth - 1, n_atoms));
  }
}

// Independent co-safety check via polarity tracking (no NNF conversion):
// a formula is syntactically co-safe iff every F/U occurs under positive
// polarity and every G under negative polarity.
inline bool cosafe_by_polarity(const LtlPtr& f, bool positive = true) {
  switch (f->kind) {
    case LtlKind::True:
    case LtlKind::False:
    case LtlKind::Atom: return true;
    case LtlKind::Not: return cosafe_by_polarity(f->lhs, !positive);
    case LtlKind::And:
    case LtlKind::Or:
      return cosafe_by_polarity(f->lhs, positive) && cosafe_by_polarity(f->rhs, positive);
    case LtlKind::Imply:
      return cosafe_by_polarity(f->lhs, !positive) && cosafe_by_polarity(f->rhs, positive);
    case LtlKind::Next: return cosafe_by_polarity(f->lhs, positive);
    case LtlKind::Until:
      return positive && cosafe_by_polarity(f->lhs, true) && cosafe_by_polarity(f->rhs, true);
    case LtlKind::Release:
      return !positive && cosafe_by_polarity(f->lhs, false) && cosafe_by_polarity(f->rhs, false);
    case LtlKind::Eventually: return positive && cosafe_by_polarity(f->lhs, true);
    case LtlKind::Always: return !positive && cosafe_by_polarity(f->lhs, false);
  }
  return false;
}

// All words of exactly length len over subsets of {p1..n_atoms}, visited via
// callback to avoid materializing the full set.
template <typename Fn>
void for_each_word(int n_atoms, int len, Fn&& fn) {
  const int n_labels = 1 << n_atoms;
  std::vector<int> digits(static_cast<size_t>(len), 0);
  auto to_word = [&]() {
    Word w;
    for (int d : digits) {
      LabelSet l;
      for (int b = 0; b < n_atoms; ++b)
        if (d & (1 << b)) l.insert("p" + std::to_string(b + 1));
      w.push_back(std::move(l));
    }
    return w;
  };
  while (true) {
    fn(to_word());
    int i = 0;
    while (i < len && ++digits[static_cast<size_t>(i)] == n_labels) {
      digits[static_cast<size_t>(i)] = 0;
      ++i;
    }
    if (i == len) break;
  }
}

}  // namespace sgplan::test

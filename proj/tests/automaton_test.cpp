#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgplan/automaton.hpp"
#include "support.hpp"

using namespace sgplan;

TEST_CASE("compile F p: two reachable states") {
  Alphabet ab = test::small_alphabet(1);
  Dfa dfa = compile(parse_prefix("F p1", ab));
  CHECK(dfa.num_states() == 2);
  CHECK_FALSE(dfa.is_accepting(dfa.initial));
  CHECK(dfa.step(dfa.initial, {"p1"}) != dfa.initial);
  CHECK(dfa.is_accepting(dfa.step(dfa.initial, {"p1"})));
  CHECK(dfa.step(dfa.initial, {}) == dfa.initial);
}

TEST_CASE("compile rejects non-cosafe input") {
  Alphabet ab = test::small_alphabet(1);
  CHECK_THROWS_AS(compile(parse_prefix("G p1", ab)), NotCosafeError);
}

TEST_CASE("state cap raises StateBlowup") {
  Alphabet ab = test::small_alphabet(3);
  CHECK_THROWS_AS(compile(parse_prefix("& F p1 & F p2 F p3", ab), 2), StateBlowupError);
}

TEST_CASE("sequencing-with-avoidance mission automaton shape") {
  Alphabet ab = test::small_alphabet(11);
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", ab));
  int n_accepting = 0, n_sink = 0, sink = -1;
  for (int q = 0; q < dfa.num_states(); ++q) {
    if (dfa.is_accepting(q)) ++n_accepting;
    if (dfa.is_sink(q)) {
      ++n_sink;
      sink = q;
    }
  }
  CHECK(n_accepting == 1);
  CHECK(n_sink == 1);
  // p9 before any progress hits the absorbing sink.
  CHECK(dfa.step(dfa.initial, {"p9"}) == sink);
  CHECK(dfa.step(sink, {"p2"}) == sink);
  CHECK(dfa.step(sink, {}) == sink);
}

TEST_CASE("accepts basics") {
  Alphabet ab = test::small_alphabet(1);
  Dfa t = compile(parse_prefix("true", ab));
  CHECK(accepts(t, {}));  // q1 already accepting

  Dfa fp = compile(parse_prefix("F p1", ab));
  CHECK_FALSE(accepts(fp, {{}}));
  CHECK(accepts(fp, {{}, {"p1"}, {}}));  // prefix acceptance persists
}

TEST_CASE("oracle equivalence on random co-safe formulas") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 120; ++i) {
    LtlPtr f = test::random_cosafe_formula(rng, 4);
    Dfa dfa = compile(f);
    for (int len = 0; len <= 4; ++len) {
      test::for_each_word(3, len, [&](const Word& w) {
        CHECK(accepts(dfa, w) == eval_trace(f, w));
      });
    }
  }
}

TEST_CASE("recompilation is bit-identical") {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 50; ++i) {
    LtlPtr f = test::random_cosafe_formula(rng, 4);
    Dfa a = compile(f);
    Dfa b = compile(f);
    CHECK(automaton_to_text(a) == automaton_to_text(b));
  }
}

TEST_CASE("acceptance is absorbing") {
  std::mt19937_64 rng(107);
  Alphabet ab = test::small_alphabet(3);
  for (int i = 0; i < 50; ++i) {
    LtlPtr f = test::random_cosafe_formula(rng, 3);
    Dfa dfa = compile(f);
    for (int q = 0; q < dfa.num_states(); ++q) {
      if (!dfa.is_accepting(q)) continue;
      test::for_each_word(3, 1, [&](const Word& w) {
        CHECK(dfa.is_accepting(dfa.step(q, w[0])));
      });
    }
  }
}

TEST_CASE("shortest_accepting_path") {
  Alphabet ab = test::small_alphabet(11);

  SUBCASE("accepting state yields empty path") {
    Dfa dfa = compile(parse_prefix("F p1", ab));
    int acc = dfa.step(dfa.initial, {"p1"});
    auto path = shortest_accepting_path(dfa, acc);
    REQUIRE(path.has_value());
    CHECK(path->empty());
  }

  SUBCASE("F p takes a single transition under {p}") {
    Dfa dfa = compile(parse_prefix("F p1", ab));
    auto path = shortest_accepting_path(dfa, dfa.initial);
    REQUIRE(path.has_value());
    REQUIRE(path->size() == 1);
    CHECK((*path)[0].label == LabelSet{"p1"});
    CHECK(dfa.is_accepting((*path)[0].to));
  }

  SUBCASE("post-bedroom state of the avoidance mission reaches acceptance via p3/p11") {
    Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", ab));
    int q = dfa.step(dfa.initial, {"p2"});
    auto path = shortest_accepting_path(dfa, q);
    REQUIRE(path.has_value());
    LabelSet seen;
    for (const auto& step : *path) seen.insert(step.label.begin(), step.label.end());
    CHECK(seen.count("p3") == 1);
    CHECK(seen.count("p11") == 1);
    CHECK(seen.count("p9") == 0);
  }

  SUBCASE("sink is unreachable from acceptance") {
    Dfa dfa = compile(parse_prefix("& F p1 ! p2", ab));
    int sink = dfa.step(dfa.initial, {"p2"});
    CHECK(dfa.is_sink(sink));
    CHECK_FALSE(shortest_accepting_path(dfa, sink).has_value());
  }
}

TEST_CASE("export formats") {
  Alphabet ab = test::small_alphabet(1);
  Dfa dfa = compile(parse_prefix("F p1", ab));
  std::string text = automaton_to_text(dfa);
  CHECK(text.find("initial: q0") != std::string::npos);
  CHECK(text.find("--{p1}-->") != std::string::npos);
  std::string dot = automaton_to_dot(dfa);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("doublecircle") != std::string::npos);
}

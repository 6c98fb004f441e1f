#include "freqsynth/calculus.hpp"
#include "freqsynth/dgrma.hpp"
#include "freqsynth/lasso.hpp"
#include "freqsynth/parser.hpp"

#include <doctest.h>

#include <algorithm>

using namespace freqsynth;

namespace {

BoolFn fn(const char* text) { return to_boolfn(parse_formula(text)); }

template <class State>
int index_of(const Lts<State>& lts, const State& s) {
  auto it = std::find(lts.states.begin(), lts.states.end(), s);
  return it == lts.states.end() ? -1 : static_cast<int>(it - lts.states.begin());
}

int slave_index(const SlaveLts& s, const char* text) { return index_of(s.lts, fn(text)); }

TokenSet tokens(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("master of a & X(b U a)") {
  Formula f = parse_formula("a & X (b U a)");
  Alphabet sigma({"a", "b"});
  auto m = build_master(f, sigma);
  CHECK(m.size() == 4);
  int phi = m.initial, bua = index_of(m, fn("b U a")), t = index_of(m, BoolFn::top()), F = index_of(m, BoolFn::bottom());
  REQUIRE(bua >= 0);
  REQUIRE(t >= 0);
  REQUIRE(F >= 0);
  CHECK(m.states[static_cast<std::size_t>(phi)] == fn("a & X (b U a)"));
  Letter e = 0, a = sigma.make_letter({"a"}), b = sigma.make_letter({"b"}), ab = sigma.make_letter({"a", "b"});
  CHECK(m.successor(phi, e) == F);
  CHECK(m.successor(phi, a) == bua);
  CHECK(m.successor(phi, b) == F);
  CHECK(m.successor(phi, ab) == bua);
  CHECK(m.successor(bua, b) == bua);
  CHECK(m.successor(bua, a) == t);
  CHECK(m.successor(bua, e) == F);
  for (Letter l = 0; l < sigma.letter_count(); ++l) {
    CHECK(m.successor(t, l) == t);
    CHECK(m.successor(F, l) == F);
  }
}

TEST_CASE("master of tt is one absorbing state") {
  auto m = build_master(tt(), Alphabet({"a"}));
  CHECK(m.size() == 1);
  CHECK(m.successor(0, 0) == 0);
  CHECK(m.successor(0, 1) == 0);
}

TEST_CASE("master of G(X a | G X b)") {
  Formula f = parse_formula("G (X a | G X b)");
  Alphabet sigma({"a", "b"});
  auto m = build_master(f, sigma);
  CHECK(m.size() == 4);
  BoolFn expected = fn("G (X a | G X b) & (a | (b & G X b))");
  for (Letter l = 0; l < sigma.letter_count(); ++l) CHECK(m.states[static_cast<std::size_t>(m.successor(m.initial, l))] == expected);
}

TEST_CASE("master state cap") {
  CHECK_THROWS_AS(build_master(parse_formula("a & X (b U a)"), Alphabet({"a", "b"}), 2), ResourceError);
}

TEST_CASE("slave of a | b | X(b & G F a)") {
  Alphabet sigma({"a", "b"});
  SlaveLts s = build_slave_lts(parse_formula("a | b | X (b & G F a)"), sigma);
  int xi = s.lts.initial, bg = slave_index(s, "b & G F a"), gfa = slave_index(s, "G F a");
  int t = index_of(s.lts, BoolFn::top()), F = index_of(s.lts, BoolFn::bottom());
  REQUIRE(bg >= 0);
  REQUIRE(gfa >= 0);
  REQUIRE(t >= 0);
  REQUIRE(F >= 0);
  Letter a = sigma.make_letter({"a"}), b = sigma.make_letter({"b"});
  CHECK(s.lts.successor(xi, 0) == bg);
  CHECK(s.lts.successor(xi, a) == t);
  CHECK(s.lts.successor(bg, b) == gfa);
  CHECK(s.lts.successor(bg, 0) == F);
  for (std::size_t q = 0; q < s.lts.size(); ++q) {
    bool expected_sink = static_cast<int>(q) == t || static_cast<int>(q) == F || static_cast<int>(q) == gfa;
    CHECK(s.sink[q] == expected_sink);
    if (s.sink[q]) CHECK(s.lts.successor(static_cast<int>(q), 0) == -1);
  }

  auto tok = build_token_lts(s);
  CHECK(tok.states[static_cast<std::size_t>(tok.initial)] == tokens({xi}));
  CHECK(tok.states[static_cast<std::size_t>(tok.successor(tok.initial, 0))] == tokens({bg, xi}));
  int after_a = tok.successor(tok.initial, a);
  CHECK(tok.states[static_cast<std::size_t>(after_a)] == tokens({t, xi}));
  CHECK(tok.states[static_cast<std::size_t>(tok.successor(after_a, b))] == tokens({t, xi}));
  CHECK(tok.states[static_cast<std::size_t>(tok.successor(after_a, 0))] == tokens({bg, xi}));

  std::vector<Formula> with{parse_formula("G F a")}, without;
  CHECK(sink_proved(s, t, without));
  CHECK_FALSE(sink_proved(s, F, with));
  CHECK(sink_proved(s, gfa, with));
  CHECK_FALSE(sink_proved(s, gfa, without));

  auto acc_with = buchi_accepting_sets(s, tok, with), acc_without = buchi_accepting_sets(s, tok, without);
  auto rej_with = cobuchi_rejecting_sets(s, tok, with), rej_without = cobuchi_rejecting_sets(s, tok, without);
  for (std::size_t q = 0; q < tok.size(); ++q) {
    const auto& set = tok.states[q];
    auto has = [&](int i) { return std::find(set.begin(), set.end(), i) != set.end(); };
    CHECK(acc_with[q] == (has(t) || has(gfa)));
    CHECK(acc_without[q] == has(t));
    CHECK(rej_with[q] == has(F));
    CHECK(rej_without[q] == (has(F) || has(gfa)));
  }
}

TEST_CASE("slave of an atom") {
  Alphabet sigma({"a"});
  SlaveLts s = build_slave_lts(atom("a"), sigma);
  CHECK(s.lts.size() == 3);
  int a = s.lts.initial, t = index_of(s.lts, BoolFn::top()), F = index_of(s.lts, BoolFn::bottom());
  CHECK_FALSE(s.sink[static_cast<std::size_t>(a)]);
  CHECK(s.lts.successor(a, 1) == t);
  CHECK(s.lts.successor(a, 0) == F);

  auto tok = build_token_lts(s);
  auto acc = buchi_accepting_sets(s, tok, {});
  auto rej = cobuchi_rejecting_sets(s, tok, {});
  for (std::size_t q = 0; q < tok.size(); ++q) {
    const auto& set = tok.states[q];
    CHECK(acc[q] == (std::find(set.begin(), set.end(), t) != set.end()));
    CHECK(rej[q] == (std::find(set.begin(), set.end(), F) != set.end()));
  }

  auto counts = build_count_lts(s);
  TokenCount init(s.lts.size(), 0);
  init[static_cast<std::size_t>(a)] = 1;
  CHECK(counts.states[static_cast<std::size_t>(counts.initial)] == init);
  TokenCount after = init;
  after[static_cast<std::size_t>(t)] = 1;
  int q1 = counts.successor(counts.initial, 1);
  CHECK(counts.states[static_cast<std::size_t>(q1)] == after);
  CHECK(counts.successor(q1, 1) == q1);
}

TEST_CASE("sink slaves") {
  Alphabet sigma({"a"});
  SlaveLts s = build_slave_lts(parse_formula("G F a"), sigma);
  CHECK(s.lts.size() == 1);
  CHECK(s.sink[0]);
  auto tok = build_token_lts(s);
  CHECK(tok.size() == 1);
  CHECK(tok.states[0] == TokenSet{0});
  CHECK(tok.successor(0, 0) == 0);
  auto counts = build_count_lts(s);
  CHECK(counts.size() == 1);
  CHECK(counts.states[0] == TokenCount{1});

  CHECK(mp_reward(s, counts, {parse_formula("G F a")}) == std::vector<Rational>{1});
  CHECK(mp_reward(s, counts, {}) == std::vector<Rational>{0});
}

TEST_CASE("count states stay within the depth bound") {
  Alphabet sigma({"a"});
  SlaveLts s = build_slave_lts(parse_formula("X X a"), sigma);
  auto counts = build_count_lts(s);
  int xa = slave_index(s, "X a");
  REQUIRE(xa >= 0);
  for (const auto& f : counts.states) {
    CHECK(f[static_cast<std::size_t>(xa)] <= 1);
    for (int c : f) CHECK(c <= static_cast<int>(s.lts.size()));
  }
}

TEST_CASE("mean-payoff reward") {
  Alphabet sigma({"a"});
  SlaveLts s = build_slave_lts(atom("a"), sigma);
  int t = index_of(s.lts, BoolFn::top()), F = index_of(s.lts, BoolFn::bottom());
  Lts<TokenCount> counts;
  counts.alphabet = sigma;
  TokenCount f(s.lts.size(), 0), empty(s.lts.size(), 0);
  f[static_cast<std::size_t>(t)] = 2;
  f[static_cast<std::size_t>(F)] = 1;
  counts.states = {f, empty};
  counts.delta.assign(4, 0);
  CHECK(mp_reward(s, counts, {}) == std::vector<Rational>{2, 0});
  CHECK(mp_reward(s, counts, {atom("a")}) == std::vector<Rational>{2, 0});
}

TEST_CASE("recurrence set") {
  CHECK(rec_set(parse_formula("G (X a | G X b)")) ==
        std::vector<Formula>{parse_formula("G (X a | G X b)"), parse_formula("G X b")});
  CHECK(rec_set(parse_formula("a U b")).empty());
  CHECK(rec_set(parse_formula("G{>=1/2,inf} F a")) ==
        std::vector<Formula>{parse_formula("G{>=1/2,inf} F a"), parse_formula("F a")});
}

TEST_CASE("automaton for F a") {
  Formula f = parse_formula("F a");
  DgrmaOptions o;
  o.prune = false;
  Dgrma A = build_dgrma(f, Alphabet({"a"}), o);
  REQUIRE(A.rec.size() == 1);
  REQUIRE(A.pairs.size() == 2);
  for (const auto& pair : A.pairs) {
    for (std::size_t q = 0; q < A.lts.size(); ++q) {
      const auto& state = A.lts.states[q];
      bool master_tt = A.master.states[static_cast<std::size_t>(state[0])].is_true();
      if (pair.assumptions == 0) {
        CHECK(pair.fin[q] == !master_tt);
        CHECK(pair.infs.empty());
      } else {
        CHECK_FALSE(pair.fin[q]);
        REQUIRE(pair.infs.size() == 1);
        const auto& slave = A.slaves[0];
        const auto& set = slave.tokens.states[static_cast<std::size_t>(state[1])];
        bool holds_tt = std::any_of(set.begin(), set.end(), [&](int i) {
          return slave.slave.lts.states[static_cast<std::size_t>(i)].is_true();
        });
        CHECK(pair.infs[0][q] == holds_tt);
      }
    }
  }
  CHECK_FALSE(accepts_lasso(A, parse_lasso("", "{}", {"a"})));
  CHECK(accepts_lasso(A, parse_lasso("{};{};{a}", "{}")));
}

TEST_CASE("automaton for tt accepts everything") {
  Dgrma A = build_dgrma(tt(), Alphabet({"a"}));
  CHECK(A.pairs.size() == 1);
  CHECK(accepts_lasso(A, parse_lasso("", "{}", {"a"})));
  CHECK(accepts_lasso(A, parse_lasso("{a}", "{a};{}")));
}

TEST_CASE("automaton acceptance on lassos") {
  Formula freq = parse_formula("G{>=1/2,inf} a");
  Dgrma A = build_dgrma(freq, formula_alphabet(freq));
  CHECK(accepts_lasso(A, parse_lasso("", "{a};{}")));
  CHECK_FALSE(accepts_lasso(A, parse_lasso("", "{a};{};{}")));

  Formula g = parse_formula("G (X a | G X b)");
  Dgrma B = build_dgrma(g, formula_alphabet(g));
  for (auto [stem, loop, expected] : {std::tuple{"", "{a}", true}, std::tuple{"{a}", "{}", false},
                                      std::tuple{"{}", "{b}", true}, std::tuple{"{b}", "{a}", true},
                                      std::tuple{"", "{a b};{}", false}}) {
    Lasso w = parse_lasso(stem, loop, {"a", "b"});
    CHECK(models(w, g) == expected);
    CHECK(accepts_lasso(B, w) == expected);
    CHECK(accepts_lasso_by_parts(B, w) == expected);
  }
}

TEST_CASE("automaton state cap") {
  CHECK_THROWS_AS(build_dgrma(parse_formula("G (X a | G X b)"), Alphabet({"a", "b"}), DgrmaOptions{3}),
                  ResourceError);
}

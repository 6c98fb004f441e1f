#include "freqsynth/calculus.hpp"
#include "freqsynth/lasso.hpp"
#include "freqsynth/parser.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace freqsynth;

namespace {

BoolFn fn(const char* text) { return to_boolfn(parse_formula(text)); }

std::vector<Formula> parse_all(std::initializer_list<const char*> texts) {
  std::vector<Formula> out;
  for (const char* t : texts) out.push_back(parse_formula(t));
  return out;
}

}  // namespace

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("1/3") == Rational(1, 3));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("0.05") == Rational(1, 20));
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
  CHECK(format_rational(Rational(1, 3)) == "1/3 (≈0.333333)");
}

TEST_CASE("parser") {
  SUBCASE("server formula") {
    Formula f = parse_formula("G{>=0.99,inf}(r -> X(f & F c))");
    REQUIRE(f.op() == Op::FreqAlways);
    CHECK(f.bound() == FreqBound{Cmp::Geq, Rational(99, 100), Ext::Inf});
    CHECK(f.child() == disj(neg_atom("r"), next(conj(atom("f"), eventually(atom("c"))))));
  }
  SUBCASE("constants") {
    CHECK(parse_formula("tt") == tt());
    CHECK(parse_formula("ff") == ff());
  }
  SUBCASE("until is right-associative") {
    CHECK(parse_formula("a U b U c") == until(atom("a"), until(atom("b"), atom("c"))));
    CHECK(parse_formula("a U (b U c)") == parse_formula("a U b U c"));
  }
  SUBCASE("precedence") {
    CHECK(parse_formula("a | b & c") == disj(atom("a"), conj(atom("b"), atom("c"))));
    CHECK(parse_formula("X a & b") == conj(next(atom("a")), atom("b")));
    CHECK(parse_formula("a -> b -> c") == disj(neg_atom("a"), disj(neg_atom("b"), atom("c"))));
  }
  SUBCASE("pretty printing round-trips") {
    for (const char* t : {"a & X (b U a)", "G{>1/2,sup} (a | F b)", "G (X a | G X b)", "!a U (b & !c)"}) {
      Formula f = parse_formula(t);
      CHECK(parse_formula(to_string(f)) == f);
    }
  }
  SUBCASE("syntax errors carry a position") {
    try {
      parse_formula("a & (b");
      FAIL("no error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 6);
    }
    CHECK_THROWS_AS(parse_formula("a &"), ParseError);
    CHECK_THROWS_AS(parse_formula("G{>=1/2,mid} a"), ParseError);
  }
  SUBCASE("frequency bounds outside [0,1] are rejected") {
    CHECK_THROWS_AS(parse_formula("G{>=3/2,inf} a"), ParseError);
    CHECK_NOTHROW(parse_formula("G{>=1,sup} a"));
    CHECK_NOTHROW(parse_formula("G{>0,inf} a"));
  }
}

TEST_CASE("fragment membership") {
  CHECK(in_fragment(parse_formula("G (F a)")));
  CHECK_FALSE(in_fragment(parse_formula("G (a U b)")));
  CHECK(in_fragment(parse_formula("(a U b) & G{>=1/2,inf} c")));
  CHECK_FALSE(in_fragment(parse_formula("G{>=1/2,inf} X (a U b)")));
  CHECK(in_fragment(parse_formula("F (a U b)")));
}

TEST_CASE("negation normal form") {
  Formula inner = parse_formula("a | F b");
  Formula g = freq_always({Cmp::Geq, Rational(1, 3), Ext::Inf}, inner);
  CHECK(push_negation(negation(g)) ==
        freq_always({Cmp::Gt, Rational(2, 3), Ext::Sup}, push_negation(negation(inner))));
  CHECK(push_negation(negation(negation(atom("a")))) == atom("a"));
  CHECK(parse_formula("!(a & F b)") == disj(neg_atom("a"), always(neg_atom("b"))));
  CHECK(parse_formula("!G{>1/4,sup} a") == freq_always({Cmp::Geq, Rational(3, 4), Ext::Inf}, neg_atom("a")));
  CHECK(parse_formula("!X a") == next(neg_atom("a")));
}

TEST_CASE("negation preserves lasso semantics") {
  std::mt19937_64 rng(5);
  const char* texts[] = {"a U b", "G F a & X b", "G{>=1/3,inf} (a | X b)", "F G !a | b U (a & c)",
                         "G{>1/2,sup} a -> F b"};
  Alphabet sigma({"a", "b", "c"});
  for (const char* t : texts) {
    Formula f = parse_formula(t);
    Formula n = push_negation(negation(parse_formula_raw(t)));
    for (int i = 0; i < 200; ++i) {
      Lasso w = random_lasso(rng(), 4, 4, sigma);
      CHECK(models(w, f) != models(w, n));
    }
  }
}

TEST_CASE("non-Boolean subformulas") {
  CHECK(nb_subformulas(parse_formula("a & X (b U a)")) == parse_all({"a", "X (b U a)", "b U a", "b"}));
  CHECK(nb_subformulas(tt()).empty());
  CHECK(nb_subformulas(parse_formula("F a")) == parse_all({"F a", "a"}));
}

TEST_CASE("boolean functions") {
  BoolFn a = fn("a"), b = fn("b"), c = fn("c");
  CHECK(((a & b) | a) == a);
  CHECK((a & (b | c)) == ((a & b) | (a & c)));
  CHECK((a | BoolFn::top()).is_true());
  CHECK((a & BoolFn::bottom()).is_false());
  CHECK(fn("a & b | a & c") == fn("a & (b | c)"));
  BoolFn mixed = a | (a & b) | (b & c);
  CHECK(mixed.models().size() == 2);
  for (const auto& m : mixed.models())
    CHECK(std::is_sorted(m.begin(), m.end()));
}

TEST_CASE("unfolding") {
  CHECK(unfold(parse_formula("F a")) == fn("a | X F a"));
  CHECK(unfold(parse_formula("G{>=1/2,inf} a")) == fn("X G{>=1/2,inf} a"));
  CHECK(unfold(parse_formula("b U a")) == fn("a | (b & X (b U a))"));
  CHECK(unfold(parse_formula("G a")) == fn("a & X G a"));
  CHECK(unfold(parse_formula("X a")) == fn("X a"));
}

TEST_CASE("step") {
  Alphabet sigma({"a", "b"});
  Letter a = sigma.make_letter({"a"}), b = sigma.make_letter({"b"});
  CHECK(step(fn("a | (b & X (b U a))"), sigma, b) == fn("b U a"));
  CHECK(step(fn("a"), sigma, a).is_true());
  CHECK(step(fn("!a"), sigma, a).is_false());
  CHECK(step(fn("F a"), sigma, 0) == fn("F a"));
  CHECK(step(fn("X X a"), sigma, 0) == fn("X a"));
}

TEST_CASE("propositional proofs") {
  auto gfa = parse_all({"G F a"});
  CHECK(proves(gfa, fn("G F a | G b")));
  CHECK_FALSE(proves(gfa, fn("F a")));
  CHECK(proves(std::vector<Formula>{}, BoolFn::top()));
  CHECK_FALSE(proves(std::vector<Formula>{}, fn("G F a")));
  CHECK(proves(parse_all({"G F a", "G b"}), fn("G F a & G b")));
}

TEST_CASE("substitution by ff") {
  auto a = parse_all({"a"});
  CHECK(substitute_ff(fn("a | F a"), a) == fn("F a"));
  CHECK(substitute_ff(BoolFn::top(), a).is_true());
  CHECK(substitute_ff(fn("a & b"), a).is_false());
}

#include "freqsynth/lasso.hpp"
#include "freqsynth/parser.hpp"

#include <doctest.h>

using namespace freqsynth;

TEST_CASE("lasso syntax") {
  Lasso w = parse_lasso("{a b};{}", "{b}");
  CHECK(w.alphabet.atoms() == std::vector<std::string>{"a", "b"});
  CHECK(w.stem.size() == 2);
  CHECK(w.loop.size() == 1);
  CHECK(w.to_string() == "{a b};{} ({b})^w");
  CHECK(w.letter_at(7) == w.alphabet.make_letter({"b"}));
  CHECK_THROWS(parse_lasso("", ""));
  CHECK_THROWS(parse_lasso("{a", "{}"));
}

TEST_CASE("direct semantics") {
  Formula g = parse_formula("G (X a | G X b)");
  CHECK(models(parse_lasso("", "{a}", {"b"}), g));
  CHECK_FALSE(models(parse_lasso("{a}", "{}", {"b"}), g));
  CHECK(models(parse_lasso("", "{a};{}"), parse_formula("G{>=1/2,inf} a")));
  CHECK_FALSE(models(parse_lasso("", "{a};{}"), parse_formula("G{>1/2,sup} a")));
  CHECK(models(parse_lasso("{};{}", "{b};{a}"), parse_formula("F a & (!a U b)")));
  CHECK(models(parse_lasso("{a};{a}", "{b}"), parse_formula("a U b")));
  CHECK_FALSE(models(parse_lasso("{a};{}", "{b}"), parse_formula("a U b")));
}

TEST_CASE("suffix shift") {
  Lasso w = parse_lasso("{a};{}", "{b};{a b}");
  Formula f = parse_formula("a U b");
  for (std::size_t n = 0; n < 6; ++n) CHECK(models(w.shifted(n), next(f)) == models(w.shifted(n + 1), f));
}

TEST_CASE("limit frequencies") {
  CHECK(freq_on_lasso(parse_lasso("", "{a};{};{}"), atom("a")) == Rational(1, 3));
  CHECK(freq_on_lasso(parse_lasso("", "{a}"), ff()) == 0);
  CHECK(freq_on_lasso(parse_lasso("{};{}", "{a}"), atom("a")) == 1);
  CHECK(freq_on_lasso(parse_lasso("", "{};{a};{}"), atom("a")) ==
        freq_on_lasso(parse_lasso("", "{a};{};{};{a};{};{}"), atom("a")));
}

TEST_CASE("recurring formulas") {
  std::vector<Formula> fg{parse_formula("F a"), parse_formula("G a")};
  CHECK(rec_truth_set(parse_lasso("", "{a}"), fg) == fg);
  std::vector<Formula> f{parse_formula("F a")};
  CHECK(rec_truth_set(parse_lasso("{a}", "{}"), f).empty());
  std::vector<Formula> freq{parse_formula("G{>=1/2,inf} a")};
  CHECK(rec_truth(parse_lasso("", "{a};{}"), freq) == std::vector<bool>{true});
}

TEST_CASE("random lassos") {
  Alphabet one({"a"}), two({"a", "b"});
  Lasso w = random_lasso(1, 0, 1, one);
  CHECK(w.stem.empty());
  CHECK(w.loop.size() == 1);
  CHECK(random_lasso(99, 5, 5, two).to_string() == random_lasso(99, 5, 5, two).to_string());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Lasso v = random_lasso(seed, 3, 3, two);
    CHECK(v.stem.size() <= 3);
    CHECK(v.loop.size() >= 1);
    CHECK(v.loop.size() <= 3);
  }
}

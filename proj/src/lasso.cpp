#include "freqsynth/lasso.hpp"

#include <cctype>
#include <random>
#include <set>
#include <stdexcept>

namespace freqsynth {

Letter Lasso::letter_at(std::size_t i) const {
  if (i < stem.size()) return stem[i];
  return loop[(i - stem.size()) % loop.size()];
}

Lasso Lasso::shifted(std::size_t n) const {
  Lasso out{alphabet, {}, {}};
  if (n < stem.size()) {
    out.stem.assign(stem.begin() + static_cast<std::ptrdiff_t>(n), stem.end());
    out.loop = loop;
  } else {
    std::size_t r = (n - stem.size()) % loop.size();
    out.loop.assign(loop.begin() + static_cast<std::ptrdiff_t>(r), loop.end());
    out.loop.insert(out.loop.end(), loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(r));
  }
  return out;
}

std::string Lasso::to_string() const {
  auto join = [&](const std::vector<Letter>& ls) {
    std::string s;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      if (i) s += ';';
      s += alphabet.format(ls[i]);
    }
    return s;
  };
  return join(stem) + " (" + join(loop) + ")^w";
}

namespace {

std::vector<std::vector<std::string>> parse_letters(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) ++i;
  };
  skip_ws();
  if (i == text.size()) return out;
  while (true) {
    skip_ws();
    if (i >= text.size() || text[i] != '{')
      throw std::invalid_argument("expected '{' at offset " + std::to_string(i) + " in lasso text");
    ++i;
    std::vector<std::string> letter;
    std::string cur;
    while (i < text.size() && text[i] != '}') {
      char c = text[i++];
      if (c == ' ' || c == ',' || c == '\t') {
        if (!cur.empty()) letter.push_back(std::move(cur));
        cur.clear();
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        cur.push_back(c);
      } else {
        throw std::invalid_argument(std::string("unexpected '") + c + "' in lasso letter");
      }
    }
    if (i >= text.size()) throw std::invalid_argument("unterminated lasso letter");
    ++i;
    if (!cur.empty()) letter.push_back(std::move(cur));
    out.push_back(std::move(letter));
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != ';') throw std::invalid_argument("expected ';' between lasso letters");
    ++i;
  }
  return out;
}

}  // namespace

Lasso parse_lasso(std::string_view stem, std::string_view loop,
                  const std::vector<std::string>& extra) {
  auto s = parse_letters(stem);
  auto l = parse_letters(loop);
  if (l.empty()) throw std::invalid_argument("lasso loop must be non-empty");
  std::set<std::string> names(extra.begin(), extra.end());
  for (const auto& ls : {&s, &l})
    for (const auto& letter : *ls) names.insert(letter.begin(), letter.end());
  Lasso w{Alphabet({names.begin(), names.end()}), {}, {}};
  for (const auto& letter : s) w.stem.push_back(w.alphabet.make_letter(letter));
  for (const auto& letter : l) w.loop.push_back(w.alphabet.make_letter(letter));
  return w;
}

const std::vector<char>& LassoEvaluator::eval(Formula f) {
  if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
  const std::size_t n = w_.positions();
  std::vector<char> val(n, 0);
  auto fix = [&](char init, auto rule) {
    std::fill(val.begin(), val.end(), init);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = n; k-- > 0;) {
        char nv = rule(k);
        if (nv != val[k]) {
          val[k] = nv;
          changed = true;
        }
      }
    }
  };
  switch (f.op()) {
    case Op::True: std::fill(val.begin(), val.end(), 1); break;
    case Op::False: break;
    case Op::Atom:
    case Op::NegAtom:
      for (std::size_t i = 0; i < n; ++i) {
        bool h = w_.alphabet.holds(w_.letter_at(i), f.atom());
        val[i] = (f.op() == Op::Atom) == h;
      }
      break;
    case Op::Not: {
      const auto& c = eval(f.child());
      for (std::size_t i = 0; i < n; ++i) val[i] = !c[i];
      break;
    }
    case Op::And:
    case Op::Or: {
      bool is_and = f.op() == Op::And;
      std::fill(val.begin(), val.end(), is_and ? 1 : 0);
      for (Formula k : f.children()) {
        const auto& c = eval(k);
        for (std::size_t i = 0; i < n; ++i) val[i] = is_and ? (val[i] && c[i]) : (val[i] || c[i]);
      }
      break;
    }
    case Op::Next: {
      const auto& c = eval(f.child());
      for (std::size_t i = 0; i < n; ++i) val[i] = c[w_.successor(i)];
      break;
    }
    case Op::Eventually: {
      const auto c = eval(f.child());
      fix(0, [&](std::size_t k) -> char { return c[k] || val[w_.successor(k)]; });
      break;
    }
    case Op::Always: {
      const auto c = eval(f.child());
      fix(1, [&](std::size_t k) -> char { return c[k] && val[w_.successor(k)]; });
      break;
    }
    case Op::Until: {
      const auto l = eval(f.left());
      const auto r = eval(f.right());
      fix(0, [&](std::size_t k) -> char { return r[k] || (l[k] && val[w_.successor(k)]); });
      break;
    }
    case Op::FreqAlways: {
      const auto& c = eval(f.child());
      std::size_t hits = 0;
      for (std::size_t i = w_.stem.size(); i < n; ++i) hits += c[i] ? 1 : 0;
      Rational freq(static_cast<long>(hits), static_cast<long>(w_.loop.size()));
      freq.canonicalize();
      bool ok = compare(freq, f.bound().cmp, f.bound().p);
      std::fill(val.begin(), val.end(), ok ? 1 : 0);
      break;
    }
  }
  return memo_.emplace(f.id(), std::move(val)).first->second;
}

bool LassoEvaluator::holds(const BoolFn& f, std::size_t position) {
  for (const auto& m : f.models()) {
    bool all = true;
    for (auto v : m) {
      if (!holds(Formula::from_id(v), position)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

bool models(const Lasso& w, Formula f) { return LassoEvaluator(w).holds(f); }
bool models(const Lasso& w, const BoolFn& f) { return LassoEvaluator(w).holds(f); }

Rational freq_on_lasso(const Lasso& w, Formula f) {
  LassoEvaluator ev(w);
  const auto& c = ev.eval(f);
  long hits = 0;
  for (std::size_t i = w.stem.size(); i < w.positions(); ++i) hits += c[i] ? 1 : 0;
  Rational q(hits, static_cast<long>(w.loop.size()));
  q.canonicalize();
  return q;
}

std::vector<bool> rec_truth(const Lasso& w, const std::vector<Formula>& rec) {
  LassoEvaluator ev(w);
  std::vector<bool> out;
  for (Formula f : rec) {
    switch (f.op()) {
      case Op::Eventually: out.push_back(ev.holds(always(f))); break;
      case Op::Always: out.push_back(ev.holds(eventually(f))); break;
      case Op::FreqAlways: out.push_back(ev.holds(f)); break;
      default: throw std::invalid_argument("rec_truth expects F, G or frequency formulas");
    }
  }
  return out;
}

std::vector<Formula> rec_truth_set(const Lasso& w, const std::vector<Formula>& rec) {
  auto truth = rec_truth(w, rec);
  std::vector<Formula> out;
  for (std::size_t i = 0; i < rec.size(); ++i)
    if (truth[i]) out.push_back(rec[i]);
  return out;
}

Lasso random_lasso(std::uint64_t seed, std::size_t max_stem, std::size_t max_loop,
                   const Alphabet& alphabet) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> stem_len(0, max_stem);
  std::uniform_int_distribution<std::size_t> loop_len(1, std::max<std::size_t>(1, max_loop));
  std::uniform_int_distribution<Letter> letter(0, alphabet.letter_count() - 1);
  Lasso w{alphabet, {}, {}};
  w.stem.resize(stem_len(rng));
  w.loop.resize(loop_len(rng));
  for (auto& l : w.stem) l = letter(rng);
  for (auto& l : w.loop) l = letter(rng);
  return w;
}

}  // namespace freqsynth

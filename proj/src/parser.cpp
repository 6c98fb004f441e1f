#include "freqsynth/parser.hpp"

#include "freqsynth/calculus.hpp"

#include <cctype>

namespace freqsynth {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  Next,
  Eventually,
  Always,
  Until,
  True,
  False,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Slash,
  And,
  Or,
  Not,
  Implies,
  Geq,
  Gt,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = Tok::Ident;
      if (word == "X") kind = Tok::Next;
      else if (word == "F") kind = Tok::Eventually;
      else if (word == "G") kind = Tok::Always;
      else if (word == "U") kind = Tok::Until;
      else if (word == "tt") kind = Tok::True;
      else if (word == "ff") kind = Tok::False;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
          throw ParseError("digit expected after '.'", i);
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '(': single(Tok::LParen); break;
      case ')': single(Tok::RParen); break;
      case '{': single(Tok::LBrace); break;
      case '}': single(Tok::RBrace); break;
      case ',': single(Tok::Comma); break;
      case '/': single(Tok::Slash); break;
      case '&': single(Tok::And); break;
      case '|': single(Tok::Or); break;
      case '!': single(Tok::Not); break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Tok::Implies, "->", start});
          i += 2;
        } else {
          throw ParseError("unexpected '-'", start);
        }
        break;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Tok::Geq, ">=", start});
          i += 2;
        } else {
          single(Tok::Gt);
        }
        break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }

  Formula implication() {
    Formula lhs = until_expr();
    if (accept(Tok::Implies)) return disj(negation(lhs), implication());
    return lhs;
  }

  Formula until_expr() {
    Formula lhs = or_expr();
    if (accept(Tok::Until)) return until(lhs, until_expr());
    return lhs;
  }

  Formula or_expr() {
    std::vector<Formula> parts{and_expr()};
    while (accept(Tok::Or)) parts.push_back(and_expr());
    return disj(std::move(parts));
  }

  Formula and_expr() {
    std::vector<Formula> parts{unary()};
    while (accept(Tok::And)) parts.push_back(unary());
    return conj(std::move(parts));
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Next: take(); return next(unary());
      case Tok::Eventually: take(); return eventually(unary());
      case Tok::Not: take(); return negation(unary());
      case Tok::Always: {
        take();
        if (peek().kind != Tok::LBrace) return always(unary());
        FreqBound b = bound();
        return freq_always(b, unary());
      }
      default: return primary();
    }
  }

  FreqBound bound() {
    expect(Tok::LBrace, "'{'");
    FreqBound b;
    if (accept(Tok::Geq)) b.cmp = Cmp::Geq;
    else if (accept(Tok::Gt)) b.cmp = Cmp::Gt;
    else fail("expected '>=' or '>'");
    std::size_t at = peek().pos;
    b.p = rational();
    if (b.p < 0 || b.p > 1) throw ParseError("frequency bound outside [0,1]", at);
    expect(Tok::Comma, "','");
    if (peek().kind != Tok::Ident || (peek().text != "inf" && peek().text != "sup"))
      fail("expected 'inf' or 'sup'");
    b.ext = take().text == "inf" ? Ext::Inf : Ext::Sup;
    expect(Tok::RBrace, "'}'");
    return b;
  }

  Rational rational() {
    if (peek().kind != Tok::Number) fail("expected a number");
    const Token& num = take();
    if (accept(Tok::Slash)) {
      if (peek().kind != Tok::Number) fail("expected a denominator");
      const Token& den = take();
      if (num.text.find('.') != std::string::npos || den.text.find('.') != std::string::npos)
        throw ParseError("fraction parts must be integers", num.pos);
      try {
        return parse_rational(num.text + "/" + den.text);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), den.pos);
      }
    }
    return parse_rational(num.text);
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::True: take(); return tt();
      case Tok::False: take(); return ff();
      case Tok::Ident: take(); return atom(t.text);
      case Tok::LParen: {
        take();
        Formula f = implication();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::End: fail("unexpected end of input");
      default: fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula_raw(std::string_view text) { return Parser(text).parse(); }

Formula parse_formula(std::string_view text) { return push_negation(parse_formula_raw(text)); }

}  // namespace freqsynth

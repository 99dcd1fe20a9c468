#include "riskgap/stl/parser.hpp"

#include <cctype>
#include <charconv>

#include "riskgap/errors.hpp"

namespace riskgap::stl {
namespace {

enum class Tok { Ident, Int, LParen, RParen, LBracket, RBracket, Comma, Bang, Amp, Bar, End };

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token take() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) {
      cur_ = {Tok::End, {}, pos_};
      return;
    }
    const std::size_t start = pos_;
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      cur_ = {k, src_.substr(start, 1), start};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case ',': return single(Tok::Comma);
      case '!': return single(Tok::Bang);
      case '&': return single(Tok::Amp);
      case '|': return single(Tok::Bar);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      cur_ = {Tok::Int, src_.substr(start, pos_ - start), start};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      cur_ = {Tok::Ident, src_.substr(start, pos_ - start), start};
      return;
    }
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token cur_{Tok::End, {}, 0};
};

bool is_keyword(const Token& t, std::string_view kw) { return t.kind == Tok::Ident && t.text == kw; }

class Parser {
 public:
  Parser(std::string_view text, const PredicateTable& table) : lex_(text), table_(table) {}

  Formula parse() {
    Formula f = parse_or();
    if (lex_.peek().kind != Tok::End) throw SyntaxError(lex_.peek().pos, "trailing input");
    return f;
  }

 private:
  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().kind == Tok::Bar) {
      lex_.take();
      f = Formula::disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_until();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      f = Formula::conj(std::move(f), parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    const Token& t = lex_.peek();
    if (is_keyword(t, "U") || is_keyword(t, "R")) {
      const bool until = t.text == "U";
      lex_.take();
      Interval i = parse_optional_interval();
      Formula rhs = parse_until();
      return until ? Formula::until(i, std::move(lhs), std::move(rhs))
                   : Formula::release(i, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Bang) {
      lex_.take();
      return Formula::negation(parse_unary());
    }
    if (is_keyword(t, "F") || is_keyword(t, "G")) {
      const bool eventually = t.text == "F";
      lex_.take();
      Interval i = parse_optional_interval();
      Formula f = parse_unary();
      return eventually ? Formula::eventually(i, std::move(f)) : Formula::globally(i, std::move(f));
    }
    return parse_primary();
  }

  Formula parse_primary() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::LParen: {
        Formula f = parse_or();
        if (lex_.peek().kind != Tok::RParen) throw SyntaxError(lex_.peek().pos, "expected ')'");
        lex_.take();
        return f;
      }
      case Tok::Ident: {
        if (t.text == "T" || t.text == "true") return Formula::truth();
        if (t.text == "false") return Formula::falsity();
        if (t.text == "U" || t.text == "R" || t.text == "F" || t.text == "G")
          throw SyntaxError(t.pos, "operator '" + std::string(t.text) + "' where operand expected");
        auto it = table_.find(t.text);
        if (it == table_.end()) throw UnknownPredicate(std::string(t.text));
        return Formula::pred(it->second);
      }
      case Tok::End: throw SyntaxError(t.pos, "unexpected end of input");
      default: throw SyntaxError(t.pos, "unexpected '" + std::string(t.text) + "'");
    }
  }

  Interval parse_optional_interval() {
    if (lex_.peek().kind != Tok::LBracket) return Interval::unbounded();
    const std::size_t open = lex_.take().pos;
    const std::size_t lo = parse_int();
    expect(Tok::Comma, "','");
    Interval i;
    if (is_keyword(lex_.peek(), "inf")) {
      lex_.take();
      i = Interval::unbounded(lo);
    } else {
      const std::size_t hi = parse_int();
      if (lo > hi) throw SyntaxError(open, "interval lower bound exceeds upper bound");
      i = Interval::bounded(lo, hi);
    }
    expect(Tok::RBracket, "']'");
    return i;
  }

  std::size_t parse_int() {
    Token t = lex_.take();
    if (t.kind != Tok::Int) throw SyntaxError(t.pos, "expected nonnegative integer");
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{}) throw SyntaxError(t.pos, "integer out of range");
    return v;
  }

  void expect(Tok k, const char* what) {
    Token t = lex_.take();
    if (t.kind != k) throw SyntaxError(t.pos, std::string("expected ") + what);
  }

  Lexer lex_;
  const PredicateTable& table_;
};

}  // namespace

Formula parse_formula(std::string_view text, const PredicateTable& predicates) {
  return Parser(text, predicates).parse();
}

}  // namespace riskgap::stl

#include "derham/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace derham {

ParseError::ParseError(const std::string& msg, int position)
    : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
      position(position) {}

namespace {

struct Token {
  enum class Kind { number, ident, plus, minus, star, caret, slash, lparen, rparen, end };
  Kind kind;
  int pos;             // 1-based offset of the first character
  std::string text;    // ident name or digit run
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    int pos = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Kind::number, pos, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Token::Kind::ident, pos, std::string(src.substr(i, j - i))});
      i = j;
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '+': k = Token::Kind::plus; break;
      case '-': k = Token::Kind::minus; break;
      case '*': k = Token::Kind::star; break;
      case '^': k = Token::Kind::caret; break;
      case '/': k = Token::Kind::slash; break;
      case '(': k = Token::Kind::lparen; break;
      case ')': k = Token::Kind::rparen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back({k, pos, std::string(1, c)});
    ++i;
  }
  out.push_back({Token::Kind::end, static_cast<int>(src.size()) + 1, ""});
  return out;
}

class Parser {
 public:
  Parser(RingPtr ctx, std::string_view src) : ctx_(std::move(ctx)), toks_(lex(src)) {}

  Polynomial run() {
    Polynomial p = expr();
    if (peek().kind != Token::Kind::end)
      throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
    return p;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  Token take() { return toks_[i_++]; }
  bool eat(Token::Kind k) {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat(Token::Kind::plus)) p = p + term();
      else if (eat(Token::Kind::minus)) p = p - term();
      else return p;
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    while (eat(Token::Kind::star)) p = p * factor();
    return p;
  }

  Polynomial factor() {
    if (eat(Token::Kind::minus)) return -factor();
    return power();
  }

  Polynomial power() {
    Polynomial p = atom();
    while (eat(Token::Kind::caret)) {
      const Token& t = peek();
      if (t.kind != Token::Kind::number)
        throw ParseError("exponent must be a non-negative integer literal", t.pos);
      take();
      Int e(t.text);
      if (!e.fits_sint_p()) throw ParseError("exponent too large", t.pos);
      long n = e.get_si();
      Polynomial acc = Polynomial::constant(ctx_, 1);
      Polynomial base = p;
      for (long k = 0; k < n; ++k) acc = acc * base;
      p = acc;
    }
    return p;
  }

  Polynomial atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::number: {
        take();
        Int num(t.text);
        if (eat(Token::Kind::slash)) {
          const Token& d = peek();
          if (d.kind != Token::Kind::number)
            throw ParseError("expected integer denominator", d.pos);
          take();
          Int den(d.text);
          if (den == 0) throw ParseError("zero denominator", t.pos);
          Rational q(num, den);
          q.canonicalize();
          return Polynomial::constant(ctx_, q);
        }
        return Polynomial::constant(ctx_, Rational(num));
      }
      case Token::Kind::ident: {
        take();
        auto idx = ctx_->var_index(t.text);
        if (!idx) throw ParseError("unknown variable '" + t.text + "'", t.pos);
        return Polynomial::variable(ctx_, *idx);
      }
      case Token::Kind::lparen: {
        take();
        Polynomial p = expr();
        if (!eat(Token::Kind::rparen)) throw ParseError("expected ')'", peek().pos);
        return p;
      }
      default:
        throw ParseError("expected a number, variable, or '('", t.pos);
    }
  }

  RingPtr ctx_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const RingPtr& ctx, std::string_view src) {
  return Parser(ctx, src).run();
}

std::vector<std::string> scan_identifiers(std::string_view src) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string name(src.substr(i, j - i));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

std::string format_polynomial(const Polynomial& p) {
  if (p.is_zero()) return "0";
  const auto& ctx = *p.ctx();
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
      first = false;
    } else {
      if (a < 0) {
        os << " - ";
        a = -a;
      } else {
        os << " + ";
      }
    }
    std::string mono;
    for (int i = 0; i < ctx.nvars(); ++i) {
      if (m.exps[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ctx.vars()[i];
      if (m.exps[i] > 1) mono += "^" + std::to_string(m.exps[i]);
    }
    if (mono.empty()) {
      os << to_string(a);
    } else if (a == 1) {
      os << mono;
    } else {
      os << to_string(a) << "*" << mono;
    }
  }
  return os.str();
}

}  // namespace derham

#pragma once

// Expression language shared by the LC and sequence front ends.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   exponent:= ['-'] int | '(' ['-'] int ['/' int] ')' | 'n'   ('n' only after (-1))
//   primary := number | 'eps' | 'n' | name '(' expr ')' | '(' expr ')'
//
// Numbers are integers or terminating decimals and are kept exact.

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/rational.hpp"

namespace infinikit::expr {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, eps, n, parity, neg, add, sub, mul, div, pow, call };

  Kind kind;
  Rational value;  // number literal, or the exponent of pow
  std::string name;  // function name of call
  std::vector<ExprPtr> args;

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.value != b.value || a.name != b.name || a.args.size() != b.args.size())
      return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!(*a.args[i] == *b.args[i])) return false;
    return true;
  }
};

inline const std::set<std::string, std::less<>>& function_names() {
  static const std::set<std::string, std::less<>> names{"exp", "floor", "ln", "sqrt"};
  return names;
}

inline ExprPtr make(Expr::Kind kind, std::vector<ExprPtr> args = {}, Rational value = 0, std::string name = {}) {
  return std::make_shared<const Expr>(Expr{kind, std::move(value), std::move(name), std::move(args)});
}
inline ExprPtr number(Rational v) { return make(Expr::Kind::number, {}, std::move(v)); }
inline ExprPtr binary(Expr::Kind kind, ExprPtr a, ExprPtr b) { return make(kind, {std::move(a), std::move(b)}); }
inline ExprPtr power(ExprPtr base, Rational e) { return make(Expr::Kind::pow, {std::move(base)}, std::move(e)); }
inline ExprPtr call(std::string name, ExprPtr arg) { return make(Expr::Kind::call, {std::move(arg)}, 0, std::move(name)); }

namespace detail {

struct Token {
  enum class Kind { number, ident, op, end };
  Kind kind;
  std::string text;
  int line;
  int column;
};

inline std::string describe(const Token& t) {
  if (t.kind == Token::Kind::end) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const int line = line_;
      const int column = column_;
      if (pos_ >= text_.size()) {
        out.push_back({Token::Kind::end, "", line, column});
        return out;
      }
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::string s;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
          s += advance();
        out.push_back({Token::Kind::number, s, line, column});
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string s;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          s += advance();
        out.push_back({Token::Kind::ident, s, line, column});
      } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
        out.push_back({Token::Kind::op, std::string(1, advance()), line, column});
      } else {
        fail(ErrorKind::syntax, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                    ": unexpected character '" + std::string(1, c) + "'");
      }
    }
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ExprPtr parse_all() {
    ExprPtr e = parse_expr();
    expect_end();
    return e;
  }

 private:
  using K = Expr::Kind;

  const Token& peek() const { return tokens_[pos_]; }
  bool is_op(std::string_view op) const { return peek().kind == Token::Kind::op && peek().text == op; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void error(std::set<std::string> expected) const {
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    const Token& t = peek();
    fail(ErrorKind::syntax, "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) +
                                ": expected one of {" + list + "}, found " + describe(t));
  }

  void expect_op(std::string_view op) {
    if (!is_op(op)) error({"'" + std::string(op) + "'"});
    take();
  }

  void expect_end() {
    if (peek().kind == Token::Kind::end) return;
    std::set<std::string> expected{"'+'", "'-'", "'*'", "'/'", "end of input"};
    if (after_primary_) expected.insert("'^'");
    error(expected);
  }

  ExprPtr parse_expr() {
    ExprPtr left = parse_term();
    while (is_op("+") || is_op("-")) {
      const K kind = take().text == "+" ? K::add : K::sub;
      left = binary(kind, left, parse_term());
    }
    return left;
  }

  ExprPtr parse_term() {
    ExprPtr left = parse_unary();
    while (is_op("*") || is_op("/")) {
      const K kind = take().text == "*" ? K::mul : K::div;
      left = binary(kind, left, parse_unary());
    }
    return left;
  }

  ExprPtr parse_unary() {
    if (is_op("-")) {
      take();
      return make(K::neg, {parse_unary()});
    }
    return parse_power();
  }

  static bool is_minus_one(const Expr& e) {
    return e.kind == K::neg && e.args[0]->kind == K::number && e.args[0]->value == 1;
  }

  ExprPtr parse_power() {
    const bool parenthesised = is_op("(");
    ExprPtr base = parse_primary();
    after_primary_ = true;
    if (!is_op("^")) return base;
    take();
    after_primary_ = false;
    ExprPtr out;
    if (peek().kind == Token::Kind::ident && peek().text == "n") {
      if (!parenthesised || !is_minus_one(*base)) error({"integer", "'-'", "'('"});
      take();
      out = make(K::parity);
    } else {
      out = power(base, parse_exponent());
    }
    if (is_op("^")) {
      const Token& t = peek();
      fail(ErrorKind::syntax, "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) +
                                  ": chained '^' needs parentheses, expected one of {'+', '-', '*', '/', ')', "
                                  "end of input}, found '^'");
    }
    return out;
  }

  Integer parse_integer() {
    if (peek().kind != Token::Kind::number || peek().text.find('.') != std::string::npos) error({"integer"});
    return Integer(take().text);
  }

  Rational parse_exponent() {
    if (is_op("(")) {
      take();
      bool negative = false;
      if (is_op("-")) {
        take();
        negative = true;
      }
      Rational e(parse_integer());
      if (is_op("/")) {
        take();
        const Integer den = parse_integer();
        if (den == 0) fail(ErrorKind::division_by_zero, "zero denominator in exponent");
        e /= den;
      }
      expect_op(")");
      return negative ? Rational(-e) : e;
    }
    bool negative = false;
    if (is_op("-")) {
      take();
      negative = true;
    }
    if (peek().kind != Token::Kind::number) error({"integer", "'('"});
    Rational e(parse_integer());
    return negative ? Rational(-e) : e;
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    after_primary_ = false;
    if (t.kind == Token::Kind::number) {
      Rational v;
      try {
        v = parse_rational(t.text);
      } catch (const Error&) {
        fail(ErrorKind::syntax, "line " + std::to_string(t.line) + ", column " + std::to_string(t.column) +
                                    ": malformed number '" + t.text + "'");
      }
      take();
      return number(v);
    }
    if (t.kind == Token::Kind::ident) {
      const std::string name = take().text;
      if (name == "eps") return make(K::eps);
      if (name == "n") return make(K::n);
      if (function_names().contains(name)) {
        expect_op("(");
        ExprPtr arg = parse_expr();
        expect_op(")");
        return call(name, arg);
      }
      --pos_;
      error({"number", "'eps'", "'n'", "'('", "'-'", "function name"});
    }
    if (is_op("(")) {
      take();
      ExprPtr e = parse_expr();
      if (!is_op(")")) error({"'+'", "'-'", "'*'", "'/'", "')'"});
      take();
      return e;
    }
    error({"number", "'eps'", "'n'", "'('", "'-'", "function name"});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool after_primary_ = false;
};

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::neg: return 3;
    case Expr::Kind::pow: return 4;
    default: return 5;
  }
}

}  // namespace detail

inline ExprPtr parse(std::string_view text) {
  return detail::Parser(detail::Lexer(text).run()).parse_all();
}

inline std::string print(const Expr& e);

namespace detail {

inline std::string wrap(const Expr& e, int min_precedence) {
  const std::string s = print(e);
  return precedence(e) < min_precedence ? "(" + s + ")" : s;
}

inline std::string print_number(const Rational& v) {
  if (auto d = to_decimal_string(v)) return *d;
  return "(" + to_string(v) + ")";
}

}  // namespace detail

/// Text with the fewest parentheses that parses back to the same tree.
inline std::string print(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::number: return detail::print_number(e.value);
    case K::eps: return "eps";
    case K::n: return "n";
    case K::parity: return "(-1)^n";
    case K::neg: return "-" + detail::wrap(*e.args[0], 3);
    case K::add: return detail::wrap(*e.args[0], 1) + " + " + detail::wrap(*e.args[1], 2);
    case K::sub: return detail::wrap(*e.args[0], 1) + " - " + detail::wrap(*e.args[1], 2);
    case K::mul: return detail::wrap(*e.args[0], 2) + "*" + detail::wrap(*e.args[1], 3);
    case K::div: return detail::wrap(*e.args[0], 2) + "/" + detail::wrap(*e.args[1], 3);
    case K::pow: {
      const std::string exponent = is_integer(e.value) ? to_string(e.value) : "(" + to_string(e.value) + ")";
      return detail::wrap(*e.args[0], 5) + "^" + exponent;
    }
    case K::call: return e.name + "(" + print(*e.args[0]) + ")";
  }
  return "";
}

inline std::string print(const ExprPtr& e) { return print(*e); }

}  // namespace infinikit::expr

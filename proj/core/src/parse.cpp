#include <cctype>
#include <charconv>

#include "hjdyn/error.hpp"
#include "node.hpp"

namespace hjdyn {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view text, const SymbolSet& functions) : text_(text), functions_(functions) {}

  Expr run() {
    skip();
    if (pos_ == text_.size()) fail("empty expression");
    Expr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(canon::make_product({Expr(-1.0), term()}));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : canon::make_sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        factors.push_back(canon::make_power(unary(), Expr(-1.0)));
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors.front() : canon::make_product(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return canon::make_product({Expr(-1.0), unary()});
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr b = base();
    if (accept('^')) return canon::make_power(b, unary());
    return b;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::vector<Expr> arguments() {
    expect('(');
    std::vector<Expr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    return args;
  }

  int integer() {
    skip();
    const std::size_t start = pos_;
    int v = 0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (res.ec != std::errc() || v < 0) fail_at("expected argument index", start);
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return v;
  }

  Expr derivative(std::size_t at) {
    expect('[');
    skip();
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail("expected function name");
    const std::size_t name_at = pos_;
    std::string fn = identifier();
    if (functions_.count(fn) == 0) fail_at("unknown function '" + fn + "'", name_at);
    std::vector<int> indices;
    expect(',');
    indices.push_back(integer());
    while (accept(',')) indices.push_back(integer());
    expect(']');
    std::vector<Expr> args = arguments();
    for (int i : indices) {
      if (static_cast<std::size_t>(i) >= args.size()) {
        fail_at("derivative index out of range", at);
      }
    }
    return Expr::derivative(std::move(fn), std::move(indices), std::move(args));
  }

  Expr base() {
    const char c = peek();
    const std::size_t at = pos_;
    if (c == '\0') fail("unexpected end of input");
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (digit(c) || c == '.') {
      double v = 0.0;
      auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
      if (res.ec != std::errc()) fail("malformed number");
      pos_ = static_cast<std::size_t>(res.ptr - text_.data());
      return Expr(v);
    }
    if (ident_start(c)) {
      std::string name = identifier();
      const char next = peek();
      if (name == "d" && next == '[') return derivative(at);
      if (name == "sqrt") {
        if (next != '(') fail_at("sqrt needs an argument", at);
        std::vector<Expr> args = arguments();
        if (args.size() != 1) fail_at("sqrt takes one argument", at);
        return canon::make_sqrt(args.front());
      }
      if (next == '(') {
        if (functions_.count(name) == 0) fail_at("unknown function '" + name + "'", at);
        return Expr::apply(std::move(name), arguments());
      }
      if (functions_.count(name) != 0) fail_at("function '" + name + "' used without arguments", at);
      return Expr::symbol(std::move(name));
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const SymbolSet& functions_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const SymbolSet& functions) {
  return Parser(text, functions).run();
}

}  // namespace hjdyn

#include <charconv>
#include <cmath>
#include <string>

#include "node.hpp"

namespace hjdyn {

namespace {

enum Prec : int { kSum = 1, kProduct = 2, kPower = 3, kAtom = 4 };

void emit(const Expr& e, std::string& out);

void emit_number(double v, std::string& out) {
  if (std::isnan(v)) {
    out += "nan";
    return;
  }
  if (std::isinf(v)) {
    out += v < 0 ? "-inf" : "inf";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

bool is_negative_term(const Expr& e) {
  if (e.is_constant()) return e.value() < 0.0;
  if (e.kind() == Kind::product) {
    const Expr& first = e.children()[0];
    return first.is_constant() && first.value() < 0.0;
  }
  return e.kind() == Kind::negation;
}

int precedence(const Expr& e) {
  switch (e.kind()) {
    case Kind::constant:
      return e.value() < 0.0 ? kProduct : kAtom;
    case Kind::symbol:
    case Kind::apply:
    case Kind::derivative:
    case Kind::sqrt:
      return kAtom;
    case Kind::power:
      return kPower;
    case Kind::product:
    case Kind::negation:
      return kProduct;
    case Kind::sum:
      return kSum;
  }
  return kAtom;
}

void emit_wrapped(const Expr& e, std::string& out, bool parens) {
  if (parens) out += '(';
  emit(e, out);
  if (parens) out += ')';
}

void emit_args(std::span<const Expr> args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    emit(args[i], out);
  }
  out += ')';
}

void emit_power(const Expr& base, const Expr& exponent, std::string& out) {
  emit_wrapped(base, out, precedence(base) <= kPower);
  out += '^';
  if (exponent.is_constant()) {
    emit_number(exponent.value(), out);
  } else {
    emit_wrapped(exponent, out, precedence(exponent) < kAtom);
  }
}

// Factor of a product, with negative constant exponents flipped when
// `flip` is set (the factor then goes in the denominator).
void emit_factor(const Expr& f, std::string& out, bool flip) {
  if (flip) {
    const Expr& base = f.children()[0];
    const double n = -f.children()[1].value();
    if (n == 1.0) {
      emit_wrapped(base, out, precedence(base) < kPower);
    } else {
      emit_power(base, Expr(n), out);
    }
    return;
  }
  emit_wrapped(f, out, precedence(f) < kPower);
}

bool in_denominator(const Expr& f) {
  return f.kind() == Kind::power && f.children()[1].is_constant() &&
         f.children()[1].value() < 0.0;
}

void emit_product(const Expr& e, std::string& out, bool drop_sign) {
  auto ch = e.children();
  double coef = 1.0;
  std::size_t start = 0;
  if (!ch.empty() && ch[0].is_constant()) {
    coef = ch[0].value();
    start = 1;
  }
  if (coef < 0.0) {
    if (!drop_sign) out += '-';
    coef = -coef;
  }
  bool first = true;
  if (coef != 1.0) {
    emit_number(coef, out);
    first = false;
  }
  for (std::size_t i = start; i < ch.size(); ++i) {
    if (in_denominator(ch[i])) continue;
    if (!first) out += '*';
    emit_factor(ch[i], out, false);
    first = false;
  }
  if (first) out += '1';
  for (std::size_t i = start; i < ch.size(); ++i) {
    if (!in_denominator(ch[i])) continue;
    out += '/';
    emit_factor(ch[i], out, true);
  }
}

void emit_term(const Expr& t, std::string& out, bool drop_sign) {
  if (!drop_sign) {
    emit(t, out);
    return;
  }
  switch (t.kind()) {
    case Kind::constant:
      emit_number(-t.value(), out);
      return;
    case Kind::product:
      emit_product(t, out, true);
      return;
    case Kind::negation: {
      const Expr& inner = t.children()[0];
      emit_wrapped(inner, out, precedence(inner) <= kSum);
      return;
    }
    default:
      emit(t, out);
  }
}

void emit(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case Kind::constant:
      emit_number(e.value(), out);
      return;
    case Kind::symbol:
      out += e.name();
      return;
    case Kind::apply:
      out += e.name();
      emit_args(e.children(), out);
      return;
    case Kind::derivative:
      out += "d[";
      out += e.name();
      for (int i : e.indices()) {
        out += ',';
        out += std::to_string(i);
      }
      out += ']';
      emit_args(e.children(), out);
      return;
    case Kind::sqrt:
      out += "sqrt(";
      emit(e.children()[0], out);
      out += ')';
      return;
    case Kind::power:
      emit_power(e.children()[0], e.children()[1], out);
      return;
    case Kind::product:
      emit_product(e, out, false);
      return;
    case Kind::negation: {
      const Expr& inner = e.children()[0];
      out += '-';
      emit_wrapped(inner, out, precedence(inner) < kPower);
      return;
    }
    case Kind::sum: {
      auto ch = e.children();
      for (std::size_t i = 0; i < ch.size(); ++i) {
        const bool neg = i > 0 && is_negative_term(ch[i]);
        if (i > 0) out += neg ? " - " : " + ";
        if (neg) {
          emit_term(ch[i], out, true);
        } else {
          emit_wrapped(ch[i], out, precedence(ch[i]) <= kSum);
        }
      }
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  emit(*this, out);
  return out;
}

}  // namespace hjdyn

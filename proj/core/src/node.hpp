#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hjdyn/expr.hpp"

namespace hjdyn {

struct Expr::Node {
  Kind kind = Kind::constant;
  double value = 0.0;
  std::string name;
  std::vector<Expr> children;
  std::vector<int> indices;
  bool canonical = false;
};

struct ExprFactory {
  static Expr make(Expr::Node node) {
    return Expr(std::make_shared<const Expr::Node>(std::move(node)));
  }
  static Expr make(Kind kind, std::vector<Expr> children, bool canonical) {
    Expr::Node n;
    n.kind = kind;
    n.children = std::move(children);
    n.canonical = canonical;
    return make(std::move(n));
  }
  static bool canonical(const Expr& e) { return e.node_->canonical; }
};

namespace canon {

// Each builder assumes canonical operands and returns a canonical result.
Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_power(const Expr& base, const Expr& exponent);
Expr make_sqrt(const Expr& arg, const Assumptions* assumptions = nullptr);

// Splits a canonical term into numeric coefficient and the remaining factor.
std::pair<double, Expr> split_coefficient(const Expr& term);
// Splits a canonical factor into base and exponent (exponent 1 if not a power).
std::pair<Expr, Expr> split_power(const Expr& factor);

bool is_integer(double v);

}  // namespace canon
}  // namespace hjdyn

#pragma once

#include <span>
#include <string>
#include <vector>

#include "hjdyn/expr.hpp"

namespace hjdyn {

/// An expression flattened to postfix code over a fixed slot layout, for
/// the inner loops of the integrators. Domain errors yield NaN or inf
/// rather than exceptions; callers test the result with std::isfinite.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Throws EvalError if `e` has a symbol outside `slots` or an opaque function.
  CompiledExpr(const Expr& e, std::span<const std::string> slots);

  double operator()(std::span<const double> values) const;

 private:
  enum class Op : unsigned char { constant, slot, add, mul, powi, pow, sqrt, neg };
  struct Instr {
    Op op;
    int arg;
    double value;
  };
  void emit(const Expr& e, std::span<const std::string> slots, int depth);

  std::vector<Instr> code_;
  int max_depth_ = 0;
};

}  // namespace hjdyn

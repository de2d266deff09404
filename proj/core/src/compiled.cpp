#include "hjdyn/compiled.hpp"

#include <algorithm>
#include <cmath>

#include "hjdyn/error.hpp"

namespace hjdyn {

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> slots) {
  emit(simplify(e), slots, 0);
}

void CompiledExpr::emit(const Expr& e, std::span<const std::string> slots, int depth) {
  max_depth_ = std::max(max_depth_, depth + 1);
  auto ch = e.children();
  switch (e.kind()) {
    case Kind::constant:
      code_.push_back({Op::constant, 0, e.value()});
      return;
    case Kind::symbol: {
      auto it = std::find(slots.begin(), slots.end(), e.name());
      if (it == slots.end()) throw EvalError("unbound symbol '" + e.name() + "'");
      code_.push_back({Op::slot, static_cast<int>(it - slots.begin()), 0.0});
      return;
    }
    case Kind::apply:
    case Kind::derivative:
      throw EvalError("cannot compile opaque function '" + e.name() + "'");
    case Kind::sum:
    case Kind::product:
      for (std::size_t i = 0; i < ch.size(); ++i) emit(ch[i], slots, depth + static_cast<int>(i));
      code_.push_back({e.kind() == Kind::sum ? Op::add : Op::mul, static_cast<int>(ch.size()), 0.0});
      return;
    case Kind::power: {
      emit(ch[0], slots, depth);
      const Expr& n = ch[1];
      if (n.is_constant() && std::floor(n.value()) == n.value() && std::abs(n.value()) <= 64) {
        code_.push_back({Op::powi, static_cast<int>(n.value()), 0.0});
        return;
      }
      emit(n, slots, depth + 1);
      code_.push_back({Op::pow, 0, 0.0});
      return;
    }
    case Kind::sqrt:
      emit(ch[0], slots, depth);
      code_.push_back({Op::sqrt, 0, 0.0});
      return;
    case Kind::negation:
      emit(ch[0], slots, depth);
      code_.push_back({Op::neg, 0, 0.0});
      return;
  }
}

double CompiledExpr::operator()(std::span<const double> values) const {
  constexpr int kInline = 64;
  double inline_stack[kInline];
  std::vector<double> heap;
  double* st = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(static_cast<std::size_t>(max_depth_));
    st = heap.data();
  }
  int top = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::constant:
        st[top++] = in.value;
        break;
      case Op::slot:
        st[top++] = values[static_cast<std::size_t>(in.arg)];
        break;
      case Op::add: {
        double s = 0.0;
        for (int i = top - in.arg; i < top; ++i) s += st[i];
        top -= in.arg;
        st[top++] = s;
        break;
      }
      case Op::mul: {
        double p = 1.0;
        for (int i = top - in.arg; i < top; ++i) p *= st[i];
        top -= in.arg;
        st[top++] = p;
        break;
      }
      case Op::powi: {
        const double b = st[top - 1];
        int n = in.arg;
        double r = 1.0;
        double x = n < 0 ? 1.0 / b : b;
        for (n = std::abs(n); n > 0; n >>= 1, x *= x) {
          if (n & 1) r *= x;
        }
        st[top - 1] = r;
        break;
      }
      case Op::pow: {
        const double n = st[--top];
        st[top - 1] = std::pow(st[top - 1], n);
        break;
      }
      case Op::sqrt:
        st[top - 1] = std::sqrt(st[top - 1]);
        break;
      case Op::neg:
        st[top - 1] = -st[top - 1];
        break;
    }
  }
  return top > 0 ? st[0] : 0.0;
}

}  // namespace hjdyn

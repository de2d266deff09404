#include <cmath>

#include "hjdyn/error.hpp"
#include "node.hpp"

namespace hjdyn {

namespace {

double eval(const Expr& e, const Bindings& b, const FunctionTable* fns);

double call(const Expr& e, const Bindings& b, const FunctionTable* fns) {
  auto it = fns ? fns->find(e.name()) : FunctionTable::const_iterator{};
  if (!fns || it == fns->end()) {
    throw EvalError("cannot evaluate opaque function '" + e.name() + "'");
  }
  const FunctionDef& def = it->second;
  const auto& args = e.children();
  if (def.params.empty()) {
    // Body written in the call-site symbols.
    Expr body = def.body;
    for (int i : e.indices()) {
      const Expr& a = args[static_cast<std::size_t>(i)];
      if (!a.is_symbol()) throw EvalError("derivative of '" + e.name() + "' along a non-symbol");
      body = differentiate(body, a.name());
    }
    return eval(body, b, fns);
  }
  if (def.params.size() != args.size()) {
    throw EvalError("function '" + e.name() + "' called with the wrong number of arguments");
  }
  Expr body = def.body;
  for (int i : e.indices()) body = differentiate(body, def.params[static_cast<std::size_t>(i)]);
  Bindings local = b;
  for (std::size_t i = 0; i < args.size(); ++i) local[def.params[i]] = eval(args[i], b, fns);
  return eval(body, local, fns);
}

double eval(const Expr& e, const Bindings& b, const FunctionTable* fns) {
  switch (e.kind()) {
    case Kind::constant:
      return e.value();
    case Kind::symbol: {
      auto it = b.find(e.name());
      if (it == b.end()) throw EvalError("unbound symbol '" + e.name() + "'");
      return it->second;
    }
    case Kind::apply:
    case Kind::derivative:
      return call(e, b, fns);
    case Kind::sum: {
      double s = 0.0;
      for (const Expr& c : e.children()) s += eval(c, b, fns);
      return s;
    }
    case Kind::product: {
      double p = 1.0;
      for (const Expr& c : e.children()) p *= eval(c, b, fns);
      return p;
    }
    case Kind::power: {
      const double base = eval(e.children()[0], b, fns);
      const double n = eval(e.children()[1], b, fns);
      if (base == 0.0 && n < 0.0) throw EvalError("division by zero");
      if (base < 0.0 && std::floor(n) != n) throw EvalError("non-integer power of negative value");
      return std::pow(base, n);
    }
    case Kind::sqrt: {
      const double u = eval(e.children()[0], b, fns);
      if (u < 0.0) throw EvalError("sqrt of negative value");
      return std::sqrt(u);
    }
    case Kind::negation:
      return -eval(e.children()[0], b, fns);
  }
  return 0.0;
}

}  // namespace

double evaluate(const Expr& e, const Bindings& bindings) {
  const double v = eval(e, bindings, nullptr);
  if (!std::isfinite(v)) throw EvalError("non-finite result evaluating " + e.str());
  return v;
}

double evaluate(const Expr& e, const Bindings& bindings, const FunctionTable& functions) {
  const double v = eval(e, bindings, &functions);
  if (!std::isfinite(v)) throw EvalError("non-finite result evaluating " + e.str());
  return v;
}

}  // namespace hjdyn

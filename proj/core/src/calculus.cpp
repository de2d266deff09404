#include "hjdyn/error.hpp"
#include "node.hpp"

namespace hjdyn {

namespace {

using canon::make_power;
using canon::make_product;
using canon::make_sum;

Expr d(const Expr& e, std::string_view s);

// Chain rule over the arguments of an apply/derivative node.
Expr d_call(const Expr& e, std::string_view s) {
  std::vector<Expr> terms;
  auto args = e.children();
  std::vector<Expr> arg_list(args.begin(), args.end());
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (!depends_on(args[k], s)) continue;
    std::vector<int> idx(e.indices().begin(), e.indices().end());
    idx.push_back(static_cast<int>(k));
    terms.push_back(make_product({Expr::derivative(e.name(), std::move(idx), arg_list), d(args[k], s)}));
  }
  return make_sum(std::move(terms));
}

Expr d(const Expr& e, std::string_view s) {
  if (!depends_on(e, s)) return Expr();
  switch (e.kind()) {
    case Kind::constant:
      return Expr();
    case Kind::symbol:
      return Expr(1.0);
    case Kind::apply:
    case Kind::derivative:
      return d_call(e, s);
    case Kind::sum: {
      std::vector<Expr> terms;
      for (const Expr& c : e.children()) terms.push_back(d(c, s));
      return make_sum(std::move(terms));
    }
    case Kind::product: {
      auto ch = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (!depends_on(ch[i], s)) continue;
        std::vector<Expr> fs(ch.begin(), ch.end());
        fs[i] = d(ch[i], s);
        terms.push_back(make_product(std::move(fs)));
      }
      return make_sum(std::move(terms));
    }
    case Kind::power: {
      const Expr& b = e.children()[0];
      const Expr& n = e.children()[1];
      if (depends_on(n, s)) {
        throw AnalysisError("cannot differentiate " + e.str() + " with respect to " +
                            std::string(s) + ": symbol in exponent");
      }
      return make_product({n, make_power(b, make_sum({n, Expr(-1.0)})), d(b, s)});
    }
    case Kind::sqrt: {
      const Expr& u = e.children()[0];
      return make_product({Expr(0.5), d(u, s), make_power(e, Expr(-1.0))});
    }
    case Kind::negation:
      return make_product({Expr(-1.0), d(e.children()[0], s)});
  }
  return Expr();
}

Expr subst(const Expr& e, const std::map<std::string, Expr, std::less<>>& r) {
  auto kids = [&] {
    std::vector<Expr> out;
    out.reserve(e.children().size());
    for (const Expr& c : e.children()) out.push_back(subst(c, r));
    return out;
  };
  switch (e.kind()) {
    case Kind::constant:
      return e;
    case Kind::symbol: {
      auto it = r.find(e.name());
      return it == r.end() ? e : simplify(it->second);
    }
    default:
      break;
  }
  switch (e.kind()) {
    case Kind::apply:
      return Expr::apply(e.name(), kids());
    case Kind::derivative:
      return Expr::derivative(e.name(), std::vector<int>(e.indices().begin(), e.indices().end()),
                              kids());
    case Kind::sum:
      return make_sum(kids());
    case Kind::product:
      return make_product(kids());
    case Kind::power: {
      auto k = kids();
      return make_power(k[0], k[1]);
    }
    case Kind::sqrt:
      return canon::make_sqrt(subst(e.children()[0], r));
    default:
      return e;
  }
}

Expr expand_call(const Expr& e, const FunctionDef& def, std::vector<Expr> args) {
  Expr body = simplify(def.body);
  if (def.params.empty()) {
    for (const Expr& a : args) {
      if (!a.is_symbol()) {
        throw ConfigError("function '" + e.name() +
                          "' is defined in call-site symbols but called with " + a.str());
      }
    }
    for (int i : e.indices()) body = d(body, args[static_cast<std::size_t>(i)].name());
    return body;
  }
  if (def.params.size() != args.size()) {
    throw ConfigError("function '" + e.name() + "' expects " + std::to_string(def.params.size()) +
                      " argument(s), got " + std::to_string(args.size()));
  }
  for (int i : e.indices()) body = d(body, def.params[static_cast<std::size_t>(i)]);
  std::map<std::string, Expr, std::less<>> bind;
  for (std::size_t i = 0; i < args.size(); ++i) bind.emplace(def.params[i], std::move(args[i]));
  return subst(body, bind);
}

Expr subst_fn(const Expr& e, const FunctionTable& table) {
  if (e.kind() == Kind::constant || e.kind() == Kind::symbol) return e;
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const Expr& c : e.children()) kids.push_back(subst_fn(c, table));
  switch (e.kind()) {
    case Kind::apply:
    case Kind::derivative: {
      auto it = table.find(e.name());
      if (it != table.end()) return expand_call(e, it->second, std::move(kids));
      if (e.kind() == Kind::apply) return Expr::apply(e.name(), std::move(kids));
      return Expr::derivative(e.name(), std::vector<int>(e.indices().begin(), e.indices().end()),
                              std::move(kids));
    }
    case Kind::sum:
      return make_sum(std::move(kids));
    case Kind::product:
      return make_product(std::move(kids));
    case Kind::power:
      return make_power(kids[0], kids[1]);
    case Kind::sqrt:
      return canon::make_sqrt(kids[0]);
    default:
      return e;
  }
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view symbol) { return d(simplify(e), symbol); }

Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements) {
  if (replacements.empty()) return simplify(e);
  return subst(simplify(e), replacements);
}

Expr substitute_functions(const Expr& e, const FunctionTable& table) {
  if (table.empty()) return simplify(e);
  return subst_fn(simplify(e), table);
}

}  // namespace hjdyn

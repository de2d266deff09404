#include <algorithm>
#include <cfloat>
#include <cmath>

#include "node.hpp"

namespace hjdyn {
namespace canon {

namespace {

// Above this many terms an integer power of a sum, or a product of sums,
// is left factored.
constexpr std::size_t kMaxExpandedTerms = 512;

// Collected coefficients this close to zero (relative to the largest
// contribution) are cancellation noise.
constexpr double kSnap = 64.0 * DBL_EPSILON;

Expr with_coefficient(double c, const Expr& rest) {
  if (c == 1.0) return rest;
  std::vector<Expr> ch;
  if (rest.kind() == Kind::product) {
    ch.reserve(rest.children().size() + 1);
    ch.emplace_back(c);
    ch.insert(ch.end(), rest.children().begin(), rest.children().end());
  } else {
    ch = {Expr(c), rest};
  }
  return ExprFactory::make(Kind::product, std::move(ch), true);
}

Expr node(Kind kind, std::vector<Expr> children) {
  return ExprFactory::make(kind, std::move(children), true);
}

bool is_single_factor_on(const Expr& r, const Expr& base) {
  if (r.kind() == Kind::power) return r.children()[0] == base;
  return r == base && !r.is_constant() && r.kind() != Kind::product;
}

double saturating_pow(std::size_t n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n);
  return r;
}

Expr expand_power_of_sum(const Expr& s, int n) {
  std::vector<Expr> acc(s.children().begin(), s.children().end());
  for (int k = 1; k < n; ++k) {
    std::vector<Expr> next;
    next.reserve(acc.size() * s.children().size());
    for (const Expr& a : acc) {
      for (const Expr& b : s.children()) next.push_back(make_product({a, b}));
    }
    acc = std::move(next);
  }
  return make_sum(std::move(acc));
}

}  // namespace

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::pair<double, Expr> split_coefficient(const Expr& term) {
  if (term.is_constant()) return {term.value(), Expr(1.0)};
  if (term.kind() == Kind::product) {
    auto ch = term.children();
    if (ch[0].is_constant()) {
      if (ch.size() == 2) return {ch[0].value(), ch[1]};
      return {ch[0].value(), node(Kind::product, std::vector<Expr>(ch.begin() + 1, ch.end()))};
    }
  }
  return {1.0, term};
}

std::pair<Expr, Expr> split_power(const Expr& factor) {
  if (factor.kind() == Kind::power) return {factor.children()[0], factor.children()[1]};
  return {factor, Expr(1.0)};
}

Expr make_sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  for (Expr& t : terms) {
    if (t.kind() == Kind::sum) {
      flat.insert(flat.end(), t.children().begin(), t.children().end());
    } else if (!t.is_zero()) {
      flat.push_back(std::move(t));
    }
  }

  double constant = 0.0;
  double constant_scale = 0.0;
  struct Part {
    Expr rest;
    double coef;
  };
  std::vector<Part> parts;
  parts.reserve(flat.size());
  for (const Expr& t : flat) {
    if (t.is_constant()) {
      constant += t.value();
      constant_scale = std::max(constant_scale, std::abs(t.value()));
    } else {
      auto [c, r] = split_coefficient(t);
      parts.push_back({std::move(r), c});
    }
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Part& a, const Part& b) { return compare(a.rest, b.rest) < 0; });

  std::vector<Expr> out;
  if (std::abs(constant) > kSnap * constant_scale) out.emplace_back(constant);
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    double total = 0.0;
    double scale = 0.0;
    while (j < parts.size() && (j == i || parts[j].rest == parts[i].rest)) {
      total += parts[j].coef;
      scale = std::max(scale, std::abs(parts[j].coef));
      ++j;
    }
    if (j - i > 1 && std::abs(total) <= kSnap * scale) total = 0.0;
    if (total != 0.0) out.push_back(with_coefficient(total, parts[i].rest));
    i = j;
  }

  if (out.empty()) return Expr();
  if (out.size() == 1) return out.front();
  return node(Kind::sum, std::move(out));
}

Expr make_product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  for (Expr& f : factors) {
    if (f.kind() == Kind::product) {
      flat.insert(flat.end(), f.children().begin(), f.children().end());
    } else {
      flat.push_back(std::move(f));
    }
  }

  double coef = 1.0;
  std::vector<std::pair<Expr, Expr>> parts;
  parts.reserve(flat.size());
  for (const Expr& f : flat) {
    if (f.is_constant()) {
      coef *= f.value();
    } else {
      parts.push_back(split_power(f));
    }
  }
  if (coef == 0.0) return Expr();
  std::stable_sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
    return compare(a.first, b.first) < 0;
  });

  std::vector<Expr> built;
  built.reserve(parts.size());
  bool changed = false;
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i + 1;
    while (j < parts.size() && parts[j].first == parts[i].first) ++j;
    Expr exponent;
    if (j - i == 1) {
      exponent = parts[i].second;
    } else {
      std::vector<Expr> exps;
      for (std::size_t k = i; k < j; ++k) exps.push_back(parts[k].second);
      exponent = make_sum(std::move(exps));
    }
    Expr r = make_power(parts[i].first, exponent);
    if (!is_single_factor_on(r, parts[i].first)) changed = true;
    built.push_back(std::move(r));
    i = j;
  }

  if (changed) {
    built.emplace_back(coef);
    return make_product(std::move(built));
  }

  for (std::size_t i = 0; i < built.size(); ++i) {
    if (built[i].kind() != Kind::sum) continue;
    double size = 1.0;
    for (const Expr& f : built) {
      if (f.kind() == Kind::sum) size *= static_cast<double>(f.children().size());
    }
    if (size > static_cast<double>(kMaxExpandedTerms)) break;
    Expr s = built[i];
    built.erase(built.begin() + static_cast<std::ptrdiff_t>(i));
    built.emplace_back(coef);
    std::vector<Expr> terms;
    terms.reserve(s.children().size());
    for (const Expr& t : s.children()) {
      std::vector<Expr> fs = built;
      fs.push_back(t);
      terms.push_back(make_product(std::move(fs)));
    }
    return make_sum(std::move(terms));
  }

  if (built.empty()) return Expr(coef);
  if (coef == 1.0 && built.size() == 1) return built.front();
  if (coef != 1.0) built.insert(built.begin(), Expr(coef));
  return node(Kind::product, std::move(built));
}

Expr make_power(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return Expr(1.0);
  if (exponent.is_constant(1.0)) return base;

  if (base.is_constant()) {
    const double b = base.value();
    if (b == 1.0) return Expr(1.0);
    if (exponent.is_constant()) {
      const double e = exponent.value();
      const bool domain_ok = !(b < 0.0 && !is_integer(e)) && !(b == 0.0 && e < 0.0);
      if (domain_ok) {
        const double r = std::pow(b, e);
        if (std::isfinite(r)) return Expr(r);
      }
    }
    return node(Kind::power, {base, exponent});
  }

  if (exponent.is_constant() && is_integer(exponent.value())) {
    const double n = exponent.value();
    switch (base.kind()) {
      case Kind::power: {
        const Expr& inner = base.children()[1];
        return make_power(base.children()[0], make_product({inner, exponent}));
      }
      case Kind::product: {
        std::vector<Expr> fs;
        fs.reserve(base.children().size());
        for (const Expr& f : base.children()) fs.push_back(make_power(f, exponent));
        return make_product(std::move(fs));
      }
      case Kind::sqrt: {
        if (std::abs(n) < 2.0) break;
        const double q = std::trunc(n / 2.0);
        const double r = n - 2.0 * q;
        const Expr& u = base.children()[0];
        Expr whole = make_power(u, Expr(q));
        if (r == 0.0) return whole;
        Expr half = r > 0.0 ? base : node(Kind::power, {base, Expr(-1.0)});
        return make_product({whole, half});
      }
      case Kind::sum: {
        if (n < 2.0 || n > 6.0) break;
        const int k = static_cast<int>(n);
        if (saturating_pow(base.children().size(), k) > static_cast<double>(kMaxExpandedTerms)) {
          break;
        }
        return expand_power_of_sum(base, k);
      }
      default:
        break;
    }
  }
  return node(Kind::power, {base, exponent});
}

namespace {

bool is_positive_symbol(const Expr& e, const Assumptions& a) {
  return e.is_symbol() && a.positive.count(e.name()) > 0;
}

// sqrt of s^(2k) for a positive symbol s, or nullopt-like empty result.
bool root_of_even_power(const Expr& f, const Assumptions& a, Expr& out) {
  if (f.is_constant()) {
    if (f.value() <= 0.0) return false;
    out = Expr(std::sqrt(f.value()));
    return true;
  }
  auto [b, e] = split_power(f);
  if (!is_positive_symbol(b, a) || !e.is_constant()) return false;
  out = make_power(b, Expr(e.value() / 2.0));
  return true;
}

}  // namespace

Expr make_sqrt(const Expr& arg, const Assumptions* assumptions) {
  if (arg.is_constant() && arg.value() >= 0.0) return Expr(std::sqrt(arg.value()));
  if (assumptions != nullptr && !assumptions->positive.empty()) {
    Expr single;
    if (arg.kind() == Kind::product) {
      std::vector<Expr> roots, rest;
      for (const Expr& f : arg.children()) {
        if (root_of_even_power(f, *assumptions, single)) {
          roots.push_back(single);
        } else {
          rest.push_back(f);
        }
      }
      if (!roots.empty()) {
        if (!rest.empty()) roots.push_back(node(Kind::sqrt, {make_product(std::move(rest))}));
        return make_product(std::move(roots));
      }
    } else if (root_of_even_power(arg, *assumptions, single)) {
      return single;
    }
  }
  return node(Kind::sqrt, {arg});
}

}  // namespace canon

namespace {

Expr rebuild(const Expr& e, const Assumptions& a, bool use_assumptions) {
  if (!use_assumptions && ExprFactory::canonical(e)) return e;
  auto kids = [&] {
    std::vector<Expr> out;
    out.reserve(e.children().size());
    for (const Expr& c : e.children()) out.push_back(rebuild(c, a, use_assumptions));
    return out;
  };
  switch (e.kind()) {
    case Kind::constant:
    case Kind::symbol:
      return e;
    case Kind::apply:
      return Expr::apply(e.name(), kids());
    case Kind::derivative:
      return Expr::derivative(e.name(), std::vector<int>(e.indices().begin(), e.indices().end()),
                              kids());
    case Kind::sum:
      return canon::make_sum(kids());
    case Kind::product:
      return canon::make_product(kids());
    case Kind::power: {
      auto k = kids();
      return canon::make_power(k[0], k[1]);
    }
    case Kind::sqrt:
      return canon::make_sqrt(rebuild(e.children()[0], a, use_assumptions),
                              use_assumptions ? &a : nullptr);
    case Kind::negation:
      return canon::make_product({Expr(-1.0), rebuild(e.children()[0], a, use_assumptions)});
  }
  return e;
}

}  // namespace

Expr simplify(const Expr& e, const Assumptions& assumptions) {
  return rebuild(e, assumptions, !assumptions.positive.empty());
}

Expr operator+(const Expr& a, const Expr& b) {
  return canon::make_sum({simplify(a), simplify(b)});
}

Expr operator-(const Expr& a, const Expr& b) {
  return canon::make_sum({simplify(a), canon::make_product({Expr(-1.0), simplify(b)})});
}

Expr operator*(const Expr& a, const Expr& b) {
  return canon::make_product({simplify(a), simplify(b)});
}

Expr operator/(const Expr& a, const Expr& b) {
  return canon::make_product({simplify(a), canon::make_power(simplify(b), Expr(-1.0))});
}

Expr operator-(const Expr& a) { return canon::make_product({Expr(-1.0), simplify(a)}); }

Expr pow(const Expr& base, const Expr& exponent) {
  return canon::make_power(simplify(base), simplify(exponent));
}

Expr sqrt(const Expr& arg) { return canon::make_sqrt(simplify(arg)); }

Expr sum(std::vector<Expr> terms) {
  for (Expr& t : terms) t = simplify(t);
  return canon::make_sum(std::move(terms));
}

Expr product(std::vector<Expr> factors) {
  for (Expr& f : factors) f = simplify(f);
  return canon::make_product(std::move(factors));
}

}  // namespace hjdyn

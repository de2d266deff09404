#include <algorithm>
#include <cmath>
#include <ostream>

#include "hjdyn/error.hpp"
#include "node.hpp"

namespace hjdyn {

namespace {

const std::shared_ptr<const Expr::Node>& zero_node() {
  static const auto node = [] {
    auto n = std::make_shared<Expr::Node>();
    n->canonical = true;
    return std::shared_ptr<const Expr::Node>(std::move(n));
  }();
  return node;
}

const std::string& empty_name() {
  static const std::string empty;
  return empty;
}

int kind_rank(Kind k) { return static_cast<int>(k); }

int compare_doubles(double a, double b) {
  if (a < b) return -1;
  if (a > b) return 1;
  return 0;
}

int compare_lists(std::span<const Expr> a, std::span<const Expr> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a[i], b[i]); c != 0) return c;
  }
  return compare_doubles(static_cast<double>(a.size()), static_cast<double>(b.size()));
}

bool constants_close(double a, double b, double rel_tol) {
  if (a == b) return true;
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= rel_tol * scale;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(double value) {
  if (value == 0.0) {
    node_ = zero_node();  // also folds -0.0
    return;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  n->canonical = true;
  node_ = std::move(n);
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::symbol(std::string name) {
  Node n;
  n.kind = Kind::symbol;
  n.name = std::move(name);
  n.canonical = true;
  return ExprFactory::make(std::move(n));
}

Expr Expr::apply(std::string function, std::vector<Expr> args) {
  Node n;
  n.kind = Kind::apply;
  n.name = std::move(function);
  n.children = std::move(args);
  n.canonical = std::all_of(n.children.begin(), n.children.end(), ExprFactory::canonical);
  return ExprFactory::make(std::move(n));
}

Expr Expr::derivative(std::string function, std::vector<int> indices,
                      std::vector<Expr> args) {
  std::sort(indices.begin(), indices.end());
  Node n;
  n.kind = Kind::derivative;
  n.name = std::move(function);
  n.children = std::move(args);
  n.indices = std::move(indices);
  n.canonical = std::all_of(n.children.begin(), n.children.end(), ExprFactory::canonical);
  return ExprFactory::make(std::move(n));
}

Kind Expr::kind() const noexcept { return node_->kind; }

bool Expr::is_constant(double v) const noexcept {
  return node_->kind == Kind::constant && node_->value == v;
}

bool Expr::is_symbol(std::string_view name) const noexcept {
  return node_->kind == Kind::symbol && node_->name == name;
}

double Expr::value() const noexcept {
  return node_->kind == Kind::constant ? node_->value : 0.0;
}

const std::string& Expr::name() const noexcept {
  switch (node_->kind) {
    case Kind::symbol:
    case Kind::apply:
    case Kind::derivative:
      return node_->name;
    default:
      return empty_name();
  }
}

std::span<const Expr> Expr::children() const noexcept { return node_->children; }

std::span<const int> Expr::indices() const noexcept { return node_->indices; }

int compare(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return 0;
  if (a.kind() != b.kind()) return kind_rank(a.kind()) < kind_rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::constant:
      return compare_doubles(a.value(), b.value());
    case Kind::symbol:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::apply:
    case Kind::derivative: {
      if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
      auto ia = a.indices();
      auto ib = b.indices();
      if (!std::equal(ia.begin(), ia.end(), ib.begin(), ib.end())) {
        return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end()) ? -1
                                                                                          : 1;
      }
      return compare_lists(a.children(), b.children());
    }
    default:
      return compare_lists(a.children(), b.children());
  }
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

bool structurally_equal(const Expr& a, const Expr& b, double rel_tol) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::constant:
      return constants_close(a.value(), b.value(), rel_tol);
    case Kind::symbol:
      return a.name() == b.name();
    default:
      break;
  }
  if (a.name() != b.name()) return false;
  auto ia = a.indices();
  auto ib = b.indices();
  if (!std::equal(ia.begin(), ia.end(), ib.begin(), ib.end())) return false;
  auto ca = a.children();
  auto cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!structurally_equal(ca[i], cb[i], rel_tol)) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

namespace raw {

Expr sum(std::vector<Expr> terms) {
  return ExprFactory::make(Kind::sum, std::move(terms), false);
}

Expr product(std::vector<Expr> factors) {
  return ExprFactory::make(Kind::product, std::move(factors), false);
}

Expr power(Expr base, Expr exponent) {
  return ExprFactory::make(Kind::power, {std::move(base), std::move(exponent)}, false);
}

Expr negate(Expr arg) { return ExprFactory::make(Kind::negation, {std::move(arg)}, false); }

Expr sqrt(Expr arg) { return ExprFactory::make(Kind::sqrt, {std::move(arg)}, false); }

}  // namespace raw

namespace {

void collect_symbols(const Expr& e, SymbolSet& out) {
  if (e.kind() == Kind::symbol) {
    out.insert(e.name());
    return;
  }
  for (const Expr& c : e.children()) collect_symbols(c, out);
}

void collect_functions(const Expr& e, std::map<std::string, std::size_t, std::less<>>& out) {
  if (e.kind() == Kind::apply || e.kind() == Kind::derivative) {
    out.emplace(e.name(), e.children().size());
  }
  for (const Expr& c : e.children()) collect_functions(c, out);
}

void collect_root_symbols(const Expr& e, SymbolSet& out) {
  if (e.kind() == Kind::sqrt) {
    collect_symbols(e.children()[0], out);
    return;
  }
  if (e.kind() == Kind::power) {
    const Expr& exponent = e.children()[1];
    if (!exponent.is_constant() || !canon::is_integer(exponent.value())) {
      collect_symbols(e.children()[0], out);
    }
  }
  for (const Expr& c : e.children()) collect_root_symbols(c, out);
}

}  // namespace

SymbolSet free_symbols(const Expr& e) {
  SymbolSet out;
  collect_symbols(e, out);
  return out;
}

std::map<std::string, std::size_t, std::less<>> functions_used(const Expr& e) {
  std::map<std::string, std::size_t, std::less<>> out;
  collect_functions(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view symbol) {
  if (e.kind() == Kind::symbol) return e.name() == symbol;
  for (const Expr& c : e.children()) {
    if (depends_on(c, symbol)) return true;
  }
  return false;
}

SymbolSet symbols_under_root(const Expr& e) {
  SymbolSet out;
  collect_root_symbols(e, out);
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const Expr& c : e.children()) n += node_count(c);
  return n;
}

}  // namespace hjdyn

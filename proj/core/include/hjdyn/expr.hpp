#pragma once

// Symbolic expressions over real scalars.
//
// An Expr is an immutable, reference-counted tree. Every Expr produced by the
// public constructors and arithmetic operators is in canonical form:
//
//   * sums and products are flattened and their children sorted;
//   * like terms are collected (2*x + 3*x -> 5*x) and like factors merged
//     (x * x^-1 -> 1);
//   * products are distributed over sums, small integer powers of sums are
//     expanded;
//   * constants are folded, x^0 -> 1, x^1 -> x, x*0 -> 0;
//   * negation and division do not appear: -a is (-1)*a and a/b is a*b^-1.
//
// The `raw` namespace builds trees without canonicalization; `simplify`
// turns any tree into canonical form.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hjdyn {

enum class Kind : std::uint8_t {
  constant,
  symbol,
  apply,       // named function of one or more arguments, e.g. V(q)
  derivative,  // partial derivative of a named function, printed d[V,0](q)
  sqrt,
  power,
  product,
  sum,
  negation,  // only in raw trees
};

class Expr {
 public:
  /// The constant 0.
  Expr();
  Expr(double value);  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<double>(value)) {}  // NOLINT

  static Expr symbol(std::string name);
  static Expr apply(std::string function, std::vector<Expr> args);
  /// Partial derivative of `function` w.r.t. the listed argument positions
  /// (a multiset; {0, 0} is the second derivative in the first argument).
  static Expr derivative(std::string function, std::vector<int> indices,
                         std::vector<Expr> args);

  Kind kind() const noexcept;
  bool is_constant() const noexcept { return kind() == Kind::constant; }
  bool is_constant(double v) const noexcept;
  bool is_zero() const noexcept { return is_constant(0.0); }
  bool is_symbol() const noexcept { return kind() == Kind::symbol; }
  bool is_symbol(std::string_view name) const noexcept;

  /// Value of a constant node; 0 for every other kind.
  double value() const noexcept;
  /// Symbol name, or function name for apply/derivative nodes.
  const std::string& name() const noexcept;
  /// Operands; for apply/derivative nodes these are the call arguments.
  std::span<const Expr> children() const noexcept;
  /// Argument multi-index of a derivative node.
  std::span<const int> indices() const noexcept;

  /// Canonical textual form; parse(str()) reproduces the tree.
  std::string str() const;

  /// Identity of the underlying node (cheap pointer test, not structural).
  bool same_node(const Expr& other) const noexcept { return node_ == other.node_; }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend struct ExprFactory;
};

/// Total structural order. compare(a, b) == 0 iff a and b are identical trees.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

/// Structural equality where constant leaves may differ by `rel_tol`
/// (relative, with an absolute floor of rel_tol for values near zero).
bool structurally_equal(const Expr& a, const Expr& b, double rel_tol = 0.0);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Canonicalizing arithmetic.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr sqrt(const Expr& arg);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);

std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Non-canonical constructors (parser output, property tests).
namespace raw {
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr power(Expr base, Expr exponent);
Expr negate(Expr arg);
Expr sqrt(Expr arg);
}  // namespace raw

/// Facts the simplifier may rely on beyond canonicalization.
struct Assumptions {
  /// Symbols known to be strictly positive; enables sqrt(x^2) -> x.
  std::set<std::string, std::less<>> positive;
};

/// Canonical form of `e` under `assumptions`. Idempotent.
Expr simplify(const Expr& e, const Assumptions& assumptions = {});

/// Exact partial derivative. Applications of named functions produce
/// formal derivative nodes. Throws AnalysisError when the symbol appears in
/// a non-constant exponent (no logarithm node exists).
Expr differentiate(const Expr& e, std::string_view symbol);

/// Replaces symbols by expressions; the result is canonical.
Expr substitute(const Expr& e, const std::map<std::string, Expr, std::less<>>& replacements);

/// Concrete body for a named function.
///
/// With `params` empty the body is written directly in the symbols used at
/// the call sites (e.g. A0 = -q1 for A0(q0,q1,q2,q3)); every call must then
/// pass plain symbols.
struct FunctionDef {
  std::vector<std::string> params;
  Expr body;
};
using FunctionTable = std::map<std::string, FunctionDef, std::less<>>;

/// Replaces applications (and derivative nodes) of functions found in
/// `table` by their bodies. Other functions stay opaque.
Expr substitute_functions(const Expr& e, const FunctionTable& table);

using SymbolSet = std::set<std::string, std::less<>>;

SymbolSet free_symbols(const Expr& e);
/// Function names with their arity.
std::map<std::string, std::size_t, std::less<>> functions_used(const Expr& e);
bool depends_on(const Expr& e, std::string_view symbol);
/// Symbols occurring inside a sqrt argument or the base of a non-integer power.
SymbolSet symbols_under_root(const Expr& e);
std::size_t node_count(const Expr& e);

using Bindings = std::map<std::string, double, std::less<>>;

/// IEEE double evaluation. Throws EvalError on an unbound symbol, an opaque
/// function, a sqrt of a negative value or a non-finite result.
double evaluate(const Expr& e, const Bindings& bindings);

/// As above, with calls to functions in `functions` evaluated through their
/// bodies instead of being expanded symbolically.
double evaluate(const Expr& e, const Bindings& bindings, const FunctionTable& functions);

/// Parses the expression DSL:
///
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := ('-'|'+') unary | power
///   power := base ('^' unary)?
///   base  := number | symbol | func '(' expr (',' expr)* ')' | '(' expr ')'
///          | 'sqrt' '(' expr ')' | 'd[' func (',' int)+ ']' '(' args ')'
///
/// `functions` lists the user-declared function names; any other identifier
/// followed by '(' is rejected. The result is canonical.
Expr parse(std::string_view text, const SymbolSet& functions = {});

}  // namespace hjdyn

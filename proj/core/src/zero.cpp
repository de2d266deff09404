#include "hjdyn/zero.hpp"

#include <algorithm>
#include <cmath>

#include "hjdyn/error.hpp"

namespace hjdyn {

Sampler::Sampler(SamplerConfig config) : config_(std::move(config)), rng_(config_.seed) {}

Interval Sampler::range_of(std::string_view symbol, const SymbolSet& under_root) const {
  if (auto it = config_.ranges.find(symbol); it != config_.ranges.end()) return it->second;
  if (config_.positive.count(symbol) > 0) return {0.5, 2.0};
  if (under_root.count(symbol) > 0) return {0.1, 2.0};
  return {-1.0, 1.0};
}

Bindings Sampler::draw(const SymbolSet& symbols, const SymbolSet& under_root) {
  Bindings b;
  for (const std::string& s : symbols) {
    const Interval r = range_of(s, under_root);
    std::uniform_real_distribution<double> dist(r.lo, r.hi);
    b.emplace(s, dist(rng_));
  }
  return b;
}

FunctionTable Sampler::realize(const std::map<std::string, std::size_t, std::less<>>& functions) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  FunctionTable table;
  for (const auto& [name, arity] : functions) {
    FunctionDef def;
    std::vector<Expr> xs;
    for (std::size_t i = 0; i < arity; ++i) {
      def.params.push_back("__x" + std::to_string(i));
      xs.push_back(Expr::symbol(def.params.back()));
    }
    std::vector<Expr> terms{Expr(coef(rng_))};
    for (std::size_t i = 0; i < arity; ++i) {
      terms.push_back(Expr(coef(rng_)) * xs[i]);
      for (std::size_t j = i; j < arity; ++j) terms.push_back(Expr(coef(rng_)) * xs[i] * xs[j]);
    }
    def.body = sum(std::move(terms));
    table.emplace(name, std::move(def));
  }
  return table;
}

std::string ZeroVerdict::tag() const {
  switch (kind) {
    case ZeroKind::symbolic:
      return "symbolically-zero";
    case ZeroKind::numeric:
      return "numerically-zero";
    case ZeroKind::nonzero:
      return "nonzero";
  }
  return "nonzero";
}

ZeroVerdict is_zero(const Expr& e, const ZeroTestOptions& options) {
  const Expr s = simplify(e, Assumptions{options.sampler.positive});
  ZeroVerdict v;
  if (s.is_zero()) return v;

  const auto functions = functions_used(s);
  const SymbolSet symbols = free_symbols(s);
  const SymbolSet roots = symbols_under_root(s);
  Sampler sampler(options.sampler);
  double worst = 0.0;
  int probes = 0;
  for (int i = 0; i < options.probes; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < options.max_retries && !done; ++attempt) {
      const FunctionTable bodies = sampler.realize(functions);
      Bindings b = sampler.draw(symbols, roots);
      double value = 0.0;
      try {
        value = evaluate(s, b, bodies);
      } catch (const EvalError&) {
        continue;
      }
      done = true;
      ++probes;
      if (std::abs(value) >= options.tolerance) {
        v.kind = ZeroKind::nonzero;
        v.probes = probes;
        v.residual = std::abs(value);
        v.witness = std::move(b);
        return v;
      }
      worst = std::max(worst, std::abs(value));
    }
    if (!done) {
      throw EvalError("no valid sample point found for " + s.str() + " after " +
                      std::to_string(options.max_retries) + " attempts");
    }
  }
  v.kind = ZeroKind::numeric;
  v.probes = probes;
  v.residual = worst;
  return v;
}

}  // namespace hjdyn

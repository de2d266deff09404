#include "hjdyn/hjpde.hpp"

#include <algorithm>

#include "hjdyn/error.hpp"

namespace hjdyn {

std::vector<std::string> PhaseSpace::slots() const {
  std::vector<std::string> out;
  out.reserve(2 * pairs.size());
  for (const ConjugatePair& pr : pairs) out.push_back(pr.q);
  for (const ConjugatePair& pr : pairs) out.push_back(pr.p);
  return out;
}

SymbolSet PhaseSpace::symbols() const {
  SymbolSet out;
  for (const ConjugatePair& pr : pairs) {
    out.insert(pr.q);
    out.insert(pr.p);
  }
  return out;
}

const ConjugatePair* PhaseSpace::find(std::string_view name) const {
  for (const ConjugatePair& pr : pairs) {
    if (pr.q == name || pr.p == name) return &pr;
  }
  return nullptr;
}

const Constraint* HJPDESet::find(std::string_view label) const {
  for (const Constraint& c : constraints) {
    if (c.label == label) return &c;
  }
  return nullptr;
}

namespace {

ZeroTestOptions zero_options(const LagrangianSystem& sys, const AnalysisOptions& options) {
  ZeroTestOptions z = options.zero;
  z.sampler = sys.sampler(options.zero.sampler.seed);
  return z;
}

// H_alpha for each unsolved velocity. A template's closed form is preferred
// for readability but must agree with the generic substitution.
std::vector<Expr> constraint_hamiltonians(const LagrangianSystem& sys,
                                          const AnalysisOptions& options) {
  const ZeroTestOptions zero = zero_options(sys, options);
  const Assumptions assume{sys.positive};
  std::vector<Expr> out;
  for (std::size_t idx : sys.unsolved) {
    const Coordinate& c = sys.coordinates[idx];
    const Expr generic =
        simplify(-substitute(differentiate(sys.lagrangian, c.velocity), sys.solved), assume);
    auto it = sys.closed_forms.hamiltonians.find(c.velocity);
    if (it == sys.closed_forms.hamiltonians.end()) {
      out.push_back(generic);
      continue;
    }
    const ZeroVerdict v = is_zero(it->second - generic, zero);
    if (!v.zero()) {
      throw AnalysisError("closed form for " + c.label + " disagrees with the Lagrangian (residual " +
                          std::to_string(v.residual) + ")");
    }
    out.push_back(simplify(it->second, assume));
  }
  return out;
}

LagrangianSystem analyzed(const LagrangianSystem& sys, const AnalysisOptions& options) {
  if (sys.rank) return sys;
  return analyze_lagrangian(sys, options);
}

std::pair<Expr, ZeroVerdict> hamiltonian_from(const LagrangianSystem& sys,
                                              const std::vector<Expr>& h,
                                              const AnalysisOptions& options) {
  std::vector<Expr> terms;
  for (std::size_t a : sys.solvable) {
    const Coordinate& c = sys.coordinates[a];
    terms.push_back(Expr::symbol(c.momentum) * sys.solved.at(c.velocity));
  }
  for (std::size_t k = 0; k < sys.unsolved.size(); ++k) {
    const Coordinate& c = sys.coordinates[sys.unsolved[k]];
    terms.push_back(-h[k] * Expr::symbol(c.velocity));
  }
  terms.push_back(-substitute(sys.lagrangian, sys.solved));
  const Expr h0 = simplify(sum(std::move(terms)), Assumptions{sys.positive});
  return {h0, is_zero(h0, zero_options(sys, options))};
}

}  // namespace

std::pair<Expr, ZeroVerdict> canonical_hamiltonian(const LagrangianSystem& sys,
                                                   const AnalysisOptions& options) {
  if (!sys.rank) throw AnalysisError("canonical_hamiltonian needs an analyzed system");
  return hamiltonian_from(sys, constraint_hamiltonians(sys, options), options);
}

HJPDESet build_constraints(const LagrangianSystem& input, const AnalysisOptions& options) {
  HJPDESet set;
  set.system = analyzed(input, options);
  const LagrangianSystem& sys = set.system;
  set.zero = zero_options(sys, options);

  for (std::size_t i = 0; i < sys.coordinates.size(); ++i) {
    const Coordinate& c = sys.coordinates[i];
    const bool parameter = std::find(sys.unsolved.begin(), sys.unsolved.end(), i) != sys.unsolved.end();
    set.phase.pairs.push_back({c.name, c.momentum, parameter});
  }

  const std::vector<Expr> h = constraint_hamiltonians(sys, options);
  for (std::size_t k = 0; k < sys.unsolved.size(); ++k) {
    const Coordinate& c = sys.coordinates[sys.unsolved[k]];
    if (depends_on(h[k], c.momentum)) {
      throw AnalysisError("H_alpha for " + c.label + " depends on its own momentum");
    }
    Constraint con;
    con.label = c.label;
    con.hamiltonian = h[k];
    con.expression = Expr::symbol(c.momentum) + h[k];
    con.parameter = c.name;
    set.constraints.push_back(std::move(con));
  }

  auto [h0, verdict] = hamiltonian_from(sys, h, options);
  set.canonical_hamiltonian = std::move(h0);
  set.vanishing = std::move(verdict);
  return set;
}

}  // namespace hjdyn

#include "hjdyn/flow.hpp"

namespace hjdyn {

std::vector<Generator> flow_generators(const HJPDESet& set) {
  std::vector<Generator> out;
  for (const Constraint& c : set.constraints) {
    if (c.parameter.empty()) continue;
    out.push_back({c.parameter, c.expression, c.hamiltonian, false});
  }
  if (!set.vanishing.zero()) {
    out.push_back({kTau, set.canonical_hamiltonian, set.canonical_hamiltonian, true});
  }
  return out;
}

std::vector<Expr> hamiltonian_flow(const Expr& g, const PhaseSpace& phase) {
  std::vector<Expr> rates;
  rates.reserve(2 * phase.pairs.size());
  for (const ConjugatePair& pr : phase.pairs) rates.push_back(differentiate(g, pr.p));
  for (const ConjugatePair& pr : phase.pairs) rates.push_back(-differentiate(g, pr.q));
  return rates;
}

Expr action_rate(const Generator& g, const PhaseSpace& phase) {
  std::vector<Expr> terms{-g.hamiltonian};
  for (const ConjugatePair& pr : phase.pairs) {
    if (pr.parameter) continue;
    terms.push_back(Expr::symbol(pr.p) * differentiate(g.expression, pr.p));
  }
  return sum(std::move(terms));
}

}  // namespace hjdyn

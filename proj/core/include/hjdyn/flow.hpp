#pragma once

#include <string>
#include <vector>

#include "hjdyn/hjpde.hpp"

namespace hjdyn {

/// Name of the auxiliary parameter generated by the canonical Hamiltonian.
inline constexpr const char* kTau = "tau";

/// One Hamiltonian of the total differential equations together with the
/// parameter it moves.
struct Generator {
  std::string parameter;
  /// H'_alpha, or H_0 for the tau direction.
  Expr expression;
  /// H_alpha entering dZ = (-H_alpha + p_a dG/dp_a) dt_alpha.
  Expr hamiltonian;
  bool tau = false;
};

/// The primary constraints in order, then H_0 in the tau direction unless its
/// vanishing verdict is zero.
std::vector<Generator> flow_generators(const HJPDESet& set);

/// Phase-space velocity of generator `g`: dq = dg/dp, dp = -dg/dq for every
/// pair, in PhaseSpace::slots() order.
std::vector<Expr> hamiltonian_flow(const Expr& g, const PhaseSpace& phase);

/// Integrand of the canonical action along generator `g`.
Expr action_rate(const Generator& g, const PhaseSpace& phase);

}  // namespace hjdyn

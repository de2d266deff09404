#pragma once

#include <string>
#include <vector>

#include "hjdyn/legendre.hpp"
#include "hjdyn/zero.hpp"

namespace hjdyn {

/// A canonical pair of the extended phase space. Parameter pairs (t_alpha,
/// p_alpha) belong to unsolved velocities; the rest are dynamical (q_a, p_a).
struct ConjugatePair {
  std::string q;
  std::string p;
  bool parameter = false;
};

struct PhaseSpace {
  std::vector<ConjugatePair> pairs;

  /// q names then p names, pair order; the numeric state layout.
  std::vector<std::string> slots() const;
  SymbolSet symbols() const;
  const ConjugatePair* find(std::string_view name) const;
};

struct Constraint {
  std::string label;
  /// H'_alpha (for a primary constraint, p_alpha + H_alpha).
  Expr expression;
  /// H_alpha for primaries; empty for secondary constraints.
  Expr hamiltonian;
  /// Coordinate t_alpha whose momentum the constraint fixes; empty for secondaries.
  std::string parameter;
  /// 0 for primary constraints, k for those appended by the k-th consistency pass.
  int generation = 0;
};

struct HJPDESet {
  LagrangianSystem system;
  PhaseSpace phase;
  std::vector<Constraint> constraints;
  /// H_0; generator of the flow in the auxiliary parameter tau.
  Expr canonical_hamiltonian;
  ZeroVerdict vanishing;

  /// Zero-test options with the system's sampling ranges folded in.
  ZeroTestOptions zero;

  const Constraint* find(std::string_view label) const;
};

/// Builds the primary constraints H'_alpha = p_alpha + H_alpha with
/// H_alpha = -p_alpha evaluated at the solved velocities, and the canonical
/// Hamiltonian with its vanishing verdict. Runs the velocity analysis first
/// if `sys` has not been analyzed.
HJPDESet build_constraints(const LagrangianSystem& sys, const AnalysisOptions& options = {});

/// H_0 = p_a w_a + p_mu qdot_mu |_{p_mu = -H_mu} - L|_w, simplified, with
/// its zero verdict. `sys` must be analyzed.
std::pair<Expr, ZeroVerdict> canonical_hamiltonian(const LagrangianSystem& sys,
                                                   const AnalysisOptions& options = {});

}  // namespace hjdyn

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjdyn/expr.hpp"
#include "hjdyn/zero.hpp"

namespace hjdyn {

/// One generalized coordinate with the names of its velocity and momentum
/// symbols and the label given to its constraint if its velocity cannot be
/// solved for.
struct Coordinate {
  std::string name;
  std::string velocity;
  std::string momentum;
  std::string label;
};

/// Builds a coordinate with the default naming: velocity `<q>dot`, momentum
/// `p_<q>`, label `H'_<q>`.
Coordinate make_coordinate(std::string name);

/// Closed forms a template may supply where generic inversion cannot work.
struct ClosedForms {
  /// Solved velocities w in terms of (q, p_a, unsolved velocities).
  std::map<std::string, Expr, std::less<>> velocities;
  /// H_alpha per unsolved velocity symbol, so that H'_alpha = p_alpha + H_alpha.
  std::map<std::string, Expr, std::less<>> hamiltonians;
};

struct LagrangianSystem {
  std::string id = "custom";
  std::vector<Coordinate> coordinates;
  Expr lagrangian;
  /// Symbols known to be strictly positive (e.g. tdot, m, c).
  SymbolSet positive;
  /// Constant symbols such as m, c, e.
  SymbolSet parameters;
  /// Declared opaque function names.
  SymbolSet functions;
  /// Concrete bodies for some of `functions`, used at simulation time.
  FunctionTable definitions;
  /// Numeric values of `parameters` for simulation; missing ones default to 1.
  Bindings parameter_values;
  /// Sampling ranges overriding the defaults for zero tests.
  RangeMap ranges;
  ClosedForms closed_forms;

  /// Filled by analysis.
  std::optional<int> rank;
  /// Indices into `coordinates` whose velocities were solved for.
  std::vector<std::size_t> solvable;
  /// Indices whose velocities stay free (one constraint each).
  std::vector<std::size_t> unsolved;
  std::map<std::string, Expr, std::less<>> solved;

  std::vector<std::string> velocity_names() const;
  std::vector<std::string> momentum_names() const;
  SamplerConfig sampler(std::uint64_t seed) const;
};

struct AnalysisOptions {
  ZeroTestOptions zero;
  int rank_samples = 5;
  double rank_threshold = 1e-9;
};

/// p_mu = dL/d(qdot_mu), simplified; one per coordinate, keyed by momentum name.
std::vector<std::pair<std::string, Expr>> conjugate_momenta(const LagrangianSystem& sys);

struct HessianReport {
  std::vector<std::vector<Expr>> matrix;
  int rank = 0;
  std::vector<Bindings> samples;
  /// Numeric Hessian at each sample, row-major.
  std::vector<std::vector<std::vector<double>>> values;
  /// Orthonormal null-space basis at the first sample.
  std::vector<std::vector<double>> null_directions;
};

/// Second derivatives of L in the velocities and their numeric rank.
/// Throws AnalysisError if the rank differs between sample points.
HessianReport hessian(const LagrangianSystem& sys, const AnalysisOptions& options = {});

/// Numeric rank of a sub-block of the Hessian, consistent over all samples.
int numeric_rank(const HessianReport& report, const std::vector<std::size_t>& indices,
                 const AnalysisOptions& options = {});

/// Chooses the solvable velocities, solves the momentum definitions for them
/// and stores the result in `sys` (rank, solvable, unsolved, solved).
/// Throws AnalysisError when the momenta are not affine in the solvable
/// velocities and no closed form is supplied.
void solve_velocities(LagrangianSystem& sys, const AnalysisOptions& options = {});

/// Runs hessian + solve_velocities.
LagrangianSystem analyze_lagrangian(LagrangianSystem sys, const AnalysisOptions& options = {});

/// Time parametrization of a regular system: coordinates (t, q_i), velocities
/// (tdot, q_i prime), L = tdot * Lreg(q, qprime/tdot). Throws AnalysisError
/// if the input is singular or already uses the symbols t or tdot.
LagrangianSystem parametrize(const LagrangianSystem& regular, const AnalysisOptions& options = {});

}  // namespace hjdyn

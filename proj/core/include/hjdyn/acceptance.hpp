#pragma once

#include <string>
#include <vector>

#include "hjdyn/legendre.hpp"

namespace hjdyn {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  /// Measured quantities, or the error that stopped the check.
  std::string detail;
};

struct AcceptanceOptions {
  AnalysisOptions analysis;
  /// Bound on |H'| along trajectories.
  double surface_tol = 1e-8;
};

/// Runs the ten end-to-end checks in order.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// Runs a single check (1..10). Throws ConfigError for another id.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

}  // namespace hjdyn

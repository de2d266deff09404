#pragma once

#include <map>
#include <string>
#include <vector>

#include "hjdyn/flow.hpp"
#include "hjdyn/hjpde.hpp"

namespace hjdyn {

/// {A, B} = sum over all pairs of dA/dq dB/dp - dA/dp dB/dq, simplified.
Expr poisson_bracket(const Expr& a, const Expr& b, const PhaseSpace& phase);

/// Substitution rules that put an expression on the constraint surface.
/// Each constraint affine in some phase variable with a constant coefficient
/// is solved for that variable (p_alpha first for primary constraints).
class ConstraintSurface {
 public:
  ConstraintSurface() = default;
  ConstraintSurface(const std::vector<Constraint>& constraints, const PhaseSpace& phase);

  Expr project(const Expr& e) const;
  const std::map<std::string, Expr, std::less<>>& rules() const { return rules_; }

 private:
  std::map<std::string, Expr, std::less<>> rules_;
};

/// dH' of one constraint along every generator, coefficients projected onto
/// the surface and zero-tested.
struct Variation {
  std::string label;
  std::vector<std::string> parameters;
  std::vector<Expr> coefficients;
  std::vector<ZeroVerdict> verdicts;

  bool zero() const;
  /// sum of coefficient * d<parameter>.
  Expr total() const;
};

Variation variation(const HJPDESet& set, const Constraint& c, const ConstraintSurface& surface);

/// dH'_alpha for the constraint with the given label, as a sum of
/// coefficient * d<parameter>. Throws AnalysisError on an unknown label.
Expr total_variation(const HJPDESet& set, std::string_view label);

enum class ClassTag { first_class, second_class, undetermined };
std::string to_string(ClassTag tag);

struct PairClassification {
  std::string a;
  std::string b;
  Expr bracket;
  ClassTag tag = ClassTag::undetermined;
};

struct Classification {
  std::vector<PairClassification> pairs;
  /// Per constraint: second-class if some bracket with it is a nonzero
  /// constant, undetermined if some bracket is neither, else first-class.
  std::vector<std::pair<std::string, ClassTag>> constraints;
};

Classification classify(const HJPDESet& set);

struct IntegrabilityReport {
  /// The final constraint set, secondaries appended.
  HJPDESet set;
  /// Variations of every constraint in the final pass.
  std::vector<Variation> variations;
  /// Labels introduced by each pass; generations[0] are the primaries.
  std::vector<std::vector<std::string>> generations;
  /// Nonvanishing variations along constraint parameters; these fix
  /// relations among the dt_alpha rather than adding constraints.
  std::vector<Expr> relations;
  Classification classification;
  /// True iff every variation in the final pass is weakly zero.
  bool integrable = false;
};

/// Appends nonvanishing tau-coefficients of the variations as new
/// constraints until nothing new appears. Throws ContradictionError on a
/// nonzero constant constraint and AnalysisError past 2 x (number of pairs)
/// passes.
IntegrabilityReport consistency_iterate(const HJPDESet& set);

}  // namespace hjdyn

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hjdyn/compiled.hpp"
#include "hjdyn/flow.hpp"
#include "hjdyn/integrability.hpp"

namespace hjdyn {

/// Symbolic right-hand sides of the total differential equations:
/// d(slot) = sum over generators of rates[g][slot] dt_g, and likewise dZ.
struct EquationsOfMotion {
  std::string system;
  PhaseSpace phase;
  std::vector<Generator> generators;
  std::vector<std::vector<Expr>> rates;
  std::vector<Expr> action_rates;
  /// Every constraint H'; their values measure the distance from the surface.
  std::vector<Constraint> constraints;
  /// Concrete function bodies and constants applied before numerics.
  FunctionTable definitions;
  Bindings parameter_values;

  std::vector<std::string> slots() const { return phase.slots(); }
  std::size_t generator_index(std::string_view parameter) const;
  /// Right-hand side for `slot` along the named parameter.
  const Expr& rate(std::string_view parameter, std::string_view slot) const;
};

/// Builds the equations from an integrable constraint set. Throws
/// AnalysisError if the consistency iteration reports the set non-integrable.
EquationsOfMotion derive_eom(const HJPDESet& set);

struct PhaseState {
  /// Value of the evolution parameter.
  double parameter = 0.0;
  /// Phase-space values in EquationsOfMotion::slots() order.
  std::vector<double> values;
  double action = 0.0;
};

struct Trajectory {
  std::string system;
  std::string parameter;
  std::vector<std::string> slots;
  double step = 0.0;
  std::vector<PhaseState> samples;
  /// max |H'| at each sample.
  std::vector<double> residuals;
  double max_residual = 0.0;
  /// Set when some sample is farther than surface_tol from the surface.
  bool surface_violated = false;
};

struct IntegrateOptions {
  double start = 0.0;
  double end = 1.0;
  double step = 1e-3;
  /// Generator parameter to evolve along; empty picks the first generator.
  std::string parameter;
  double surface_tol = 1e-8;
  /// Keep every n-th step (the last step is always kept).
  std::size_t record_every = 1;
};

/// Numeric form of the equations with definitions and constants applied.
class CompiledFlow {
 public:
  CompiledFlow(const EquationsOfMotion& eom, std::string_view parameter);

  std::size_t size() const { return rates_.size(); }
  /// Writes d(values)/ds and dZ/ds into `out` (size()+1 entries) for unit
  /// parameter speed.
  void operator()(std::span<const double> values, std::span<double> out) const;
  /// max |H'| at the point.
  double residual(std::span<const double> values) const;
  /// Slot holding the evolution parameter, or npos for the tau direction.
  std::size_t parameter_slot() const { return parameter_slot_; }

 private:
  std::vector<CompiledExpr> rates_;
  CompiledExpr action_;
  std::vector<CompiledExpr> constraints_;
  std::size_t parameter_slot_ = static_cast<std::size_t>(-1);
};

/// Expressions with definitions and parameter values substituted.
Expr concretize(const Expr& e, const EquationsOfMotion& eom);

/// Starting point on the surface: named values from `given` (missing ones
/// are 0), the evolution parameter set to `start`, and every constrained
/// momentum set to -H_alpha.
PhaseState initial_state(const EquationsOfMotion& eom, const Bindings& given, double start,
                         std::string_view parameter = {});

/// Fixed-step RK4 from options.start to options.end with the step shrunk to
/// divide the span evenly. Throws ConfigError on a bad step and EvalError on
/// a non-finite right-hand side.
Trajectory integrate(const EquationsOfMotion& eom, const PhaseState& initial,
                     const IntegrateOptions& options);

/// Accumulated canonical action at the end of the trajectory.
double action_along(const Trajectory& trajectory);

/// A physical-time parametrization t = f(tau).
struct Reparametrization {
  std::string name;
  /// Expression in the symbol "tau".
  Expr f;
};

struct GaugeReport {
  std::vector<std::string> names;
  std::vector<double> grid;
  /// [parametrization][grid point][dynamical slot]
  std::vector<std::vector<std::vector<double>>> resampled;
  std::vector<std::string> compared;
  /// Largest difference from the first parametrization.
  double max_deviation = 0.0;
};

/// Integrates in tau under each parametrization, resamples the dynamical
/// variables onto a common uniform grid in the physical parameter and
/// compares. Throws ConfigError if some f is not strictly increasing.
GaugeReport gauge_independence_check(const EquationsOfMotion& eom, const Bindings& initial,
                                     const IntegrateOptions& options,
                                     const std::vector<Reparametrization>& parametrizations,
                                     std::size_t grid_points = 1001);

}  // namespace hjdyn

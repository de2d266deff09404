#include "hjdyn/eom.hpp"

#include <algorithm>
#include <cmath>

#include "hjdyn/error.hpp"
#include "rk4.hpp"

namespace hjdyn {

std::size_t EquationsOfMotion::generator_index(std::string_view parameter) const {
  if (generators.empty()) throw ConfigError("system has no evolution generator");
  if (parameter.empty()) return 0;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].parameter == parameter) return i;
  }
  throw ConfigError("no generator moves the parameter " + std::string(parameter));
}

const Expr& EquationsOfMotion::rate(std::string_view parameter, std::string_view slot) const {
  const std::size_t g = generator_index(parameter);
  const auto names = slots();
  auto it = std::find(names.begin(), names.end(), slot);
  if (it == names.end()) throw ConfigError("unknown phase variable " + std::string(slot));
  return rates[g][static_cast<std::size_t>(it - names.begin())];
}

EquationsOfMotion derive_eom(const HJPDESet& set) {
  const IntegrabilityReport report = consistency_iterate(set);
  if (!report.integrable) {
    throw AnalysisError("the total differential equations are not integrable for " +
                        set.system.id);
  }
  EquationsOfMotion eom;
  eom.system = set.system.id;
  eom.phase = report.set.phase;
  eom.generators = flow_generators(report.set);
  for (const Generator& g : eom.generators) {
    eom.rates.push_back(hamiltonian_flow(g.expression, eom.phase));
    eom.action_rates.push_back(action_rate(g, eom.phase));
  }
  eom.constraints = report.set.constraints;
  eom.definitions = set.system.definitions;
  eom.parameter_values = set.system.parameter_values;
  for (const std::string& p : set.system.parameters) eom.parameter_values.emplace(p, 1.0);
  return eom;
}

Expr concretize(const Expr& e, const EquationsOfMotion& eom) {
  std::map<std::string, Expr, std::less<>> values;
  for (const auto& [k, v] : eom.parameter_values) values.emplace(k, Expr(v));
  return substitute(substitute_functions(e, eom.definitions), values);
}

namespace {

CompiledExpr compile(const Expr& e, const EquationsOfMotion& eom,
                     const std::vector<std::string>& slots) {
  const Expr c = concretize(e, eom);
  try {
    return CompiledExpr(c, slots);
  } catch (const EvalError& err) {
    throw ConfigError(std::string(err.what()) + " in " + c.str() +
                      " (define the function or bind the symbol)");
  }
}

}  // namespace

CompiledFlow::CompiledFlow(const EquationsOfMotion& eom, std::string_view parameter) {
  const std::size_t g = eom.generator_index(parameter);
  const std::vector<std::string> slots = eom.slots();
  for (const Expr& r : eom.rates[g]) rates_.push_back(compile(r, eom, slots));
  action_ = compile(eom.action_rates[g], eom, slots);
  for (const Constraint& c : eom.constraints) constraints_.push_back(compile(c.expression, eom, slots));
  auto it = std::find(slots.begin(), slots.end(), eom.generators[g].parameter);
  if (it != slots.end()) parameter_slot_ = static_cast<std::size_t>(it - slots.begin());
}

void CompiledFlow::operator()(std::span<const double> values, std::span<double> out) const {
  for (std::size_t i = 0; i < rates_.size(); ++i) out[i] = rates_[i](values);
  out[rates_.size()] = action_(values);
}

double CompiledFlow::residual(std::span<const double> values) const {
  double r = 0.0;
  for (const CompiledExpr& c : constraints_) r = std::max(r, std::abs(c(values)));
  return r;
}

PhaseState initial_state(const EquationsOfMotion& eom, const Bindings& given, double start,
                         std::string_view parameter) {
  const std::vector<std::string> slots = eom.slots();
  PhaseState st;
  st.parameter = start;
  st.values.assign(slots.size(), 0.0);
  for (const auto& [name, value] : given) {
    auto it = std::find(slots.begin(), slots.end(), name);
    if (it == slots.end()) throw ConfigError("unknown phase variable '" + name + "'");
    st.values[static_cast<std::size_t>(it - slots.begin())] = value;
  }
  if (!eom.generators.empty()) {
    const std::string& p = eom.generators[eom.generator_index(parameter)].parameter;
    auto it = std::find(slots.begin(), slots.end(), p);
    if (it != slots.end()) st.values[static_cast<std::size_t>(it - slots.begin())] = start;
  }
  for (const Constraint& c : eom.constraints) {
    if (c.parameter.empty()) continue;
    const ConjugatePair* pr = eom.phase.find(c.parameter);
    auto it = std::find(slots.begin(), slots.end(), pr->p);
    const double h = compile(c.hamiltonian, eom, slots)(st.values);
    if (!std::isfinite(h)) throw EvalError("initial point is outside the domain of " + c.label);
    st.values[static_cast<std::size_t>(it - slots.begin())] = -h;
  }
  return st;
}

std::size_t step_count(double span, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("step must be positive");
  if (!(span >= 0.0) || !std::isfinite(span)) throw ConfigError("integration span must be ascending");
  if (span == 0.0) return 0;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(span / step * (1.0 - 1e-12))));
}

Trajectory integrate(const EquationsOfMotion& eom, const PhaseState& initial,
                     const IntegrateOptions& options) {
  const CompiledFlow flow(eom, options.parameter);
  const std::size_t n = step_count(options.end - options.start, options.step);
  Trajectory traj;
  traj.system = eom.system;
  traj.parameter = eom.generators[eom.generator_index(options.parameter)].parameter;
  traj.slots = eom.slots();
  traj.step = n == 0 ? options.step : (options.end - options.start) / static_cast<double>(n);

  auto record = [&](const PhaseState& st) {
    const double r = flow.residual(st.values);
    traj.residuals.push_back(r);
    traj.max_residual = std::max(traj.max_residual, r);
    if (!(r < options.surface_tol)) traj.surface_violated = true;
    traj.samples.push_back(st);
  };

  PhaseState start = initial;
  start.parameter = options.start;
  if (flow.parameter_slot() < start.values.size()) start.values[flow.parameter_slot()] = options.start;
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  record(start);
  detail::run_rk4(
      flow, start, options.start, options.end, n, [](double s) { return s; },
      [](double) { return 1.0; },
      [&](std::size_t k, const PhaseState& st) {
        if (k % every == 0 || k == n) record(st);
      });
  return traj;
}

double action_along(const Trajectory& trajectory) {
  return trajectory.samples.empty() ? 0.0 : trajectory.samples.back().action;
}

}  // namespace hjdyn

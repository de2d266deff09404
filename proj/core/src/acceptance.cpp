#include "hjdyn/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "hjdyn/eom.hpp"
#include "hjdyn/error.hpp"
#include "hjdyn/integrability.hpp"
#include "hjdyn/quantize.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

namespace hjdyn {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Accumulates sub-checks; the criterion passes when all of them do.
class Checks {
 public:
  void below(const std::string& what, double value, double bound) {
    add(what + " " + num(value) + " < " + num(bound), value < bound);
  }
  void holds(const std::string& what, bool ok) { add(what, ok); }

  CriterionResult result(int id, std::string name) const {
    return {id, std::move(name), pass_, detail_};
  }

 private:
  void add(const std::string& text, bool ok) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += ok ? text : "FAILED " + text;
    pass_ = pass_ && ok;
  }
  bool pass_ = true;
  std::string detail_;
};

const Constraint& constraint(const HJPDESet& set, std::string_view label) {
  const Constraint* c = set.find(label);
  if (!c) throw AnalysisError("missing constraint " + std::string(label));
  return *c;
}

std::size_t slot(const EquationsOfMotion& eom, std::string_view name) {
  const auto slots = eom.slots();
  auto it = std::find(slots.begin(), slots.end(), name);
  if (it == slots.end()) throw ConfigError("missing slot " + std::string(name));
  return static_cast<std::size_t>(it - slots.begin());
}

EquationsOfMotion oscillator(const AcceptanceOptions& o) {
  return derive_eom(build_constraints(instantiate("parametrized_oscillator"), o.analysis));
}

Checks vanishing_hamiltonian(const AcceptanceOptions& o) {
  Checks ch;
  for (const std::string& id : template_ids()) {
    const HJPDESet set = build_constraints(instantiate(id), o.analysis);
    const bool exact = id.rfind("parametrized_", 0) == 0;
    const bool ok = exact ? set.vanishing.kind == ZeroKind::symbolic : set.vanishing.zero();
    ch.holds(id + " H0 " + set.vanishing.tag() +
                 (set.vanishing.kind == ZeroKind::numeric ? " (residual " + num(set.vanishing.residual) + ")"
                                                           : ""),
             ok);
  }
  return ch;
}

Checks constraint_forms(const AcceptanceOptions& o) {
  Checks ch;
  {
    const HJPDESet set = build_constraints(instantiate("parametrized_oscillator"), o.analysis);
    const Assumptions a{set.system.positive};
    const Expr expected = parse("p_t + 1/2*p_q^2 + V(q)", {"V"});
    const Expr& got = constraint(set, "H'_t").expression;
    ch.holds("H'_t = " + got.str(), structurally_equal(simplify(expected, a), simplify(got, a)));
  }
  {
    const HJPDESet set = build_constraints(instantiate("relativistic_charged"), o.analysis);
    const Assumptions a{set.system.positive};
    const Expr expected = parse(
        "p0 + sqrt((p1 + e/c*A1(q0, q1, q2, q3))^2 + (p2 + e/c*A2(q0, q1, q2, q3))^2"
        " + (p3 + e/c*A3(q0, q1, q2, q3))^2 + m^2*c^2) + e/c*A0(q0, q1, q2, q3)",
        {"A0", "A1", "A2", "A3"});
    const Expr& got = constraint(set, "H'_0").expression;
    ch.holds("H'_0 matches p0 + sqrt(|k|^2 + m^2 c^2) + e/c A0",
             structurally_equal(simplify(expected, a), simplify(got, a)));
  }
  return ch;
}

Checks integrability(const AcceptanceOptions& o) {
  Checks ch;
  const std::pair<const char*, const char*> totals[] = {{"parametrized_oscillator", "H'_t"},
                                                        {"relativistic_charged", "H'_0"}};
  for (const auto& [id, label] : totals) {
    const HJPDESet set = build_constraints(instantiate(id), o.analysis);
    const ZeroVerdict v = is_zero(total_variation(set, label), set.zero);
    ch.holds(std::string("d") + label + " " + v.tag(), v.zero());
  }
  for (const std::string& id : template_ids()) {
    const IntegrabilityReport r = consistency_iterate(build_constraints(instantiate(id), o.analysis));
    ch.holds(id + " integrable at generation 0", r.integrable && r.generations.size() == 1);
  }

  // L = q1dot^2/2 + q1 q2 by hand: p_q2 = 0, then q1 = 0, p_q1 = 0, q2 = 0,
  // and the multiplier dt_q2 is forced to vanish.
  const HJPDESet set =
      build_constraints(parse_system_file("coordinates = q1, q2\nlagrangian = q1dot^2/2 + q1*q2\n"),
                        o.analysis);
  const IntegrabilityReport r = consistency_iterate(set);
  const char* expected[] = {"q1", "p_q1", "q2"};
  bool chain = r.set.constraints.size() == 4;
  for (std::size_t k = 0; chain && k < 3; ++k) {
    const Constraint& c = r.set.constraints[k + 1];
    const Expr e = Expr::symbol(expected[k]);
    const bool same = is_zero(c.expression - e, set.zero).zero() || is_zero(c.expression + e, set.zero).zero();
    chain = same && c.generation == static_cast<int>(k) + 1;
  }
  ch.holds("synthetic secondary C_1 = " +
               (r.set.constraints.size() > 1 ? r.set.constraints[1].expression.str() : std::string("none")),
           chain);
  ch.holds("synthetic relation dq2 = 0",
           r.relations.size() == 1 && is_zero(r.relations[0] - Expr::symbol("dq2"), set.zero).zero());
  return ch;
}

Checks oscillator_dynamics(const AcceptanceOptions& o) {
  Checks ch;
  const EquationsOfMotion eom = oscillator(o);
  const PhaseState start = initial_state(eom, {{"q", 1.0}, {"p_q", 0.0}}, 0.0);
  const std::size_t q = slot(eom, "q");
  const std::size_t p = slot(eom, "p_q");

  IntegrateOptions half;
  half.end = std::numbers::pi;
  half.step = 1e-3;
  half.surface_tol = o.surface_tol;
  const Trajectory tr = integrate(eom, start, half);
  const PhaseState& end = tr.samples.back();
  const double err = std::max(std::abs(end.values[q] - std::cos(end.parameter)),
                              std::abs(end.values[p] + std::sin(end.parameter)));
  ch.below("|(q,p) - (cos t, -sin t)| at t=pi", err, 1e-6);

  IntegrateOptions longrun = half;
  longrun.end = 100.0;
  longrun.record_every = 10;
  const Trajectory lr = integrate(eom, start, longrun);
  auto energy = [&](const PhaseState& s) {
    return 0.5 * (s.values[p] * s.values[p] + s.values[q] * s.values[q]);
  };
  double drift = 0.0;
  for (const PhaseState& s : lr.samples) drift = std::max(drift, std::abs(energy(s) - energy(start)));
  ch.below("energy drift over [0,100]", drift, 1e-8);
  return ch;
}

Checks free_particle(const AcceptanceOptions& o) {
  Checks ch;
  const EquationsOfMotion eom =
      derive_eom(build_constraints(instantiate("relativistic_free", {{"m", "1"}, {"c", "1"}}), o.analysis));
  const PhaseState start = initial_state(eom, {{"p1", 3.0}}, 0.0);
  IntegrateOptions opt;
  opt.end = 10.0;
  opt.step = 1e-3;
  opt.surface_tol = o.surface_tol;
  const Trajectory tr = integrate(eom, start, opt);
  double momentum = 0.0;
  double line = 0.0;
  const double slope = 3.0 / std::sqrt(9.0 + 1.0);
  const std::size_t q0 = slot(eom, "q0");
  const std::size_t q1 = slot(eom, "q1");
  for (const PhaseState& s : tr.samples) {
    for (const char* name : {"p0", "p1", "p2", "p3"}) {
      const std::size_t i = slot(eom, name);
      momentum = std::max(momentum, std::abs(s.values[i] - start.values[i]));
    }
    line = std::max(line, std::abs(s.values[q1] - slope * s.values[q0]));
  }
  ch.below("max change of p0..p3", momentum, 1e-10);
  ch.below("|q1 - 0.9486832980505138 q0|", line, 1e-10);
  ch.below("|slope - 0.9486832980505138|", std::abs(slope - 0.9486832980505138), 1e-15);
  return ch;
}

Checks charged_particle(const AcceptanceOptions& o) {
  Checks ch;
  IntegrateOptions opt;
  opt.end = 10.0;
  opt.step = 1e-3;
  opt.surface_tol = o.surface_tol;
  {
    const EquationsOfMotion eom = derive_eom(build_constraints(
        instantiate("relativistic_charged", {{"A0", "-q1"}, {"A1", "0"}, {"A2", "0"}, {"A3", "0"},
                                             {"e", "1"}, {"c", "1"}, {"m", "1"}}),
        o.analysis));
    const Trajectory tr = integrate(eom, initial_state(eom, {{"p1", 0.5}, {"p2", 0.2}}, 0.0), opt);
    ch.below("electric: max |H'_0|", tr.max_residual, o.surface_tol);
  }
  {
    const EquationsOfMotion eom = derive_eom(build_constraints(
        instantiate("relativistic_charged", {{"A0", "0"}, {"A1", "-q2/2"}, {"A2", "q1/2"}, {"A3", "0"},
                                             {"e", "1"}, {"c", "1"}, {"m", "1"}}),
        o.analysis));
    const Trajectory tr = integrate(eom, initial_state(eom, {{"p1", 0.6}, {"p3", 0.3}}, 0.0), opt);
    const std::size_t q1 = slot(eom, "q1"), q2 = slot(eom, "q2");
    const std::size_t p1 = slot(eom, "p1"), p2 = slot(eom, "p2"), p3 = slot(eom, "p3");
    auto speed = [&](const PhaseState& s) {
      const double k1 = s.values[p1] - s.values[q2] / 2.0;
      const double k2 = s.values[p2] + s.values[q1] / 2.0;
      return std::sqrt(k1 * k1 + k2 * k2 + s.values[p3] * s.values[p3]);
    };
    double drift = 0.0;
    for (const PhaseState& s : tr.samples) drift = std::max(drift, std::abs(speed(s) - speed(tr.samples[0])));
    ch.below("magnetic: |k| drift", drift, 1e-7);
    ch.below("magnetic: max |H'_0|", tr.max_residual, o.surface_tol);
  }
  return ch;
}

Checks gauge(const AcceptanceOptions& o) {
  Checks ch;
  const EquationsOfMotion eom = oscillator(o);
  IntegrateOptions opt;
  opt.end = 10.0;
  opt.step = 1e-3;
  const GaugeReport r = gauge_independence_check(
      eom, {{"q", 1.0}, {"p_q", 0.0}}, opt,
      {{"t = tau", Expr::symbol("tau")}, {"t = tau + tau^3/10", parse("tau + tau^3/10")}});
  ch.below("max |(q,p) difference| between t = tau and t = tau + tau^3/10", r.max_deviation, 1e-8);
  return ch;
}

Checks action(const AcceptanceOptions& o) {
  Checks ch;
  const EquationsOfMotion eom = oscillator(o);
  IntegrateOptions opt;
  opt.end = 2.0 * std::numbers::pi;
  opt.step = 1e-3;
  const Trajectory tr = integrate(eom, initial_state(eom, {{"q", 1.0}, {"p_q", 0.0}}, 0.0), opt);
  const std::size_t q = slot(eom, "q");
  const std::size_t p = slot(eom, "p_q");
  // Composite Simpson for the integral of L = qdot^2/2 - q^2/2 with qdot = p.
  auto lag = [&](const PhaseState& s) {
    return 0.5 * s.values[p] * s.values[p] - 0.5 * s.values[q] * s.values[q];
  };
  const std::size_t n = tr.samples.size() - 1;
  double integral = 0.0;
  if (n % 2 == 0) {
    integral = lag(tr.samples[0]) + lag(tr.samples[n]);
    for (std::size_t i = 1; i < n; ++i) integral += (i % 2 ? 4.0 : 2.0) * lag(tr.samples[i]);
    integral *= tr.step / 3.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) integral += 0.5 * tr.step * (lag(tr.samples[i]) + lag(tr.samples[i + 1]));
  }
  const double z = action_along(tr);
  ch.below("|Z - integral of L dt|", std::abs(z - integral), 1e-5);
  ch.below("|Z| over one period", std::abs(z), 1e-5);
  return ch;
}

Checks quantization(const AcceptanceOptions& o) {
  Checks ch;
  const HJPDESet set = build_constraints(instantiate("parametrized_oscillator"), o.analysis);
  const auto [h, symbols] = schrodinger_hamiltonian(set);
  const Grid grid;  // N = 1024 on [-10, 10], Dirichlet
  const HamiltonianOperator op = build_operator(h, grid, symbols);
  ch.below("hermiticity defect", hermiticity_defect(op), 1e-10);

  {
    const Wavefunction ground = gaussian(grid, 0.0, 1.0);
    ch.below("ground |<H> - 0.5|", std::abs(expectations(ground, op).h - 0.5), 2e-3);
    double dev = 0.0;
    EvolveMonitor mon;
    mon.every = 1;
    mon.observer = [&](const Wavefunction& w) {
      for (std::size_t j = 0; j < w.values.size(); ++j) {
        dev = std::max(dev, std::abs(std::norm(w.values[j]) - std::norm(ground.values[j])));
      }
    };
    evolve(ground, op, 1e-3, 10000, &mon);
    ch.below("ground max |d|psi|^2| over [0,10]", dev, 1e-6);
    ch.below("potential norm drift per step", mon.max_norm_drift, 1e-10);
  }

  {
    // Coherent state against the classical flow from the same (<q>, <p>).
    const Wavefunction coherent = gaussian(grid, 1.0, 1.0);
    const Expectations e0 = expectations(coherent, op);
    const EquationsOfMotion eom = oscillator(o);
    IntegrateOptions opt;
    opt.end = 2.0 * std::numbers::pi;
    opt.step = 1e-3;
    const Trajectory tr = integrate(eom, initial_state(eom, {{"q", e0.q}, {"p_q", e0.p}}, 0.0), opt);
    const std::size_t q = slot(eom, "q");
    const std::size_t p = slot(eom, "p_q");
    double dev = 0.0;
    std::size_t k = 0;
    EvolveMonitor mon;
    mon.every = 1;
    mon.observer = [&](const Wavefunction& w) {
      const Expectations e = expectations(w, op);
      const PhaseState& s = tr.samples.at(k++);
      dev = std::max({dev, std::abs(e.q - s.values[q]), std::abs(e.p - s.values[p])});
    };
    evolve(coherent, op, tr.step, tr.samples.size() - 1, &mon);
    ch.below("Ehrenfest max |(<q>,<p>) - classical| over one period", dev, 1e-3);
  }

  {
    Grid ring = grid;
    ring.boundary = Boundary::periodic;
    const HamiltonianOperator rel = build_operator(parse("sqrt(p^2 + 1)"), ring);
    const int mode = 5;
    const double k = 2.0 * std::numbers::pi * mode / ring.length();
    const double omega = std::sqrt(k * k + 1.0);
    const Wavefunction plane = plane_wave(ring, mode);
    double err = 0.0;
    EvolveMonitor mon;
    mon.every = 100;
    mon.observer = [&](const Wavefunction& w) {
      const Complex phase = std::polar(1.0, -omega * w.t);
      for (std::size_t j = 0; j < w.values.size(); ++j) {
        err = std::max(err, std::abs(w.values[j] - phase * plane.values[j]));
      }
    };
    evolve(plane, rel, 1e-3, 10000, &mon);
    ch.below("plane mode |psi - exp(-i omega t) psi0|", err, 1e-12);
    ch.below("spectral norm drift per step", mon.max_norm_drift, 1e-10);
  }
  return ch;
}

Checks homogeneity(const AcceptanceOptions& o) {
  Checks ch;
  const char* regular[] = {
      "coordinates = q\nlagrangian = qdot^2/2 - q^2/2\n",
      "coordinates = q\nfunctions = V\nlagrangian = qdot^2/2 - V(q)\n",
      "coordinates = q\nlagrangian = qdot^2/2 - q^4/4\n",
      "coordinates = q1, q2\nlagrangian = q1dot^2/2 + q2dot^2/2 + q1dot*q2dot/3 - q1*q2\n",
      "coordinates = x, y\nlagrangian = xdot^2/2 + ydot^2/2 + x*ydot - y*xdot\n",
  };
  double worst = 0.0;
  int cases = 0;
  for (const char* text : regular) {
    const LagrangianSystem sys = parametrize(parse_system_file(text), o.analysis);
    ZeroTestOptions zero = o.analysis.zero;
    zero.sampler = sys.sampler(zero.sampler.seed);
    for (double lambda : {0.5, 2.0, 7.0}) {
      std::map<std::string, Expr, std::less<>> scaled;
      for (const Coordinate& c : sys.coordinates) {
        scaled.emplace(c.velocity, Expr(lambda) * Expr::symbol(c.velocity));
      }
      const Expr residual = substitute(sys.lagrangian, scaled) - Expr(lambda) * sys.lagrangian;
      const ZeroVerdict v = is_zero(residual, zero);
      worst = std::max(worst, v.residual);
      ++cases;
      if (!v.zero()) ch.holds("degree-1 homogeneity of " + sys.lagrangian.str(), false);
    }
  }
  ch.below(std::to_string(cases) + " cases, worst residual", worst, 1e-9);
  return ch;
}

struct Entry {
  const char* name;
  Checks (*run)(const AcceptanceOptions&);
};

constexpr Entry kCriteria[] = {
    {"vanishing canonical Hamiltonian", vanishing_hamiltonian},
    {"constraint reproduction", constraint_forms},
    {"integrability", integrability},
    {"oscillator dynamics", oscillator_dynamics},
    {"free relativistic particle", free_particle},
    {"charged particle", charged_particle},
    {"gauge independence", gauge},
    {"action consistency", action},
    {"quantization", quantization},
    {"homogeneity", homogeneity},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  if (id < 1 || id > static_cast<int>(std::size(kCriteria))) {
    throw ConfigError("no acceptance criterion " + std::to_string(id));
  }
  const Entry& entry = kCriteria[id - 1];
  try {
    return entry.run(options).result(id, entry.name);
  } catch (const std::exception& e) {
    return {id, entry.name, false, std::string("error: ") + e.what()};
  }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(std::size(kCriteria)); ++id) out.push_back(run_criterion(id, options));
  return out;
}

}  // namespace hjdyn

#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "hjdyn/acceptance.hpp"
#include "hjdyn/error.hpp"
#include "hjdyn/integrability.hpp"
#include "hjdyn/quantize.hpp"
#include "hjdyn/system_file.hpp"
#include "hjdyn/systems.hpp"

namespace hjdyn::cli {

namespace {

using json = nlohmann::ordered_json;

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

double to_double(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  if (!t.empty() && t[0] == '+') ++first;
  auto res = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("expected a number for " + std::string(what) + ", got '" + t + "'");
  }
  return v;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Writes to `path`, or to `fallback` for an empty path or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  write(f);
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

struct Globals {
  double tol_zero = 1e-9;
  double tol_surface = 1e-8;
};

AnalysisOptions analysis_options(const Globals& g) {
  AnalysisOptions o;
  o.zero.tolerance = g.tol_zero;
  if (const char* seed = std::getenv("HJDYN_SEED"); seed && *seed) {
    std::uint64_t v = 0;
    const std::string_view s(seed);
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ConfigError("HJDYN_SEED must be a non-negative integer");
    }
    o.zero.sampler.seed = v;
  }
  return o;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string system;
  std::string output;
};

void analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out) {
  const AnalysisOptions opts = analysis_options(g);
  const HJPDESet set = build_constraints(load_system(a.system), opts);
  const IntegrabilityReport report = consistency_iterate(set);

  json doc;
  doc["schema"] = 1;
  doc["system"] = set.system.id;
  doc["rank"] = *set.system.rank;
  json coords = json::array();
  for (const Coordinate& c : set.system.coordinates) {
    coords.push_back({{"name", c.name}, {"velocity", c.velocity}, {"momentum", c.momentum}});
  }
  doc["coordinates"] = coords;
  json solved = json::object();
  for (const auto& [v, e] : set.system.solved) solved[v] = e.str();
  doc["solved_velocities"] = solved;
  json cons = json::array();
  for (const Constraint& c : set.constraints) {
    cons.push_back({{"label", c.label}, {"expression", c.expression.str()}});
  }
  doc["constraints"] = cons;
  doc["canonical_hamiltonian"] = set.canonical_hamiltonian.str();
  doc["vanishing"] = set.vanishing.tag();

  json integ;
  integ["integrable"] = report.integrable;
  json gens = json::array();
  for (const auto& labels : report.generations) gens.push_back(labels);
  integ["generations"] = gens;
  json all = json::array();
  for (const Constraint& c : report.set.constraints) {
    all.push_back({{"label", c.label}, {"expression", c.expression.str()}, {"generation", c.generation}});
  }
  integ["constraints"] = all;
  json vars = json::array();
  for (const Variation& v : report.variations) {
    json terms = json::object();
    for (std::size_t i = 0; i < v.parameters.size(); ++i) {
      terms["d" + v.parameters[i]] = v.coefficients[i].str();
    }
    vars.push_back({{"label", v.label}, {"zero", v.zero()}, {"coefficients", terms}});
  }
  integ["variations"] = vars;
  json rel = json::array();
  for (const Expr& r : report.relations) rel.push_back(r.str());
  integ["relations"] = rel;
  doc["integrability"] = integ;

  json cls;
  json pairs = json::array();
  for (const PairClassification& p : report.classification.pairs) {
    pairs.push_back({{"a", p.a}, {"b", p.b}, {"bracket", p.bracket.str()}, {"tag", to_string(p.tag)}});
  }
  cls["pairs"] = pairs;
  json per = json::array();
  for (const auto& [label, tag] : report.classification.constraints) {
    per.push_back({{"label", label}, {"tag", to_string(tag)}});
  }
  cls["constraints"] = per;
  doc["classification"] = cls;

  emit(a.output, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string system;
  std::string initial;
  std::string span = "0:10";
  double dt = 1e-3;
  std::string parameter;
  std::size_t record_every = 1;
  std::string output;
};

void simulate(const SimulateArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const EquationsOfMotion eom = derive_eom(build_constraints(load_system(a.system), analysis_options(g)));
  const auto [start, end] = parse_range(a.span);
  IntegrateOptions opt;
  opt.start = start;
  opt.end = end;
  opt.step = a.dt;
  opt.parameter = a.parameter;
  opt.surface_tol = g.tol_surface;
  opt.record_every = a.record_every;
  const PhaseState init = initial_state(eom, parse_initial(a.initial, eom), start, a.parameter);
  const Trajectory tr = integrate(eom, init, opt);

  // Column order: evolved parameter, other parameters, q_a, p_a, parameter momenta.
  const std::vector<std::string> slots = eom.slots();
  const std::size_t pairs = eom.phase.pairs.size();
  std::vector<std::size_t> cols;
  auto index_of = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(slots.begin(), slots.end(), name) - slots.begin());
  };
  const std::size_t evolved = index_of(tr.parameter);
  std::string header = tr.parameter;
  std::vector<std::size_t> others, qs, ps, pmom;
  if (evolved < pairs) pmom.push_back(evolved + pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const ConjugatePair& pr = eom.phase.pairs[i];
    if (pr.parameter) {
      if (i == evolved) continue;
      others.push_back(i);
      pmom.push_back(i + pairs);
    } else {
      qs.push_back(i);
      ps.push_back(i + pairs);
    }
  }
  for (const auto* group : {&others, &qs, &ps, &pmom}) {
    for (std::size_t i : *group) {
      cols.push_back(i);
      header += "," + slots[i];
    }
  }
  header += ",Z,constraint_residual";

  emit(a.output, out, [&](std::ostream& os) {
    os << header << '\n';
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
      const PhaseState& s = tr.samples[k];
      os << g17(evolved < slots.size() ? s.values[evolved] : s.parameter);
      for (std::size_t i : cols) os << ',' << g17(s.values[i]);
      os << ',' << g17(s.action) << ',' << g17(tr.residuals[k]) << '\n';
    }
  });
  if (tr.surface_violated) {
    err << "warning: trajectory left the constraint surface (max residual " << g17(tr.max_residual)
        << " > " << g17(g.tol_surface) << ")\n";
  }
}

// ---- quantize -------------------------------------------------------------

struct QuantizeArgs {
  std::string potential;
  std::string relativistic;
  std::string system;
  std::string initial = "gaussian:center=1,width=1,k=0";
  std::size_t grid = 1024;
  std::string domain = "-10:10";
  std::string boundary;
  double dt = 1e-3;
  std::size_t steps = 10000;
  std::size_t snapshot_every = 100;
  std::string output;
};

Wavefunction initial_wave(std::string_view text, const Grid& grid) {
  const std::size_t colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  std::map<std::string, double> p;
  if (colon != std::string_view::npos) {
    for (auto& [k, v] : parse_assignments(text.substr(colon + 1))) p[k] = v;
  }
  auto take = [&](const char* key, double fallback) {
    auto it = p.find(key);
    if (it == p.end()) return fallback;
    const double v = it->second;
    p.erase(it);
    return v;
  };
  Wavefunction psi;
  if (kind == "gaussian") {
    const double center = take("center", 0.0);
    const double width = take("width", 1.0);
    const double k = take("k", 0.0);
    psi = gaussian(grid, center, width, k);
  } else if (kind == "plane") {
    const double mode = take("mode", 1.0);
    if (mode != std::floor(mode)) throw ConfigError("plane mode must be an integer");
    psi = plane_wave(grid, static_cast<int>(mode));
  } else {
    throw ConfigError("unknown initial state '" + kind + "' (use gaussian:... or plane:mode=N)");
  }
  if (!p.empty()) throw ConfigError("unknown initial-state key '" + p.begin()->first + "'");
  return psi;
}

void quantize(const QuantizeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const int sources = !a.potential.empty() + !a.relativistic.empty() + !a.system.empty();
  if (sources != 1) throw ConfigError("give exactly one of --potential, --relativistic, --system");
  Expr h;
  OperatorSymbols symbols;
  bool relativistic = false;
  if (!a.potential.empty()) {
    h = pow(Expr::symbol("p"), Expr(2.0)) / Expr(2.0) + parse(a.potential);
  } else if (!a.relativistic.empty()) {
    double m = 1.0;
    double c = 1.0;
    for (const auto& [k, v] : parse_assignments(a.relativistic)) {
      if (k == "m") m = v;
      else if (k == "c") c = v;
      else throw ConfigError("unknown relativistic key '" + k + "' (use m, c)");
    }
    if (!(m >= 0.0) || !(c > 0.0)) throw ConfigError("need m >= 0 and c > 0");
    h = sqrt(pow(Expr::symbol("p"), Expr(2.0)) + Expr(m * m * c * c));
    relativistic = true;
  } else {
    auto [expr, syms] = schrodinger_hamiltonian(build_constraints(load_system(a.system), analysis_options(g)));
    h = expr;
    symbols = std::move(syms);
    relativistic = h.kind() == Kind::sqrt;
  }

  Grid grid;
  std::tie(grid.x_min, grid.x_max) = parse_range(a.domain);
  grid.n = a.grid;
  if (a.boundary.empty()) {
    grid.boundary = relativistic ? Boundary::periodic : Boundary::dirichlet;
  } else if (a.boundary == "dirichlet") {
    grid.boundary = Boundary::dirichlet;
  } else if (a.boundary == "periodic") {
    grid.boundary = Boundary::periodic;
  } else {
    throw ConfigError("boundary must be dirichlet or periodic");
  }

  const HamiltonianOperator op = build_operator(h, grid, symbols);
  const Wavefunction psi = initial_wave(a.initial, grid);

  emit(a.output, out, [&](std::ostream& os) {
    os << "t,x,re,im\n";
    EvolveMonitor mon;
    mon.every = a.snapshot_every;
    mon.observer = [&](const Wavefunction& w) {
      const std::string t = g17(w.t);
      for (std::size_t j = 0; j < w.values.size(); ++j) {
        os << t << ',' << g17(grid.x(j)) << ',' << g17(w.values[j].real()) << ',' << g17(w.values[j].imag())
           << '\n';
      }
    };
    evolve(psi, op, a.dt, a.steps, &mon);
    if (mon.boundary_contaminated) {
      err << "warning: amplitude " << g17(mon.boundary_amplitude)
          << " in the outer 10% of the Dirichlet grid (first at step " << mon.contaminated_at << ")\n";
    }
  });
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::vector<int> criteria;
};

int verify(const VerifyArgs& a, const Globals& g, std::ostream& out) {
  AcceptanceOptions opts;
  opts.analysis = analysis_options(g);
  opts.surface_tol = g.tol_surface;
  std::vector<CriterionResult> results;
  if (a.criteria.empty()) {
    results = run_acceptance(opts);
  } else {
    for (int id : a.criteria) results.push_back(run_criterion(id, opts));
  }
  int passed = 0;
  for (const CriterionResult& r : results) {
    char head[16];
    std::snprintf(head, sizeof head, "%2d", r.id);
    out << head << "  " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "\n      " << r.detail << '\n';
    passed += r.pass;
  }
  out << passed << '/' << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? 0 : kVerifyFailed;
}

}  // namespace

std::pair<double, double> parse_range(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw ConfigError("expected a range 'a:b', got '" + std::string(text) + "'");
  const double a = to_double(text.substr(0, colon), "range start");
  const double b = to_double(text.substr(colon + 1), "range end");
  if (!(b > a)) throw ConfigError("range end must exceed its start in '" + std::string(text) + "'");
  return {a, b};
}

std::vector<std::pair<std::string, double>> parse_assignments(std::string_view text) {
  std::vector<std::pair<std::string, double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string item = trim(text.substr(start, end - start));
    start = end + 1;
    if (item.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + item + "'");
    out.emplace_back(trim(std::string_view(item).substr(0, eq)),
                     to_double(std::string_view(item).substr(eq + 1), item));
  }
  return out;
}

Bindings parse_initial(std::string_view text, const EquationsOfMotion& eom) {
  std::vector<std::pair<std::string, std::vector<double>>> items;
  std::string token;
  auto flush = [&] {
    const std::string t = trim(token);
    token.clear();
    if (t.empty()) return;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      if (items.empty()) throw ConfigError("initial value '" + t + "' has no name");
      items.back().second.push_back(to_double(t, items.back().first));
      return;
    }
    items.push_back({trim(std::string_view(t).substr(0, eq)), {to_double(std::string_view(t).substr(eq + 1), t)}});
  };
  for (char c : text) {
    if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) flush();
    else token += c;
  }
  flush();

  const std::vector<std::string> slots = eom.slots();
  std::vector<std::string> dyn_q, dyn_p;
  for (const ConjugatePair& pr : eom.phase.pairs) {
    if (pr.parameter) continue;
    dyn_q.push_back(pr.q);
    dyn_p.push_back(pr.p);
  }
  Bindings out;
  for (const auto& [name, values] : items) {
    const std::vector<std::string>* group = nullptr;
    if (std::find(slots.begin(), slots.end(), name) != slots.end()) {
      if (values.size() != 1) throw ConfigError("'" + name + "' takes one value");
      out[name] = values[0];
      continue;
    }
    if (name == "q") group = &dyn_q;
    if (name == "p") group = &dyn_p;
    if (!group) throw ConfigError("unknown phase variable '" + name + "'");
    if (values.size() != group->size()) {
      throw ConfigError("'" + name + "' needs " + std::to_string(group->size()) + " value(s), got " +
                        std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) out[(*group)[i]] = values[i];
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Canonical analysis, simulation and quantization of singular Lagrangian systems", "hjdyn"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol-zero", g.tol_zero, "Absolute tolerance of the numeric zero test")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-surface", g.tol_surface, "Bound on constraint residuals along trajectories")
      ->check(CLI::PositiveNumber);

  AnalyzeArgs an;
  CLI::App* c_an = app.add_subcommand("analyze", "Constraints, vanishing Hamiltonian, integrability (JSON)");
  c_an->add_option("--system", an.system, "System file or template:<id>?k=v&...")->required();
  c_an->add_option("--output,-o", an.output, "Output file (default stdout)");

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Integrate the total differential equations (CSV)");
  c_sim->add_option("--system", sim.system, "System file or template:<id>?k=v&...")->required();
  c_sim->add_option("--initial", sim.initial, "Initial values, e.g. \"q=1,p=0\" or \"p=3,0,0\"");
  c_sim->add_option("--t-span", sim.span, "Parameter range start:end")->capture_default_str();
  c_sim->add_option("--dt", sim.dt, "RK4 step")->check(CLI::PositiveNumber)->capture_default_str();
  c_sim->add_option("--parameter", sim.parameter, "Generator parameter to evolve (default: first)");
  c_sim->add_option("--record-every", sim.record_every, "Write every n-th step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_sim->add_option("--output,-o", sim.output, "Output file (default stdout)");

  QuantizeArgs qa;
  CLI::App* c_q = app.add_subcommand("quantize", "Grid Schrodinger evolution (CSV)");
  c_q->add_option("--potential", qa.potential, "V(q) for H = p^2/2 + V(q)");
  c_q->add_option("--relativistic", qa.relativistic, "m=..,c=.. for H = sqrt(p^2 + m^2 c^2)");
  c_q->add_option("--system", qa.system, "One-coordinate system whose H_alpha is quantized");
  c_q->add_option("--initial", qa.initial, "gaussian:center=..,width=..,k=.. or plane:mode=N")
      ->capture_default_str();
  c_q->add_option("--grid", qa.grid, "Grid points")->check(CLI::Range(4, 1 << 24))->capture_default_str();
  c_q->add_option("--domain", qa.domain, "x_min:x_max")->capture_default_str();
  c_q->add_option("--boundary", qa.boundary, "dirichlet or periodic (default by operator)");
  c_q->add_option("--dt", qa.dt, "Time step")->check(CLI::PositiveNumber)->capture_default_str();
  c_q->add_option("--steps", qa.steps, "Number of steps")->capture_default_str();
  c_q->add_option("--snapshot-every", qa.snapshot_every, "Write every n-th step (0: first and last)")
      ->capture_default_str();
  c_q->add_option("--output,-o", qa.output, "Output file (default stdout)");

  VerifyArgs ve;
  CLI::App* c_v = app.add_subcommand("verify", "Run the acceptance suite");
  c_v->add_option("--criterion", ve.criteria, "Only these criteria (1-10)")->check(CLI::Range(1, 10));

  std::vector<std::string> argv_store(args.begin(), args.end());
  if (argv_store.empty()) argv_store.emplace_back("hjdyn");
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (c_an->parsed()) analyze(an, g, out);
    if (c_sim->parsed()) simulate(sim, g, out, err);
    if (c_q->parsed()) quantize(qa, g, out, err);
    if (c_v->parsed()) return verify(ve, g, out);
  } catch (const AnalysisError& e) {
    err << "hjdyn: analysis: " << e.what() << '\n';
    return kContradiction;
  } catch (const IoError& e) {
    err << "hjdyn: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << "hjdyn: " << e.what() << '\n';
    return kBadInput;
  }
  return 0;
}

}  // namespace hjdyn::cli

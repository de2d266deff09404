#include "hjdyn/systems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "hjdyn/error.hpp"

namespace hjdyn {

const std::vector<std::string>& template_ids() {
  static const std::vector<std::string> ids{"parametrized_regular", "parametrized_oscillator",
                                            "relativistic_charged", "relativistic_free"};
  return ids;
}

namespace {

Expr sym(const std::string& s) { return Expr::symbol(s); }

double number(const TemplateParams& params, std::string_view key) {
  const std::string& text = params.find(key)->second;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError("parameter " + std::string(key) + " must be a number, got '" + text + "'");
  }
  return v;
}

void check_keys(std::string_view id, const TemplateParams& params,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : params) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("template " + std::string(id) + " has no parameter '" + k + "'");
    }
  }
}

// A named constant: numeric when given, otherwise a symbol recorded in
// sys.parameters.
Expr constant(LagrangianSystem& sys, const TemplateParams& params, const std::string& name,
              bool must_be_positive) {
  if (params.count(name) == 0) {
    sys.parameters.insert(name);
    if (must_be_positive) sys.positive.insert(name);
    return sym(name);
  }
  const double v = number(params, name);
  if (must_be_positive && !(v > 0.0)) {
    throw ConfigError("parameter " + name + " must be positive");
  }
  sys.parameter_values[name] = v;  // kept for closed-form references
  return Expr(v);
}

Expr expression_param(const TemplateParams& params, std::string_view key,
                      const SymbolSet& allowed_symbols) {
  const Expr e = parse(params.find(key)->second);
  for (const std::string& s : free_symbols(e)) {
    if (allowed_symbols.count(s) == 0) {
      throw ConfigError("parameter " + std::string(key) + " uses unknown symbol '" + s + "'");
    }
  }
  return e;
}

// Potential V over the coordinates: opaque V(q...) with an optional body.
Expr potential(LagrangianSystem& sys, const TemplateParams& params,
               const std::vector<std::string>& coords, const Expr& default_body) {
  std::vector<Expr> args;
  for (const std::string& q : coords) args.push_back(sym(q));
  sys.functions.insert("V");
  Expr body = default_body;
  if (params.count("V") > 0) {
    SymbolSet allowed(coords.begin(), coords.end());
    allowed.insert(sys.parameters.begin(), sys.parameters.end());
    body = expression_param(params, "V", allowed);
  }
  sys.definitions["V"] = FunctionDef{coords, body};
  return Expr::apply("V", std::move(args));
}

LagrangianSystem parametrized(std::string_view id, const TemplateParams& params) {
  const bool oscillator = id == "parametrized_oscillator";
  if (oscillator) {
    check_keys(id, params, {"V"});
  } else {
    check_keys(id, params, {"V", "n"});
  }
  int n = 1;
  if (!oscillator) {
    n = 2;
    if (params.count("n") > 0) {
      const double v = number(params, "n");
      if (v < 1 || v > 16 || std::floor(v) != v) throw ConfigError("n must be an integer in 1..16");
      n = static_cast<int>(v);
    }
  }
  LagrangianSystem regular;
  std::vector<std::string> names;
  if (oscillator) {
    names = {"q"};
  } else {
    for (int i = 1; i <= n; ++i) names.push_back("q" + std::to_string(i));
  }
  std::vector<Expr> terms;
  for (const std::string& q : names) {
    Coordinate c = make_coordinate(q);
    terms.push_back(Expr(0.5) * pow(sym(c.velocity), Expr(2)));
    regular.coordinates.push_back(std::move(c));
  }
  Expr default_body = oscillator ? Expr(0.5) * pow(sym("q"), Expr(2)) : Expr();
  terms.push_back(-potential(regular, params, names, default_body));
  regular.lagrangian = sum(std::move(terms));
  LagrangianSystem sys = parametrize(regular);
  sys.id = std::string(id);
  return sys;
}

LagrangianSystem relativistic(std::string_view id, const TemplateParams& params) {
  const bool charged = id == "relativistic_charged";
  if (charged) {
    check_keys(id, params, {"m", "c", "e", "A0", "A1", "A2", "A3"});
  } else {
    check_keys(id, params, {"m", "c"});
  }
  LagrangianSystem sys;
  sys.id = std::string(id);
  const Expr m = constant(sys, params, "m", true);
  const Expr c = constant(sys, params, "c", true);
  const Expr e = charged ? constant(sys, params, "e", false) : Expr();

  std::vector<Expr> q, v, p, a;
  for (int mu = 0; mu < 4; ++mu) {
    const std::string k = std::to_string(mu);
    Coordinate co{"q" + k, "qdot" + k, "p" + k, "H'_" + k};
    q.push_back(sym(co.name));
    v.push_back(sym(co.velocity));
    p.push_back(sym(co.momentum));
    sys.coordinates.push_back(std::move(co));
  }
  SymbolSet allowed{"q0", "q1", "q2", "q3"};
  allowed.insert(sys.parameters.begin(), sys.parameters.end());
  for (int mu = 0; mu < 4; ++mu) {
    const std::string name = "A" + std::to_string(mu);
    if (!charged) {
      a.push_back(Expr());
    } else if (params.count(name) > 0) {
      a.push_back(expression_param(params, name, allowed));
    } else {
      sys.functions.insert(name);
      a.push_back(Expr::apply(name, q));
    }
  }

  const Expr interval = pow(v[0], Expr(2)) - pow(v[1], Expr(2)) - pow(v[2], Expr(2)) -
                        pow(v[3], Expr(2));
  std::vector<Expr> coupling;
  for (int mu = 0; mu < 4; ++mu) coupling.push_back(v[mu] * a[mu]);
  sys.lagrangian = -(m * c * sqrt(interval) + e / c * sum(coupling));

  std::vector<Expr> k(4), k2;
  for (int i = 1; i < 4; ++i) {
    k[i] = p[i] + e / c * a[i];
    k2.push_back(pow(k[i], Expr(2)));
  }
  k2.push_back(pow(m, Expr(2)) * pow(c, Expr(2)));
  const Expr energy = sqrt(sum(k2));
  for (int i = 1; i < 4; ++i) {
    sys.closed_forms.velocities.emplace("qdot" + std::to_string(i), k[i] * v[0] / energy);
  }
  sys.closed_forms.hamiltonians.emplace("qdot0", energy + e / c * a[0]);

  sys.positive.insert("qdot0");
  sys.ranges["qdot0"] = {1.0, 2.0};
  for (int i = 1; i < 4; ++i) sys.ranges["qdot" + std::to_string(i)] = {-0.3, 0.3};
  return sys;
}

}  // namespace

LagrangianSystem instantiate(std::string_view id, const TemplateParams& params) {
  if (id == "parametrized_regular" || id == "parametrized_oscillator") return parametrized(id, params);
  if (id == "relativistic_charged" || id == "relativistic_free") return relativistic(id, params);
  throw ConfigError("unknown template '" + std::string(id) + "'");
}

PhaseState reference_solution(const EquationsOfMotion& eom, const PhaseState& initial, double t) {
  const std::vector<std::string> slots = eom.slots();
  auto index = [&](std::string_view name) {
    auto it = std::find(slots.begin(), slots.end(), name);
    if (it == slots.end()) throw ConfigError("reference solution: missing slot " + std::string(name));
    return static_cast<std::size_t>(it - slots.begin());
  };
  auto param = [&](const std::string& name) {
    auto it = eom.parameter_values.find(name);
    return it == eom.parameter_values.end() ? 1.0 : it->second;
  };
  PhaseState out = initial;
  out.parameter = t;
  const double dt = t - initial.parameter;

  if (eom.system == "relativistic_free") {
    const double m = param("m");
    const double c = param("c");
    double p2 = 0.0;
    for (int i = 1; i < 4; ++i) p2 += std::pow(initial.values[index("p" + std::to_string(i))], 2);
    const double energy = std::sqrt(p2 + m * m * c * c);
    for (int i = 1; i < 4; ++i) {
      const std::string k = std::to_string(i);
      out.values[index("q" + k)] =
          initial.values[index("q" + k)] + initial.values[index("p" + k)] / energy * dt;
    }
    out.values[index("q0")] = t;
    out.values[index("p0")] = -energy;
    return out;
  }

  if (eom.system == "parametrized_oscillator") {
    auto v = eom.definitions.find("V");
    const Expr harmonic = Expr(0.5) * pow(Expr::symbol("q"), Expr(2));
    if (v == eom.definitions.end() || simplify(v->second.body) != harmonic) {
      throw ConfigError("reference solution needs the oscillator with V = q^2/2");
    }
    const double q0 = initial.values[index("q")];
    const double p0 = initial.values[index("p_q")];
    const double q = q0 * std::cos(dt) + p0 * std::sin(dt);
    const double p = -q0 * std::sin(dt) + p0 * std::cos(dt);
    out.values[index("q")] = q;
    out.values[index("p_q")] = p;
    out.values[index("t")] = t;
    out.values[index("p_t")] = -(p * p + q * q) / 2.0;
    return out;
  }
  throw ConfigError("no closed-form solution for system " + eom.system);
}

}  // namespace hjdyn

#include "hjdyn/legendre.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "hjdyn/error.hpp"

namespace hjdyn {

Coordinate make_coordinate(std::string name) {
  Coordinate c;
  c.velocity = name + "dot";
  c.momentum = "p_" + name;
  c.label = "H'_" + name;
  c.name = std::move(name);
  return c;
}

std::vector<std::string> LagrangianSystem::velocity_names() const {
  std::vector<std::string> out;
  for (const Coordinate& c : coordinates) out.push_back(c.velocity);
  return out;
}

std::vector<std::string> LagrangianSystem::momentum_names() const {
  std::vector<std::string> out;
  for (const Coordinate& c : coordinates) out.push_back(c.momentum);
  return out;
}

SamplerConfig LagrangianSystem::sampler(std::uint64_t seed) const {
  SamplerConfig cfg;
  cfg.ranges = ranges;
  cfg.positive = positive;
  cfg.seed = seed;
  return cfg;
}

std::vector<std::pair<std::string, Expr>> conjugate_momenta(const LagrangianSystem& sys) {
  std::vector<std::pair<std::string, Expr>> out;
  out.reserve(sys.coordinates.size());
  for (const Coordinate& c : sys.coordinates) {
    out.emplace_back(c.momentum, differentiate(sys.lagrangian, c.velocity));
  }
  return out;
}

namespace {

using Matrix = Eigen::MatrixXd;

Matrix to_eigen(const std::vector<std::vector<double>>& m, const std::vector<std::size_t>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[idx[i]][idx[j]];
    }
  }
  return out;
}

int rank_of(const Matrix& m, double threshold) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (!(smax > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold * smax) ++r;
  }
  return r;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

HessianReport hessian(const LagrangianSystem& sys, const AnalysisOptions& options) {
  HessianReport report;
  const std::size_t n = sys.coordinates.size();
  auto momenta = conjugate_momenta(sys);
  report.matrix.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      report.matrix[i][j] =
          j < i ? report.matrix[j][i] : differentiate(momenta[i].second, sys.coordinates[j].velocity);
    }
  }
  if (n == 0) return report;

  SymbolSet symbols = free_symbols(sys.lagrangian);
  const SymbolSet roots = symbols_under_root(sys.lagrangian);
  std::map<std::string, std::size_t, std::less<>> fns;
  for (const auto& row : report.matrix) {
    for (const Expr& e : row) {
      for (auto& f : functions_used(e)) fns.insert(f);
    }
  }
  Sampler sampler(sys.sampler(options.zero.sampler.seed));

  for (int k = 0; k < options.rank_samples; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < options.zero.max_retries && !ok; ++attempt) {
      Bindings b = sampler.draw(symbols, roots);
      FunctionTable realized = sampler.realize(fns);
      std::vector<std::vector<double>> m(n, std::vector<double>(n));
      try {
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const Expr& e = report.matrix[i][j];
            m[i][j] = evaluate(fns.empty() ? e : substitute_functions(e, realized), b);
          }
        }
        // The Lagrangian itself must be real at the point.
        if (functions_used(sys.lagrangian).empty()) evaluate(sys.lagrangian, b);
      } catch (const EvalError&) {
        continue;
      }
      ok = true;
      report.samples.push_back(std::move(b));
      report.values.push_back(std::move(m));
    }
    if (!ok) throw AnalysisError("no admissible sample point for the Hessian");
  }

  report.rank = numeric_rank(report, all_indices(n), options);

  Eigen::JacobiSVD<Matrix> svd(to_eigen(report.values.front(), all_indices(n)), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  for (Eigen::Index i = report.rank; i < s.size(); ++i) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = svd.matrixV()(static_cast<Eigen::Index>(j), i);
    report.null_directions.push_back(std::move(v));
  }
  return report;
}

int numeric_rank(const HessianReport& report, const std::vector<std::size_t>& indices,
                 const AnalysisOptions& options) {
  int rank = -1;
  for (const auto& m : report.values) {
    const int r = rank_of(to_eigen(m, indices), options.rank_threshold);
    if (rank >= 0 && r != rank) {
      throw AnalysisError("Hessian rank differs between sample points (" + std::to_string(rank) +
                          " vs " + std::to_string(r) + ")");
    }
    rank = r;
  }
  return std::max(rank, 0);
}

namespace {

bool weakly_nonzero(const Expr& e, const ZeroTestOptions& zero) { return !is_zero(e, zero).zero(); }

// Gauss-Jordan elimination on a small symbolic system A x = b.
std::vector<Expr> solve_linear(std::vector<std::vector<Expr>> a, std::vector<Expr> b,
                               const ZeroTestOptions& zero) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    for (std::size_t i = k; i < n; ++i) {
      if (weakly_nonzero(a[i][k], zero)) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) throw AnalysisError("momentum Jacobian is singular in the solvable velocities");
    std::swap(a[k], a[pivot]);
    std::swap(b[k], b[pivot]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k].is_zero()) continue;
      const Expr f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] = a[i][j] - f * a[k][j];
      b[i] = b[i] - f * b[k];
    }
  }
  std::vector<Expr> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = b[k] / a[k][k];
  return x;
}

}  // namespace

void solve_velocities(LagrangianSystem& sys, const AnalysisOptions& options) {
  const HessianReport report = hessian(sys, options);
  const std::size_t n = sys.coordinates.size();

  std::vector<std::size_t> chosen;
  for (std::size_t k = n; k-- > 0 && static_cast<int>(chosen.size()) < report.rank;) {
    std::vector<std::size_t> trial = chosen;
    trial.push_back(k);
    std::sort(trial.begin(), trial.end());
    if (numeric_rank(report, trial, options) == static_cast<int>(trial.size())) chosen = trial;
  }
  if (static_cast<int>(chosen.size()) != report.rank) {
    throw AnalysisError("could not select a full-rank set of velocities");
  }

  sys.rank = report.rank;
  sys.solvable = chosen;
  sys.unsolved.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::binary_search(chosen.begin(), chosen.end(), i)) sys.unsolved.push_back(i);
  }
  sys.solved.clear();
  if (chosen.empty()) return;

  ZeroTestOptions zero = options.zero;
  zero.sampler = sys.sampler(options.zero.sampler.seed);

  std::vector<Expr> momenta;
  for (std::size_t a : chosen) {
    momenta.push_back(differentiate(sys.lagrangian, sys.coordinates[a].velocity));
  }

  std::vector<std::vector<Expr>> jac(chosen.size(), std::vector<Expr>(chosen.size()));
  bool affine = true;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      jac[i][j] = differentiate(momenta[i], sys.coordinates[chosen[j]].velocity);
      for (std::size_t k : chosen) {
        if (depends_on(jac[i][j], sys.coordinates[k].velocity)) affine = false;
      }
    }
  }

  std::map<std::string, Expr, std::less<>> w;
  if (affine) {
    std::map<std::string, Expr, std::less<>> zero_velocities;
    for (std::size_t k : chosen) zero_velocities.emplace(sys.coordinates[k].velocity, Expr());
    std::vector<Expr> rhs;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      rhs.push_back(Expr::symbol(sys.coordinates[chosen[i]].momentum) -
                    substitute(momenta[i], zero_velocities));
    }
    auto x = solve_linear(jac, rhs, zero);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      w.emplace(sys.coordinates[chosen[i]].velocity, simplify(x[i], Assumptions{sys.positive}));
    }
  } else {
    for (std::size_t k : chosen) {
      auto it = sys.closed_forms.velocities.find(sys.coordinates[k].velocity);
      if (it == sys.closed_forms.velocities.end()) {
        throw AnalysisError("momenta are not affine in " + sys.coordinates[k].velocity +
                            " and no closed-form inversion is available");
      }
      w.emplace(it->first, it->second);
    }
  }

  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const Coordinate& c = sys.coordinates[chosen[i]];
    const Expr residual = substitute(momenta[i], w) - Expr::symbol(c.momentum);
    ZeroVerdict v = is_zero(residual, zero);
    if (!v.zero()) {
      throw AnalysisError("solved velocity for " + c.velocity +
                          " does not reproduce its momentum (residual " +
                          std::to_string(v.residual) + ")");
    }
  }
  sys.solved = std::move(w);
}

LagrangianSystem analyze_lagrangian(LagrangianSystem sys, const AnalysisOptions& options) {
  solve_velocities(sys, options);
  return sys;
}

LagrangianSystem parametrize(const LagrangianSystem& regular, const AnalysisOptions& options) {
  const SymbolSet used = free_symbols(regular.lagrangian);
  if (used.count("tdot") > 0) throw AnalysisError("input already uses the symbol tdot");
  for (const Coordinate& c : regular.coordinates) {
    if (c.name == "t") throw AnalysisError("input already has a coordinate named t");
  }
  const HessianReport report = hessian(regular, options);
  if (report.rank != static_cast<int>(regular.coordinates.size())) {
    throw AnalysisError("parametrize needs a regular Lagrangian (Hessian rank " +
                        std::to_string(report.rank) + " of " +
                        std::to_string(regular.coordinates.size()) + ")");
  }

  LagrangianSystem out = regular;
  out.id = regular.id == "custom" ? "custom" : regular.id + "_parametrized";
  out.rank.reset();
  out.solvable.clear();
  out.unsolved.clear();
  out.solved.clear();
  out.closed_forms = {};

  Coordinate t = make_coordinate("t");
  out.coordinates = {t};
  const Expr tdot = Expr::symbol(t.velocity);
  std::map<std::string, Expr, std::less<>> to_prime;
  for (const Coordinate& c : regular.coordinates) {
    Coordinate q = c;
    q.velocity = c.name + "prime";
    if (used.count(q.velocity) > 0) {
      throw AnalysisError("input already uses the symbol " + q.velocity);
    }
    to_prime.emplace(c.velocity, Expr::symbol(q.velocity) / tdot);
    out.coordinates.push_back(std::move(q));
  }
  out.lagrangian = tdot * substitute(regular.lagrangian, to_prime);
  out.positive.insert(t.velocity);
  // An explicit time parameter is now the coordinate t.
  out.parameters.erase("t");
  out.parameter_values.erase("t");
  return out;
}

}  // namespace hjdyn

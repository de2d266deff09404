#include <algorithm>
#include <cmath>
#include <future>

#include "hjdyn/eom.hpp"
#include "hjdyn/error.hpp"
#include "rk4.hpp"

namespace hjdyn {

namespace {

struct Samples {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
};

// tau with f(tau) = target, for f increasing on the bracket.
double invert(const CompiledExpr& f, double target, double lo, double hi) {
  auto at = [&](double tau) { return f(std::span<const double>(&tau, 1)); };
  while (at(lo) > target) lo -= 2.0 * (hi - lo + 1.0);
  while (at(hi) < target) hi += 2.0 * (hi - lo + 1.0);
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (at(mid) < target ? lo : hi) = mid;
  }
  return std::abs(at(lo) - target) <= std::abs(at(hi) - target) ? lo : hi;
}

double lagrange4(const std::vector<double>& t, const std::vector<double>& y, std::size_t first,
                 double x) {
  double out = 0.0;
  for (std::size_t i = first; i < first + 4; ++i) {
    double w = 1.0;
    for (std::size_t j = first; j < first + 4; ++j) {
      if (j != i) w *= (x - t[j]) / (t[i] - t[j]);
    }
    out += w * y[i];
  }
  return out;
}

Samples run_one(const EquationsOfMotion& eom, const Bindings& initial,
                const IntegrateOptions& options, const Reparametrization& rp,
                const std::vector<std::size_t>& dynamical) {
  const std::vector<std::string> tau_slot{"tau"};
  const CompiledExpr f(concretize(rp.f, eom), tau_slot);
  const CompiledExpr fprime(concretize(differentiate(rp.f, "tau"), eom), tau_slot);
  auto F = [&](double s) { return f(std::span<const double>(&s, 1)); };
  auto FP = [&](double s) { return fprime(std::span<const double>(&s, 1)); };

  const double tau0 = invert(f, options.start, options.start - 1.0, options.start + 1.0);
  const double tau1 = invert(f, options.end, tau0, tau0 + (options.end - options.start) + 1.0);
  const std::size_t n = step_count(tau1 - tau0, options.step);
  for (std::size_t k = 0; k <= 4 * n; ++k) {
    const double s = tau0 + (tau1 - tau0) * static_cast<double>(k) / static_cast<double>(4 * n);
    if (!(FP(s) > 0.0)) {
      throw ConfigError("parametrization " + rp.name + " is not strictly increasing near tau = " +
                        std::to_string(s));
    }
  }

  const CompiledFlow flow(eom, options.parameter);
  PhaseState st = initial_state(eom, initial, options.start, options.parameter);
  const std::size_t ps = flow.parameter_slot();
  Samples out;
  auto keep = [&](const PhaseState& s) {
    out.t.push_back(ps < s.values.size() ? s.values[ps] : F(s.parameter));
    std::vector<double> y;
    for (std::size_t i : dynamical) y.push_back(s.values[i]);
    out.y.push_back(std::move(y));
  };
  st.parameter = tau0;
  keep(st);
  detail::run_rk4(flow, st, tau0, tau1, n, F, FP,
                  [&](std::size_t, const PhaseState& s) { keep(s); });
  // Pin the end points exactly onto the requested span.
  out.t.front() = options.start;
  out.t.back() = options.end;
  return out;
}

std::vector<double> resample(const Samples& s, std::size_t component, const std::vector<double>& grid) {
  std::vector<double> series(s.y.size());
  for (std::size_t i = 0; i < s.y.size(); ++i) series[i] = s.y[i][component];
  std::vector<double> out;
  out.reserve(grid.size());
  const std::size_t m = s.t.size();
  for (double x : grid) {
    if (m < 4) {
      out.push_back(series.back());
      continue;
    }
    auto it = std::upper_bound(s.t.begin(), s.t.end(), x);
    std::size_t i = it == s.t.begin() ? 0 : static_cast<std::size_t>(it - s.t.begin()) - 1;
    const std::size_t first = std::min(i > 0 ? i - 1 : 0, m - 4);
    out.push_back(lagrange4(s.t, series, first, x));
  }
  return out;
}

}  // namespace

GaugeReport gauge_independence_check(const EquationsOfMotion& eom, const Bindings& initial,
                                     const IntegrateOptions& options,
                                     const std::vector<Reparametrization>& parametrizations,
                                     std::size_t grid_points) {
  if (parametrizations.empty()) throw ConfigError("no parametrization supplied");
  if (grid_points < 2) throw ConfigError("resampling grid needs at least two points");

  GaugeReport report;
  const std::vector<std::string> slots = eom.slots();
  std::vector<std::size_t> dynamical;
  for (std::size_t i = 0; i < eom.phase.pairs.size(); ++i) {
    if (eom.phase.pairs[i].parameter) continue;
    dynamical.push_back(i);
    dynamical.push_back(i + eom.phase.pairs.size());
  }
  std::sort(dynamical.begin(), dynamical.end());
  for (std::size_t i : dynamical) report.compared.push_back(slots[i]);

  for (std::size_t k = 0; k < grid_points; ++k) {
    report.grid.push_back(options.start + (options.end - options.start) * static_cast<double>(k) /
                                              static_cast<double>(grid_points - 1));
  }

  std::vector<std::future<Samples>> jobs;
  for (const Reparametrization& rp : parametrizations) {
    report.names.push_back(rp.name);
    jobs.push_back(std::async(std::launch::async, run_one, std::cref(eom), std::cref(initial),
                              std::cref(options), std::cref(rp), std::cref(dynamical)));
  }
  for (auto& job : jobs) {
    const Samples s = job.get();
    std::vector<std::vector<double>> table(report.grid.size(), std::vector<double>(dynamical.size()));
    for (std::size_t c = 0; c < dynamical.size(); ++c) {
      const std::vector<double> col = resample(s, c, report.grid);
      for (std::size_t g = 0; g < col.size(); ++g) table[g][c] = col[g];
    }
    report.resampled.push_back(std::move(table));
  }

  for (std::size_t r = 1; r < report.resampled.size(); ++r) {
    for (std::size_t g = 0; g < report.grid.size(); ++g) {
      for (std::size_t c = 0; c < dynamical.size(); ++c) {
        report.max_deviation = std::max(
            report.max_deviation, std::abs(report.resampled[r][g][c] - report.resampled[0][g][c]));
      }
    }
  }
  return report;
}

}  // namespace hjdyn

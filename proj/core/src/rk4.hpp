#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hjdyn/eom.hpp"
#include "hjdyn/error.hpp"

namespace hjdyn {

std::size_t step_count(double span, double step);

namespace detail {

// Classical RK4 over s in [s0, s1] with n equal steps. The flow is moved at
// speed fprime(s); the parameter slot (if any) is pinned to f(s) at every
// stage rather than integrated.
template <class F, class FPrime, class OnStep>
void run_rk4(const CompiledFlow& flow, PhaseState state, double s0, double s1, std::size_t n,
             F f, FPrime fprime, OnStep on_step) {
  if (n == 0) return;
  const std::size_t dim = flow.size();
  const std::size_t ps = flow.parameter_slot();
  const double h = (s1 - s0) / static_cast<double>(n);
  std::vector<double> y(dim + 1), tmp(dim + 1), k1(dim + 1), k2(dim + 1), k3(dim + 1),
      k4(dim + 1);

  auto deriv = [&](double s, std::vector<double>& at, std::vector<double>& out) {
    if (ps < dim) at[ps] = f(s);
    flow(std::span<const double>(at.data(), dim), out);
    const double speed = fprime(s);
    for (double& v : out) v *= speed;
  };

  for (std::size_t i = 0; i < dim; ++i) y[i] = state.values[i];
  y[dim] = state.action;
  for (std::size_t k = 1; k <= n; ++k) {
    const double s = s0 + h * static_cast<double>(k - 1);
    tmp = y;
    deriv(s, tmp, k1);
    for (std::size_t i = 0; i <= dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    deriv(s + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i <= dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    deriv(s + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i <= dim; ++i) tmp[i] = y[i] + h * k3[i];
    deriv(s + h, tmp, k4);
    for (std::size_t i = 0; i <= dim; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    const double s_next = k == n ? s1 : s0 + h * static_cast<double>(k);
    if (ps < dim) y[ps] = f(s_next);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (!std::isfinite(y[i])) {
        throw EvalError("non-finite state at parameter " + std::to_string(s_next) +
                        " (left the domain of the equations)");
      }
    }
    for (std::size_t i = 0; i < dim; ++i) state.values[i] = y[i];
    state.action = y[dim];
    state.parameter = s_next;
    on_step(k, state);
  }
}

}  // namespace detail
}  // namespace hjdyn

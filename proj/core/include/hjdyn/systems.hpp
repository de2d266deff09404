#pragma once

#include <map>
#include <string>
#include <vector>

#include "hjdyn/eom.hpp"
#include "hjdyn/legendre.hpp"

namespace hjdyn {

using TemplateParams = std::map<std::string, std::string, std::less<>>;

/// parametrized_regular, parametrized_oscillator, relativistic_charged,
/// relativistic_free.
const std::vector<std::string>& template_ids();

/// Builds a template system. Recognized parameters:
///   parametrized_*:      V (potential expression in the coordinates),
///                        n (parametrized_regular only: number of coordinates)
///   relativistic_*:      m (> 0), c (> 0), e and A0..A3 (relativistic_charged only)
/// Constants that are not given stay symbolic and take the value 1 in
/// simulations. Throws ConfigError on an unknown id or invalid parameter.
LagrangianSystem instantiate(std::string_view id, const TemplateParams& params = {});

/// Exact phase-space point at parameter value `t` for systems with a closed
/// form: relativistic_free, and parametrized_oscillator with V = q^2/2.
/// Throws ConfigError otherwise.
PhaseState reference_solution(const EquationsOfMotion& eom, const PhaseState& initial, double t);

}  // namespace hjdyn

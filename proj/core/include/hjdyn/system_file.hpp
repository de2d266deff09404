#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "hjdyn/legendre.hpp"
#include "hjdyn/systems.hpp"

namespace hjdyn {

/// Splits "template:<id>?k=v&k=v" into the id and its parameters.
std::pair<std::string, TemplateParams> parse_template_uri(std::string_view selector);

/// Parses a system definition:
///
///   # comment
///   coordinates = t, q
///   lagrangian  = tdot*((qprime/tdot)^2/2 - V(q))
///   positive    = tdot
///   functions   = V
///   V(q)        = q^2/2          (optional concrete body)
///   parameters  = m=1, c         (optional constants, value optional)
///   velocities  = tdot, qprime   (optional; default <q>dot, or <q>prime
///                                 when only that name occurs in L)
///   momenta     = p_t, p_q       (optional; default p_<q>)
///   template    = none | relativistic_charged | relativistic_free
///
/// With a template, the remaining keys (m, c, e, A0..A3, ...) are passed to
/// it as parameters. Throws ConfigError or ParseError.
LagrangianSystem parse_system_file(std::string_view text);

/// A "template:..." selector or a path to a system file. Throws IoError if
/// the file cannot be read.
LagrangianSystem load_system(std::string_view selector);

}  // namespace hjdyn

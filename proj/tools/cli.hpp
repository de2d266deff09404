#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hjdyn/eom.hpp"

namespace hjdyn::cli {

/// Exit statuses besides 0.
inline constexpr int kContradiction = 1;
inline constexpr int kIoError = 2;
inline constexpr int kVerifyFailed = 3;
inline constexpr int kBadInput = 4;

/// Runs the command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b" -> (a, b).
std::pair<double, double> parse_range(std::string_view text);

/// Initial values such as "q=1,p=0" or "p=3,0,0". A bare number extends the
/// previous key; the keys q and p address the dynamical coordinates and
/// momenta in order.
Bindings parse_initial(std::string_view text, const EquationsOfMotion& eom);

/// "key=v,key=v" pairs.
std::vector<std::pair<std::string, double>> parse_assignments(std::string_view text);

}  // namespace hjdyn::cli

#include "hjdyn/system_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hjdyn/error.hpp"

namespace hjdyn {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = s.find(sep, start);
    out.push_back(trim(s.substr(start, at == std::string_view::npos ? s.npos : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

bool valid_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto res = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (res.ec == std::errc() && res.ptr == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

}  // namespace

std::pair<std::string, TemplateParams> parse_template_uri(std::string_view selector) {
  constexpr std::string_view prefix = "template:";
  if (selector.substr(0, prefix.size()) != prefix) {
    throw ConfigError("template selector must start with 'template:'");
  }
  std::string_view rest = selector.substr(prefix.size());
  const std::size_t q = rest.find('?');
  std::string id(rest.substr(0, q));
  TemplateParams params;
  if (q != std::string_view::npos) {
    for (const std::string& item : split_list(rest.substr(q + 1), '&')) {
      if (item.empty()) continue;
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("template parameter '" + item + "' needs a value");
      std::string key = trim(item.substr(0, eq));
      if (!params.emplace(key, percent_decode(trim(item.substr(eq + 1)))).second) {
        throw ConfigError("template parameter '" + key + "' given twice");
      }
    }
  }
  return {std::move(id), std::move(params)};
}

LagrangianSystem parse_system_file(std::string_view text) {
  std::map<std::string, std::string, std::less<>> keys;
  std::vector<std::pair<std::string, std::string>> definitions;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.find('(') != std::string::npos) {
      definitions.emplace_back(std::move(key), std::move(value));
      continue;
    }
    if (!keys.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' given twice");
    }
  }

  std::string tmpl = keys.count("template") ? keys["template"] : "none";
  keys.erase("template");
  if (tmpl != "none") {
    if (tmpl != "relativistic_charged" && tmpl != "relativistic_free" &&
        tmpl != "parametrized_regular" && tmpl != "parametrized_oscillator") {
      throw ConfigError("unknown template '" + tmpl + "'");
    }
    if (!definitions.empty()) throw ConfigError("function definitions are not allowed with a template");
    TemplateParams params(keys.begin(), keys.end());
    return instantiate(tmpl, params);
  }

  static const std::vector<std::string_view> known{"coordinates", "velocities", "momenta",
                                                   "lagrangian",  "positive",   "functions",
                                                   "parameters"};
  for (const auto& [k, v] : keys) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError("unknown key '" + k + "'");
    }
  }
  if (!keys.count("coordinates")) throw ConfigError("missing key 'coordinates'");
  if (!keys.count("lagrangian")) throw ConfigError("missing key 'lagrangian'");

  LagrangianSystem sys;
  for (const std::string& f : split_list(keys.count("functions") ? keys["functions"] : "")) {
    if (!valid_name(f) || f == "sqrt" || f == "d") throw ConfigError("bad function name '" + f + "'");
    sys.functions.insert(f);
  }
  sys.lagrangian = parse(keys["lagrangian"], sys.functions);
  const SymbolSet used = free_symbols(sys.lagrangian);

  const std::vector<std::string> coords = split_list(keys["coordinates"]);
  if (coords.empty()) throw ConfigError("no coordinates given");
  std::vector<std::string> velocities =
      keys.count("velocities") ? split_list(keys["velocities"]) : std::vector<std::string>{};
  std::vector<std::string> momenta =
      keys.count("momenta") ? split_list(keys["momenta"]) : std::vector<std::string>{};
  if (!velocities.empty() && velocities.size() != coords.size()) {
    throw ConfigError("velocities and coordinates differ in length");
  }
  if (!momenta.empty() && momenta.size() != coords.size()) {
    throw ConfigError("momenta and coordinates differ in length");
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!valid_name(coords[i])) throw ConfigError("bad coordinate name '" + coords[i] + "'");
    Coordinate c = make_coordinate(coords[i]);
    if (!velocities.empty()) {
      c.velocity = velocities[i];
    } else if (!used.count(c.velocity) && used.count(coords[i] + "prime")) {
      c.velocity = coords[i] + "prime";
    }
    if (!momenta.empty()) c.momentum = momenta[i];
    if (!valid_name(c.velocity) || !valid_name(c.momentum)) {
      throw ConfigError("bad velocity or momentum name for '" + coords[i] + "'");
    }
    sys.coordinates.push_back(std::move(c));
  }

  for (const std::string& item : split_list(keys.count("parameters") ? keys["parameters"] : "")) {
    const std::size_t eq = item.find('=');
    const std::string name = trim(item.substr(0, eq));
    if (!valid_name(name)) throw ConfigError("bad parameter name '" + name + "'");
    sys.parameters.insert(name);
    if (eq != std::string::npos) {
      const std::string v = trim(item.substr(eq + 1));
      double x = 0.0;
      auto res = std::from_chars(v.data(), v.data() + v.size(), x);
      if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x)) {
        throw ConfigError("parameter " + name + " needs a numeric value");
      }
      sys.parameter_values[name] = x;
    }
  }
  for (const std::string& s : split_list(keys.count("positive") ? keys["positive"] : "")) {
    if (!valid_name(s)) throw ConfigError("bad positive symbol '" + s + "'");
    sys.positive.insert(s);
  }

  SymbolSet known_symbols = sys.parameters;
  for (const Coordinate& c : sys.coordinates) {
    known_symbols.insert(c.name);
    known_symbols.insert(c.velocity);
    if (used.count(c.momentum)) throw ConfigError("the Lagrangian uses the momentum symbol " + c.momentum);
  }
  for (const std::string& s : used) {
    if (!known_symbols.count(s)) {
      throw ConfigError("symbol '" + s + "' is neither a coordinate, a velocity nor a parameter");
    }
  }

  for (const auto& [head, body] : definitions) {
    const std::size_t open = head.find('(');
    const std::size_t close = head.rfind(')');
    const std::string name = trim(std::string_view(head).substr(0, open));
    if (close == std::string::npos || close < open || !trim(head.substr(close + 1)).empty()) {
      throw ConfigError("malformed definition '" + head + "'");
    }
    if (!sys.functions.count(name)) throw ConfigError("definition of undeclared function '" + name + "'");
    FunctionDef def;
    def.params = split_list(std::string_view(head).substr(open + 1, close - open - 1));
    for (const std::string& p : def.params) {
      if (!valid_name(p)) throw ConfigError("bad argument name '" + p + "' in " + head);
    }
    def.body = parse(body);
    SymbolSet allowed(def.params.begin(), def.params.end());
    allowed.insert(sys.parameters.begin(), sys.parameters.end());
    for (const std::string& s : free_symbols(def.body)) {
      if (!allowed.count(s)) throw ConfigError("symbol '" + s + "' is not an argument of " + head);
    }
    if (!sys.definitions.emplace(name, std::move(def)).second) {
      throw ConfigError("function '" + name + "' defined twice");
    }
  }
  return sys;
}

LagrangianSystem load_system(std::string_view selector) {
  if (selector.substr(0, 9) == "template:") {
    auto [id, params] = parse_template_uri(selector);
    return instantiate(id, params);
  }
  std::ifstream f{std::string(selector)};
  if (!f) throw IoError("cannot open system file '" + std::string(selector) + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  if (f.bad()) throw IoError("cannot read system file '" + std::string(selector) + "'");
  return parse_system_file(buf.str());
}

}  // namespace hjdyn

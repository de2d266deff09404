#include "hjdyn/integrability.hpp"

#include <algorithm>

#include "hjdyn/error.hpp"

namespace hjdyn {

Expr poisson_bracket(const Expr& a, const Expr& b, const PhaseSpace& phase) {
  std::vector<Expr> terms;
  for (const ConjugatePair& pr : phase.pairs) {
    terms.push_back(differentiate(a, pr.q) * differentiate(b, pr.p));
    terms.push_back(-(differentiate(a, pr.p) * differentiate(b, pr.q)));
  }
  return sum(std::move(terms));
}

namespace {

bool solve_for(const Expr& c, const std::string& symbol,
               std::map<std::string, Expr, std::less<>>& rules) {
  if (rules.count(symbol) > 0 || !depends_on(c, symbol)) return false;
  const Expr d = differentiate(c, symbol);
  if (!d.is_constant()) return false;
  rules.emplace(symbol, Expr::symbol(symbol) - c / d);
  return true;
}

}  // namespace

ConstraintSurface::ConstraintSurface(const std::vector<Constraint>& constraints,
                                     const PhaseSpace& phase) {
  for (const Constraint& c : constraints) {
    const Expr e = project(c.expression);
    if (!c.parameter.empty()) {
      const ConjugatePair* pr = phase.find(c.parameter);
      if (pr != nullptr && solve_for(e, pr->p, rules_)) continue;
    }
    bool done = false;
    for (const ConjugatePair& pr : phase.pairs) {
      if (solve_for(e, pr.p, rules_) || solve_for(e, pr.q, rules_)) {
        done = true;
        break;
      }
    }
    (void)done;
  }
}

Expr ConstraintSurface::project(const Expr& e) const {
  Expr cur = simplify(e);
  for (std::size_t pass = 0; pass <= rules_.size(); ++pass) {
    bool hit = false;
    for (const auto& [s, v] : rules_) {
      if (depends_on(cur, s)) {
        hit = true;
        break;
      }
    }
    if (!hit) break;
    cur = substitute(cur, rules_);
  }
  return cur;
}

bool Variation::zero() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const ZeroVerdict& v) { return v.zero(); });
}

Expr Variation::total() const {
  std::vector<Expr> terms;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (verdicts[i].zero()) continue;
    terms.push_back(coefficients[i] * Expr::symbol("d" + parameters[i]));
  }
  return sum(std::move(terms));
}

Variation variation(const HJPDESet& set, const Constraint& c, const ConstraintSurface& surface) {
  Variation v;
  v.label = c.label;
  for (const Generator& g : flow_generators(set)) {
    const Expr coef = surface.project(poisson_bracket(c.expression, g.expression, set.phase));
    v.parameters.push_back(g.parameter);
    v.verdicts.push_back(is_zero(coef, set.zero));
    v.coefficients.push_back(v.verdicts.back().zero() ? Expr() : coef);
  }
  return v;
}

Expr total_variation(const HJPDESet& set, std::string_view label) {
  const Constraint* c = set.find(label);
  if (c == nullptr) throw AnalysisError("no constraint labelled " + std::string(label));
  return variation(set, *c, ConstraintSurface(set.constraints, set.phase)).total();
}

std::string to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::first_class:
      return "first-class";
    case ClassTag::second_class:
      return "second-class";
    case ClassTag::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

Classification classify(const HJPDESet& set) {
  Classification out;
  const ConstraintSurface surface(set.constraints, set.phase);
  const SymbolSet phase_symbols = set.phase.symbols();
  const std::size_t n = set.constraints.size();
  std::vector<ClassTag> tag(n, ClassTag::first_class);
  auto worsen = [](ClassTag& t, ClassTag by) {
    if (by == ClassTag::second_class) t = ClassTag::second_class;
    if (by == ClassTag::undetermined && t == ClassTag::first_class) t = ClassTag::undetermined;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      PairClassification pc;
      pc.a = set.constraints[i].label;
      pc.b = set.constraints[j].label;
      pc.bracket = poisson_bracket(set.constraints[i].expression, set.constraints[j].expression,
                                   set.phase);
      const SymbolSet free = free_symbols(pc.bracket);
      const bool constant = std::none_of(free.begin(), free.end(), [&](const std::string& s) {
        return phase_symbols.count(s) > 0;
      });
      if (is_zero(surface.project(pc.bracket), set.zero).zero()) {
        pc.tag = ClassTag::first_class;
      } else if (constant && functions_used(pc.bracket).empty()) {
        pc.tag = ClassTag::second_class;
      } else {
        pc.tag = ClassTag::undetermined;
      }
      worsen(tag[i], pc.tag);
      worsen(tag[j], pc.tag);
      out.pairs.push_back(std::move(pc));
    }
  }
  for (std::size_t i = 0; i < n; ++i) out.constraints.emplace_back(set.constraints[i].label, tag[i]);
  return out;
}

IntegrabilityReport consistency_iterate(const HJPDESet& initial) {
  IntegrabilityReport report;
  report.set = initial;
  HJPDESet& set = report.set;
  std::vector<std::string> primaries;
  for (const Constraint& c : set.constraints) primaries.push_back(c.label);
  report.generations.push_back(std::move(primaries));

  const int cap = 2 * static_cast<int>(set.phase.pairs.size());
  int secondary_count = 0;
  for (int pass = 1;; ++pass) {
    ConstraintSurface surface(set.constraints, set.phase);
    report.variations.clear();
    report.relations.clear();
    std::vector<Constraint> added;
    for (const Constraint& c : set.constraints) {
      Variation v = variation(set, c, surface);
      bool on_parameter = false;
      Expr tau_coef;
      for (std::size_t k = 0; k < v.parameters.size(); ++k) {
        if (v.verdicts[k].zero()) continue;
        if (v.parameters[k] == kTau) {
          tau_coef = v.coefficients[k];
        } else {
          on_parameter = true;
        }
      }
      if (on_parameter) {
        report.relations.push_back(v.total());
      } else if (!tau_coef.is_zero()) {
        std::vector<Constraint> trial = set.constraints;
        trial.insert(trial.end(), added.begin(), added.end());
        const Expr candidate = ConstraintSurface(trial, set.phase).project(tau_coef);
        if (candidate.is_constant() && !candidate.is_zero()) {
          throw ContradictionError("variation of " + c.label + " gives the constant constraint " +
                                   candidate.str() + " = 0");
        }
        if (!is_zero(candidate, set.zero).zero()) {
          Constraint s;
          s.label = "C_" + std::to_string(++secondary_count);
          s.expression = candidate;
          s.generation = pass;
          added.push_back(std::move(s));
        }
      }
      report.variations.push_back(std::move(v));
    }
    if (added.empty()) break;
    if (pass > cap) {
      throw AnalysisError("consistency iteration exceeded " + std::to_string(cap) + " passes");
    }
    std::vector<std::string> labels;
    for (Constraint& s : added) {
      labels.push_back(s.label);
      set.constraints.push_back(std::move(s));
    }
    report.generations.push_back(std::move(labels));
  }

  report.integrable = std::all_of(report.variations.begin(), report.variations.end(),
                                  [](const Variation& v) { return v.zero(); });
  report.classification = classify(set);
  return report;
}

}  // namespace hjdyn

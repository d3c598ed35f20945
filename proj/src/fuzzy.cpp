/*   Copyright 2026 The Headlight FIS Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#include "headlight/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "headlight/errors.hpp"

namespace headlight::fuzzy {

void Universe::validate() const {
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
    throw ConfigError("universe requires finite min < max");
  }
  if (resolution < kMinResolution) {
    throw ConfigError("universe resolution must be at least " + std::to_string(kMinResolution));
  }
}

double Universe::point(std::size_t i) const {
  if (i + 1 == resolution) return max;
  return min + step() * static_cast<double>(i);
}

double Universe::clamp(double x) const { return std::clamp(x, min, max); }

MembershipFunction MembershipFunction::gaussian(double mean, double sigma) {
  if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma <= 0.0) {
    throw ConfigError("gaussian requires finite mean and sigma > 0");
  }
  return MembershipFunction(Gaussian{mean, sigma});
}

MembershipFunction MembershipFunction::trapezoid(double a, double b, double c, double d) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d))) {
    throw ConfigError("trapezoid corners must be finite");
  }
  if (!(a <= b && b <= c && c <= d)) {
    throw ConfigError("trapezoid requires a <= b <= c <= d");
  }
  return MembershipFunction(Trapezoid{a, b, c, d});
}

namespace {

double trapezoid_degree(const Trapezoid& t, double x) {
  if (x < t.a || x > t.d) return 0.0;
  if (x < t.b) return (x - t.a) / (t.b - t.a);
  if (x <= t.c) return 1.0;
  return (t.d - x) / (t.d - t.c);
}

}  // namespace

double MembershipFunction::degree(double x) const {
  if (!std::isfinite(x)) throw DomainError("membership of a non-finite value");
  double mu = 0.0;
  if (const auto* g = std::get_if<Gaussian>(&shape_)) {
    const double z = (x - g->mean) / g->sigma;
    mu = std::exp(-0.5 * z * z);
  } else {
    mu = trapezoid_degree(std::get<Trapezoid>(shape_), x);
  }
  return std::clamp(mu, 0.0, 1.0);
}

std::pair<double, double> MembershipFunction::support() const {
  if (std::holds_alternative<Gaussian>(shape_)) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf};
  }
  const auto& t = std::get<Trapezoid>(shape_);
  return {t.a, t.d};
}

LinguisticVariable::LinguisticVariable(std::string name, Universe universe, std::vector<Term> terms)
    : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {
  universe_.validate();
  if (name_.empty()) throw ConfigError("linguistic variable needs a name");
  if (terms_.empty()) throw ConfigError("variable '" + name_ + "' has no terms");
  std::set<std::string> seen;
  for (const auto& t : terms_) {
    if (!seen.insert(t.name).second) {
      throw ConfigError("variable '" + name_ + "' has duplicate term '" + t.name + "'");
    }
    const auto [lo, hi] = t.function.support();
    if (hi < universe_.min || lo > universe_.max) {
      throw ConfigError("term '" + t.name + "' of '" + name_ + "' lies outside the universe");
    }
  }
}

int LinguisticVariable::find_term(const std::string& term) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].name == term) return static_cast<int>(i);
  }
  return -1;
}

const Term& LinguisticVariable::term(const std::string& term) const {
  const int i = find_term(term);
  if (i < 0) throw ConfigError("variable '" + name_ + "' has no term '" + term + "'");
  return terms_[static_cast<std::size_t>(i)];
}

Fuzzified fuzzify(const LinguisticVariable& variable, double x) {
  if (!std::isfinite(x)) throw DomainError("cannot fuzzify a non-finite value");
  Fuzzified out;
  out.crisp = variable.universe().clamp(x);
  out.clamped = out.crisp != x;
  for (const auto& t : variable.terms()) out.degrees[t.name] = t.function.degree(out.crisp);
  return out;
}

RuleBase::RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                   std::vector<FuzzyRule> rules)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
  if (inputs_.empty()) throw ConfigError("rule base needs at least one input variable");
  if (rules_.empty()) throw ConfigError("rule base needs at least one rule");
  std::set<std::string> names;
  for (const auto& v : inputs_) {
    if (!names.insert(v.name()).second) throw ConfigError("duplicate input variable '" + v.name() + "'");
  }

  const Universe& out_u = output_.universe();
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const FuzzyRule& rule = rules_[r];
    const std::string label = "rule " + std::to_string(r + 1);
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) throw ConfigError(label + ": weight must lie in (0, 1]");
    if (rule.antecedents.empty()) throw ConfigError(label + ": no antecedents");

    std::vector<ResolvedClause> resolved;
    for (const Clause& c : rule.antecedents) {
      auto it = std::find_if(inputs_.begin(), inputs_.end(),
                             [&](const LinguisticVariable& v) { return v.name() == c.variable; });
      if (it == inputs_.end()) throw ConfigError(label + ": unknown input variable '" + c.variable + "'");
      const int term = it->find_term(c.term);
      if (term < 0) throw ConfigError(label + ": unknown term '" + c.term + "' of '" + c.variable + "'");
      resolved.push_back({static_cast<std::size_t>(it - inputs_.begin()), static_cast<std::size_t>(term)});
    }
    resolved_antecedents_.push_back(std::move(resolved));

    if (rule.consequent.variable != output_.name()) {
      throw ConfigError(label + ": consequent must refer to output '" + output_.name() + "'");
    }
    const MembershipFunction& mf = output_.term(rule.consequent.term).function;
    std::vector<double> samples(out_u.resolution);
    for (std::size_t i = 0; i < out_u.resolution; ++i) samples[i] = mf.degree(out_u.point(i));
    consequent_samples_.push_back(std::move(samples));
  }
  check_coverage();
}

std::vector<double> RuleBase::firing_strengths(const std::vector<double>& crisp) const {
  std::vector<double> strengths(rules_.size());
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    double s = 1.0;
    for (const auto& c : resolved_antecedents_[r]) {
      s = std::min(s, inputs_[c.variable].terms()[c.term].function.degree(crisp[c.variable]));
    }
    strengths[r] = s * rules_[r].weight;
  }
  return strengths;
}

void RuleBase::check_coverage() const {
  std::vector<double> crisp(inputs_.size());
  for (std::size_t v = 0; v < inputs_.size(); ++v) {
    for (std::size_t k = 0; k < inputs_.size(); ++k) crisp[k] = inputs_[k].universe().midpoint();
    const Universe& u = inputs_[v].universe();
    for (std::size_t i = 0; i < u.resolution; ++i) {
      crisp[v] = u.point(i);
      const auto strengths = firing_strengths(crisp);
      if (std::none_of(strengths.begin(), strengths.end(), [](double s) { return s > 0.0; })) {
        throw ConfigError("rule coverage gap: no rule fires for " + inputs_[v].name() + "=" +
                          std::to_string(crisp[v]));
      }
    }
  }
}

AggregatedSet evaluate_rules(const RuleBase& rule_base, const Inputs& inputs) {
  AggregatedSet out;
  std::vector<double> crisp;
  crisp.reserve(rule_base.inputs().size());
  for (const auto& v : rule_base.inputs()) {
    auto it = inputs.find(v.name());
    if (it == inputs.end()) throw ConfigError("missing value for input variable '" + v.name() + "'");
    if (!std::isfinite(it->second)) throw DomainError("non-finite value for input '" + v.name() + "'");
    crisp.push_back(v.universe().clamp(it->second));
    out.inputs[v.name()] = crisp.back();
  }

  out.universe = rule_base.output().universe();
  out.firing_strengths = rule_base.firing_strengths(crisp);
  out.degrees.assign(out.universe.resolution, 0.0);
  for (std::size_t r = 0; r < out.firing_strengths.size(); ++r) {
    const double h = out.firing_strengths[r];
    if (h <= 0.0) continue;
    const auto& consequent = rule_base.consequent_samples(r);
    for (std::size_t i = 0; i < out.degrees.size(); ++i) {
      out.degrees[i] = std::max(out.degrees[i], std::min(h, consequent[i]));
    }
  }
  return out;
}

double defuzzify_centroid(const AggregatedSet& aggregated) {
  if (aggregated.degrees.size() != aggregated.universe.resolution) {
    throw DomainError("aggregated set is not sampled on its universe grid");
  }
  double moment = 0.0;
  double area = 0.0;
  for (std::size_t i = 0; i < aggregated.degrees.size(); ++i) {
    moment += aggregated.universe.point(i) * aggregated.degrees[i];
    area += aggregated.degrees[i];
  }
  if (area <= 0.0) throw NoRuleFiredError(aggregated.inputs);
  return aggregated.universe.clamp(moment / area);
}

double infer(const RuleBase& rule_base, const Inputs& inputs) {
  return defuzzify_centroid(evaluate_rules(rule_base, inputs));
}

}  // namespace headlight::fuzzy

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

#ifndef HEADLIGHT_FUZZY_HPP_
#define HEADLIGHT_FUZZY_HPP_

// Domain-agnostic Mamdani inference: min for AND, min implication (clipping),
// max aggregation, centroid defuzzification over a uniform grid.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace headlight::fuzzy {

using Inputs = std::map<std::string, double>;

// Closed interval [min, max] discretized into `resolution` uniformly spaced
// points (both endpoints included).
struct Universe {
  double min = 0.0;
  double max = 1.0;
  std::size_t resolution = 1001;

  static constexpr std::size_t kMinResolution = 101;

  void validate() const;
  double step() const { return (max - min) / static_cast<double>(resolution - 1); }
  double point(std::size_t i) const;
  double midpoint() const { return 0.5 * (min + max); }
  double clamp(double x) const;
  bool contains(double x) const { return x >= min && x <= max; }

  bool operator==(const Universe&) const = default;
};

struct Gaussian {
  double mean;
  double sigma;

  bool operator==(const Gaussian&) const = default;
};

// Ramp up on [a,b], plateau on [b,c], ramp down on [c,d]. Degenerate edges
// (a == b or c == d) are vertical.
struct Trapezoid {
  double a;
  double b;
  double c;
  double d;

  bool operator==(const Trapezoid&) const = default;
};

class MembershipFunction {
 public:
  using Shape = std::variant<Gaussian, Trapezoid>;

  static MembershipFunction gaussian(double mean, double sigma);
  static MembershipFunction trapezoid(double a, double b, double c, double d);

  // Degree in [0,1]. Throws DomainError for non-finite x.
  double degree(double x) const;

  // Smallest interval outside of which the degree is exactly zero.
  std::pair<double, double> support() const;

  const Shape& shape() const noexcept { return shape_; }

  bool operator==(const MembershipFunction&) const = default;

 private:
  explicit MembershipFunction(Shape shape) : shape_(shape) {}

  Shape shape_;
};

inline double membership(const MembershipFunction& mf, double x) { return mf.degree(x); }

struct Term {
  std::string name;
  MembershipFunction function;
};

class LinguisticVariable {
 public:
  // Throws ConfigError on duplicate term names, no terms, or a term whose
  // support misses the universe.
  LinguisticVariable(std::string name, Universe universe, std::vector<Term> terms);

  const std::string& name() const noexcept { return name_; }
  const Universe& universe() const noexcept { return universe_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  // Index of the named term, or -1.
  int find_term(const std::string& term) const;
  const Term& term(const std::string& term) const;

 private:
  std::string name_;
  Universe universe_;
  std::vector<Term> terms_;
};

struct Fuzzified {
  std::map<std::string, double> degrees;
  double crisp = 0.0;    // value actually used (after clamping)
  bool clamped = false;  // true when the raw input was outside the universe
};

// Out-of-universe inputs are clamped to the nearest bound.
Fuzzified fuzzify(const LinguisticVariable& variable, double x);

struct Clause {
  std::string variable;
  std::string term;

  bool operator==(const Clause&) const = default;
};

struct FuzzyRule {
  std::vector<Clause> antecedents;  // conjunction
  Clause consequent;
  double weight = 1.0;  // in (0, 1]
};

// Output membership sampled on the output universe.
struct AggregatedSet {
  Universe universe;
  std::vector<double> degrees;
  std::vector<double> firing_strengths;  // one per rule, weight applied
  Inputs inputs;                         // crisp inputs after clamping
};

class RuleBase {
 public:
  // Validates references, weights and rule coverage; throws ConfigError.
  RuleBase(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
           std::vector<FuzzyRule> rules);

  const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
  const LinguisticVariable& output() const noexcept { return output_; }
  const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }

  // Firing strength of every rule for already-clamped crisp inputs, ordered
  // as inputs(). Weight applied.
  std::vector<double> firing_strengths(const std::vector<double>& crisp) const;

  // Consequent membership of rule r sampled on the output universe.
  const std::vector<double>& consequent_samples(std::size_t r) const { return consequent_samples_[r]; }

 private:
  struct ResolvedClause {
    std::size_t variable;
    std::size_t term;
  };

  void check_coverage() const;

  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<FuzzyRule> rules_;
  std::vector<std::vector<ResolvedClause>> resolved_antecedents_;
  std::vector<std::vector<double>> consequent_samples_;
};

// Throws ConfigError if an input variable has no value in `inputs`.
AggregatedSet evaluate_rules(const RuleBase& rule_base, const Inputs& inputs);

// Centroid sum(x*mu)/sum(mu) over the grid. Throws NoRuleFiredError when the
// set is identically zero.
double defuzzify_centroid(const AggregatedSet& aggregated);

double infer(const RuleBase& rule_base, const Inputs& inputs);

}  // namespace headlight::fuzzy

#endif  // HEADLIGHT_FUZZY_HPP_

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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "headlight/errors.hpp"

namespace headlight::fuzzy {
namespace {

// Independent reference formulas for the oracle tests.
double oracle_gaussian(double x, double m, double s) { return std::exp(-(x - m) * (x - m) / (2 * s * s)); }
double oracle_trapezoid(double x, const Trapezoid& t) {
  if (x < t.a || x > t.d) return 0.0;
  if (x >= t.b && x <= t.c) return 1.0;
  if (x < t.b) return (x - t.a) / (t.b - t.a);
  return (t.d - x) / (t.d - t.c);
}
double oracle_degree(const MembershipFunction& mf, double x) {
  if (const auto* g = std::get_if<Gaussian>(&mf.shape())) return oracle_gaussian(x, g->mean, g->sigma);
  return oracle_trapezoid(x, std::get<Trapezoid>(mf.shape()));
}

// Centroid of the Mamdani aggregate by trapezoidal-rule integration on `points` samples.
double oracle_centroid(const RuleBase& rb, double crisp, std::size_t points) {
  const auto& in = rb.inputs().front();
  const auto& out = rb.output();
  std::vector<double> heights;
  for (const auto& rule : rb.rules()) {
    heights.push_back(oracle_degree(in.term(rule.antecedents[0].term).function, crisp) * rule.weight);
  }
  const Universe& u = out.universe();
  const double h = (u.max - u.min) / static_cast<double>(points - 1);
  double moment = 0.0;
  double area = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = u.min + h * static_cast<double>(i);
    double mu = 0.0;
    for (std::size_t r = 0; r < heights.size(); ++r) {
      mu = std::max(mu, std::min(heights[r], oracle_degree(out.term(rb.rules()[r].consequent.term).function, x)));
    }
    const double w = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    moment += w * x * mu;
    area += w * mu;
  }
  return moment / area;
}

LinguisticVariable two_term_variable() {
  return LinguisticVariable("x", Universe{0.0, 3.0, 301},
                            {{"Low", MembershipFunction::trapezoid(0, 0, 1, 2)},
                             {"High", MembershipFunction::trapezoid(1, 2, 3, 3)}});
}

TEST(Membership, GaussianPeakAndOneSigma) {
  const auto g = MembershipFunction::gaussian(3.4, 0.5);
  EXPECT_DOUBLE_EQ(membership(g, 3.4), 1.0);
  EXPECT_NEAR(membership(g, 3.9), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(membership(g, 3.9), 0.60653, 1e-5);
}

TEST(Membership, TrapezoidRampPlateauAndEdges) {
  const auto t = MembershipFunction::trapezoid(0, 0, 1, 2);
  EXPECT_DOUBLE_EQ(t.degree(1.5), 0.5);
  EXPECT_DOUBLE_EQ(t.degree(0.0), 1.0);  // vertical left edge
  EXPECT_DOUBLE_EQ(t.degree(0.7), 1.0);
  EXPECT_DOUBLE_EQ(t.degree(2.0), 0.0);
  EXPECT_DOUBLE_EQ(t.degree(-0.1), 0.0);
  const auto spike = MembershipFunction::trapezoid(1, 1, 1, 1);
  EXPECT_DOUBLE_EQ(spike.degree(1.0), 1.0);
  EXPECT_DOUBLE_EQ(spike.degree(1.0001), 0.0);
}

TEST(Membership, RejectsNonFiniteInputAndBadShapes) {
  const auto g = MembershipFunction::gaussian(0, 1);
  EXPECT_THROW(g.degree(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(g.degree(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(MembershipFunction::gaussian(0, 0), ConfigError);
  EXPECT_THROW(MembershipFunction::gaussian(0, -1), ConfigError);
  EXPECT_THROW(MembershipFunction::trapezoid(0, 2, 1, 3), ConfigError);
}

TEST(Membership, DegreeAlwaysInUnitIntervalAndGaussianSymmetric) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100, 100);
  std::uniform_real_distribution<double> pos(1e-3, 50);
  for (int i = 0; i < 2000; ++i) {
    const double m = u(rng);
    const double s = pos(rng);
    const auto g = MembershipFunction::gaussian(m, s);
    const double x = u(rng);
    EXPECT_GE(g.degree(x), 0.0);
    EXPECT_LE(g.degree(x), 1.0);
    const double d = u(rng);
    // m + d and m - d are each rounded, so compare at machine-precision scale.
    const double up = g.degree(m + d);
    EXPECT_NEAR(up, g.degree(m - d), 1e-9 * up + 1e-300);

    double c[4] = {u(rng), u(rng), u(rng), u(rng)};
    std::sort(c, c + 4);
    const auto t = MembershipFunction::trapezoid(c[0], c[1], c[2], c[3]);
    EXPECT_GE(t.degree(x), 0.0);
    EXPECT_LE(t.degree(x), 1.0);
  }
}

TEST(Universe, ValidationAndGrid) {
  EXPECT_THROW((Universe{1, 1, 101}).validate(), ConfigError);
  EXPECT_THROW((Universe{0, 1, 100}).validate(), ConfigError);
  const Universe u{0, 10, 1001};
  EXPECT_NO_THROW(u.validate());
  EXPECT_DOUBLE_EQ(u.point(0), 0.0);
  EXPECT_DOUBLE_EQ(u.point(1000), 10.0);
  EXPECT_NEAR(u.point(340), 3.4, 1e-12);
}

TEST(LinguisticVariable, RejectsDuplicateAndOutOfRangeTerms) {
  const Universe u{0, 1, 101};
  EXPECT_THROW(LinguisticVariable("x", u,
                                  {{"A", MembershipFunction::gaussian(0, 1)}, {"A", MembershipFunction::gaussian(1, 1)}}),
               ConfigError);
  EXPECT_THROW(LinguisticVariable("x", u, {{"A", MembershipFunction::trapezoid(2, 3, 4, 5)}}), ConfigError);
  EXPECT_THROW(LinguisticVariable("x", u, {}), ConfigError);
}

TEST(Fuzzify, SymmetricCrossover) {
  const auto f = fuzzify(two_term_variable(), 1.5);
  EXPECT_DOUBLE_EQ(f.degrees.at("Low"), 0.5);
  EXPECT_DOUBLE_EQ(f.degrees.at("High"), 0.5);
  EXPECT_FALSE(f.clamped);
}

TEST(Fuzzify, UniverseMinimumAndClamping) {
  const auto v = two_term_variable();
  EXPECT_DOUBLE_EQ(fuzzify(v, 0.0).degrees.at("Low"), 1.0);
  const auto beyond = fuzzify(v, 7.0);
  const auto at_max = fuzzify(v, 3.0);
  EXPECT_TRUE(beyond.clamped);
  EXPECT_DOUBLE_EQ(beyond.crisp, 3.0);
  EXPECT_EQ(beyond.degrees, at_max.degrees);
  EXPECT_TRUE(fuzzify(v, -2.0).clamped);
  EXPECT_THROW(fuzzify(v, std::nan("")), DomainError);
}

RuleBase single_input_base(std::vector<Term> out_terms, std::vector<FuzzyRule> rules,
                           Universe out_u = {0.0, 10.0, 1001}) {
  LinguisticVariable in("x", Universe{0, 3, 301},
                        {{"Low", MembershipFunction::trapezoid(0, 0, 1, 2)},
                         {"High", MembershipFunction::trapezoid(1, 2, 3, 3)},
                         {"All", MembershipFunction::trapezoid(0, 0, 3, 3)}});
  return RuleBase({in}, LinguisticVariable("y", out_u, std::move(out_terms)), std::move(rules));
}

TEST(EvaluateRules, FullStrengthRuleReproducesConsequent) {
  const auto rb = single_input_base({{"C", MembershipFunction::gaussian(5, 1)}}, {{{{"x", "All"}}, {"y", "C"}}});
  const auto agg = evaluate_rules(rb, {{"x", 1.0}});
  ASSERT_EQ(agg.degrees.size(), 1001u);
  for (std::size_t i = 0; i < agg.degrees.size(); ++i) {
    EXPECT_DOUBLE_EQ(agg.degrees[i], oracle_gaussian(agg.universe.point(i), 5, 1));
  }
}

TEST(EvaluateRules, MaxAggregationOfIdenticalConsequents) {
  // Low(1.7) = 0.3, High(1.7) = 0.7.
  const auto rb = single_input_base({{"C", MembershipFunction::gaussian(5, 1)}},
                                    {{{{"x", "Low"}}, {"y", "C"}}, {{{"x", "High"}}, {"y", "C"}}});
  const auto agg = evaluate_rules(rb, {{"x", 1.7}});
  ASSERT_NEAR(agg.firing_strengths[0], 0.3, 1e-12);
  ASSERT_NEAR(agg.firing_strengths[1], 0.7, 1e-12);
  for (std::size_t i = 0; i < agg.degrees.size(); ++i) {
    EXPECT_NEAR(agg.degrees[i], std::min(0.7, oracle_gaussian(agg.universe.point(i), 5, 1)), 1e-12);
  }
}

TEST(EvaluateRules, MissingInputIsConfigurationError) {
  const auto rb = single_input_base({{"C", MembershipFunction::gaussian(5, 1)}}, {{{{"x", "All"}}, {"y", "C"}}});
  EXPECT_THROW(evaluate_rules(rb, {{"z", 1.0}}), ConfigError);
}

TEST(EvaluateRules, AllZeroAggregateRaisesNoRuleFiredWithInputs) {
  const Universe u{0, 2, 201};
  auto var = [&](const char* name) {
    return LinguisticVariable(name, u,
                              {{"Lo", MembershipFunction::trapezoid(0, 0, 1, 1.5)},
                               {"Hi", MembershipFunction::trapezoid(0.5, 1, 2, 2)}});
  };
  RuleBase rb({var("a"), var("b")},
              LinguisticVariable("y", Universe{0, 1, 101}, {{"C", MembershipFunction::gaussian(0.5, 0.1)}}),
              {{{{"a", "Lo"}, {"b", "Lo"}}, {"y", "C"}}, {{{"a", "Hi"}, {"b", "Hi"}}, {"y", "C"}}});
  const auto agg = evaluate_rules(rb, {{"a", 0.0}, {"b", 2.0}});
  EXPECT_TRUE(std::all_of(agg.degrees.begin(), agg.degrees.end(), [](double d) { return d == 0.0; }));
  try {
    defuzzify_centroid(agg);
    FAIL() << "expected NoRuleFiredError";
  } catch (const NoRuleFiredError& e) {
    EXPECT_EQ(e.inputs().at("a"), 0.0);
    EXPECT_EQ(e.inputs().at("b"), 2.0);
  }
}

TEST(RuleBase, RejectsBadReferencesWeightsAndCoverageGaps) {
  const std::vector<Term> out{{"C", MembershipFunction::gaussian(5, 1)}};
  EXPECT_THROW(single_input_base(out, {}), ConfigError);
  EXPECT_THROW(single_input_base(out, {{{{"x", "Nope"}}, {"y", "C"}}}), ConfigError);
  EXPECT_THROW(single_input_base(out, {{{{"q", "Low"}}, {"y", "C"}}}), ConfigError);
  EXPECT_THROW(single_input_base(out, {{{{"x", "Low"}}, {"y", "Nope"}}}), ConfigError);
  EXPECT_THROW(single_input_base(out, {{{{"x", "All"}}, {"y", "C"}, 0.0}}), ConfigError);
  EXPECT_THROW(single_input_base(out, {{{{"x", "All"}}, {"y", "C"}, 1.5}}), ConfigError);
  // Low alone leaves [2, 3] uncovered.
  EXPECT_THROW(single_input_base(out, {{{{"x", "Low"}}, {"y", "C"}}}), ConfigError);
}

TEST(Defuzzify, ClippedSymmetricGaussianCentroidIsMean) {
  const Universe u{0, 10, 1001};
  for (double h : {0.05, 0.3, 0.77, 1.0}) {
    AggregatedSet s{u, {}, {}, {}};
    for (std::size_t i = 0; i < u.resolution; ++i) s.degrees.push_back(std::min(h, oracle_gaussian(u.point(i), 5, 1.3)));
    EXPECT_NEAR(defuzzify_centroid(s), 5.0, 1e-9) << "height " << h;
  }
}

TEST(Defuzzify, RampCentroidMatchesClosedFormAndFineGrid) {
  const Universe u{0, 2, 1001};
  const auto ramp = MembershipFunction::trapezoid(0, 0, 0, 2);
  AggregatedSet s{u, {}, {}, {}};
  for (std::size_t i = 0; i < u.resolution; ++i) s.degrees.push_back(ramp.degree(u.point(i)));

  // Fine-grid numeric integration of x*mu and mu.
  const int n = 2'000'000;
  double moment = 0.0;
  double area = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = 2.0 * (i + 0.5) / n;
    moment += x * (1 - x / 2);
    area += 1 - x / 2;
  }
  const double fine = moment / area;
  EXPECT_NEAR(fine, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(defuzzify_centroid(s), 2.0 / 3.0, 0.005 * 2.0);
}

TEST(Infer, AlwaysFiringSymmetricConsequentGivesCenter) {
  const auto rb = single_input_base({{"C", MembershipFunction::trapezoid(2, 4, 6, 8)}}, {{{{"x", "All"}}, {"y", "C"}}});
  for (double x : {0.0, 1.3, 3.0}) EXPECT_NEAR(infer(rb, {{"x", x}}), 5.0, 1e-9);
}

// Random single-input rule bases with full coverage.
RuleBase random_rule_base(std::mt19937_64& rng, std::vector<double>* weights = nullptr, bool single_consequent = false) {
  std::uniform_real_distribution<double> in_pos(0, 10);
  std::uniform_real_distribution<double> out_pos(0, 100);
  std::uniform_real_distribution<double> unit(0, 1);
  std::uniform_int_distribution<int> count(2, 5);

  std::vector<Term> in_terms{{"cover", MembershipFunction::gaussian(5, 4)}};
  const int n_in = count(rng);
  for (int k = 0; k < n_in; ++k) {
    if (unit(rng) < 0.5) {
      in_terms.push_back({"i" + std::to_string(k), MembershipFunction::gaussian(in_pos(rng), 0.2 + 3 * unit(rng))});
    } else {
      double c[4] = {in_pos(rng), in_pos(rng), in_pos(rng), in_pos(rng)};
      std::sort(c, c + 4);
      in_terms.push_back({"i" + std::to_string(k), MembershipFunction::trapezoid(c[0], c[1], c[2], c[3])});
    }
  }
  std::vector<Term> out_terms;
  const int n_out = single_consequent ? 1 : count(rng);
  for (int k = 0; k < n_out; ++k) {
    if (single_consequent) {
      out_terms.push_back({"o0", MembershipFunction::gaussian(50, 2 + 10 * unit(rng))});
    } else if (unit(rng) < 0.5) {
      out_terms.push_back({"o" + std::to_string(k), MembershipFunction::gaussian(out_pos(rng), 2 + 25 * unit(rng))});
    } else {
      double c[4] = {out_pos(rng), out_pos(rng), out_pos(rng), out_pos(rng)};
      std::sort(c, c + 4);
      c[3] = std::max(c[3], c[0] + 1.0);
      out_terms.push_back({"o" + std::to_string(k), MembershipFunction::trapezoid(c[0], c[1], c[2], c[3])});
    }
  }
  std::vector<FuzzyRule> rules;
  std::uniform_int_distribution<int> pick_out(0, n_out - 1);
  for (const auto& t : in_terms) {
    const double w = weights ? (*weights)[rules.size() % weights->size()] : 1.0;
    rules.push_back({{{"x", t.name}}, {"y", out_terms[static_cast<std::size_t>(pick_out(rng))].name}, w});
  }
  return RuleBase({LinguisticVariable("x", Universe{0, 10, 1001}, in_terms)},
                  LinguisticVariable("y", Universe{0, 100, 1001}, out_terms), rules);
}

TEST(InferProperty, CentroidAgreesWithTenfoldResolutionOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> x(0, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rb = random_rule_base(rng);
    const double crisp = x(rng);
    const double got = infer(rb, {{"x", crisp}});
    const double want = oracle_centroid(rb, crisp, 10 * 1001);
    EXPECT_NEAR(got, want, 0.005 * 100) << "trial " << trial;
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 100.0);
  }
}

TEST(InferProperty, SingleConsequentOutputInvariantUnderCommonWeightScaling) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> x(0, 10);
  std::uniform_real_distribution<double> lambda(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 rng_copy = rng;
    std::vector<double> ones{1.0};
    const auto base = random_rule_base(rng, &ones, true);
    std::vector<double> scaled{lambda(rng)};
    const auto scaled_base = random_rule_base(rng_copy, &scaled, true);
    const double crisp = x(rng);
    EXPECT_NEAR(infer(base, {{"x", crisp}}), infer(scaled_base, {{"x", crisp}}), 1e-9);
  }
}

TEST(InferProperty, AddingARuleOnlyRaisesTheAggregate) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(0, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rb = random_rule_base(rng);
    auto rules = rb.rules();
    const auto& extra_in = rb.inputs().front().terms().back().name;
    rules.push_back({{{"x", extra_in}}, {"y", rb.output().terms().front().name}, 1.0});
    const RuleBase bigger(rb.inputs(), rb.output(), rules);
    const double crisp = x(rng);
    const auto a = evaluate_rules(rb, {{"x", crisp}});
    const auto b = evaluate_rules(bigger, {{"x", crisp}});
    for (std::size_t i = 0; i < a.degrees.size(); ++i) EXPECT_GE(b.degrees[i], a.degrees[i]);
  }
}

}  // namespace
}  // namespace headlight::fuzzy

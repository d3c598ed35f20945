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

#include "headlight/controller.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "headlight/errors.hpp"

namespace headlight::controller {

using fuzzy::Clause;
using fuzzy::FuzzyRule;
using fuzzy::LinguisticVariable;
using fuzzy::MembershipFunction;
using fuzzy::Term;

SuperUser::SuperUser(double factor) : factor_(factor) {
  if (!(factor >= kMin && factor <= kMax)) throw ConfigError("super-user factor must lie in [0.5, 1.5]");
}

const std::vector<std::string>& input_term_names() {
  static const std::vector<std::string> names{"VeryLow", "Low", "Comfort", "High", "VeryHigh"};
  return names;
}

const std::vector<std::string>& output_term_names() {
  static const std::vector<std::string> names{"Low", "Comfort", "High", "VeryHigh"};
  return names;
}

namespace {

template <typename Terms>
auto& find_term(Terms& terms, const std::string& name) {
  auto it = std::find_if(terms.begin(), terms.end(), [&](const GaussianTerm& t) { return t.name == name; });
  if (it == terms.end()) throw ConfigError("missing term '" + name + "'");
  return *it;
}

// (antecedent input term, consequent output term)
constexpr std::array<std::pair<const char*, const char*>, 5> kRuleTable{{
    {"VeryLow", "VeryHigh"},  // far away: keep the beam up
    {"Low", "High"},
    {"Comfort", "Comfort"},
    {"High", "High"},  // oncoming glare above comfort: overcome cabin illumination
    {"VeryHigh", "VeryHigh"},
}};

double gaussian_centroid_on(const fuzzy::Universe& u, double mean, double sigma) {
  const auto mf = MembershipFunction::gaussian(mean, sigma);
  double moment = 0.0;
  double area = 0.0;
  for (std::size_t i = 0; i < u.resolution; ++i) {
    const double x = u.point(i);
    const double mu = mf.degree(x);
    moment += x * mu;
    area += mu;
  }
  return area > 0.0 ? moment / area : mean;
}

}  // namespace

const GaussianTerm& ControllerConfig::input_term(const std::string& name) const {
  return find_term(input_terms, name);
}
GaussianTerm& ControllerConfig::input_term(const std::string& name) { return find_term(input_terms, name); }
const GaussianTerm& ControllerConfig::output_term(const std::string& name) const {
  return find_term(output_terms, name);
}
GaussianTerm& ControllerConfig::output_term(const std::string& name) { return find_term(output_terms, name); }

ControllerConfig default_config() {
  // Output of calibrate(reference_anchors(), calibration_template()); see the
  // calibration test, which regenerates these values.
  ControllerConfig c;
  c.input_terms = {
      {"VeryLow", 0.0, 0.32},
      {"Low", 3.2820312499999997, 0.3685498046875},
      {"Comfort", c.comfort.i_pc, 0.395859375},
      {"High", 3.6, 0.53},
      {"VeryHigh", 8.175, 0.86},
  };
  c.output_terms = {
      {"Low", 2000.0, 1500.0},
      {"Comfort", c.comfort.o_pc(), 2932.3974609375},
      {"High", 14406.108593750001, 200.0},
      {"VeryHigh", 19300.0, 2600.0},
  };
  return c;
}

ControllerConfig calibration_template() {
  ControllerConfig c;
  c.input_terms = {
      {"VeryLow", 0.0, 0.32},
      {"Low", 3.17, 0.38},
      {"Comfort", c.comfort.i_pc, 0.39},
      {"High", 3.6, 0.53},
      {"VeryHigh", 8.8, 0.86},
  };
  // Low is not referenced by the rule table; it completes the output partition.
  c.output_terms = {
      {"Low", 2000.0, 1500.0},
      {"Comfort", c.comfort.o_pc(), 2700.0},
      {"High", 13400.0, 310.0},
      {"VeryHigh", 19300.0, 2600.0},
  };
  return c;
}

std::vector<Anchor> reference_anchors() { return {{2.0, 1.01e4}, {3.2, 7.37e3}, {5.0, 1.41e4}}; }

void validate_structure(const ControllerConfig& config) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  const ComfortZone& cz = config.comfort;
  check(cz.i_pc_low > 0 && cz.i_pc > 0 && cz.blind_spot_distance > 0 && cz.critical_band_min > 0 &&
            cz.glare_angle_threshold_deg > 0,
        "comfort constants must be positive");
  check(cz.i_pc_low <= cz.i_pc, "comfort.i_pc_low <= comfort.i_pc");
  check(cz.critical_band_min < cz.critical_band_max, "critical_band.min < critical_band.max");

  try {
    config.input_universe.validate();
  } catch (const ConfigError& e) {
    problems.push_back(std::string("input_universe: ") + e.what());
  }
  try {
    config.output_universe.validate();
  } catch (const ConfigError& e) {
    problems.push_back(std::string("output_universe: ") + e.what());
  }

  auto check_terms = [&](const std::vector<GaussianTerm>& terms, const std::vector<std::string>& names,
                         const std::string& label) {
    check(terms.size() == names.size(), label + " must be exactly the terms of the controller");
    for (const auto& n : names) {
      const auto hits = std::count_if(terms.begin(), terms.end(), [&](const GaussianTerm& t) { return t.name == n; });
      check(hits == 1, label + " must define '" + n + "' exactly once");
    }
    for (const auto& t : terms) {
      check(std::isfinite(t.mean) && std::isfinite(t.sigma) && t.sigma > 0,
            label + " '" + t.name + "' needs finite mean and sigma > 0");
    }
  };
  check_terms(config.input_terms, input_term_names(), "input_terms");
  check_terms(config.output_terms, output_term_names(), "output_terms");

  if (problems.empty()) {
    check(config.input_term("Comfort").mean == cz.i_pc, "Comfort mean = i_pc");
    check(config.output_term("Comfort").mean == cz.o_pc(), "output Comfort mean = o_pc");
  }
  check(config.lamp.v_max > 0 && config.lamp.o_max > 0 && config.lamp.gamma > 0,
        "lamp v_max, o_max, gamma must be positive");

  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid controller config: ";
    for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
    throw ConfigError(os.str());
  }
}

double super_user_scale(double sigma, SuperUser su) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0");
  return sigma * su.factor();
}

fuzzy::RuleBase build_headlight_fis(const ControllerConfig& config, SuperUser su) {
  validate_structure(config);

  std::vector<Term> in_terms;
  for (const auto& name : input_term_names()) {
    const auto& t = config.input_term(name);
    in_terms.push_back({name, MembershipFunction::gaussian(t.mean, super_user_scale(t.sigma, su))});
  }
  std::vector<Term> out_terms;
  for (const auto& name : output_term_names()) {
    const auto& t = config.output_term(name);
    out_terms.push_back({name, MembershipFunction::gaussian(t.mean, t.sigma)});
  }

  std::vector<FuzzyRule> rules;
  for (const auto& [antecedent, consequent] : kRuleTable) {
    rules.push_back({{Clause{kInputVariable, antecedent}}, Clause{kOutputVariable, consequent}, 1.0});
  }
  return fuzzy::RuleBase({LinguisticVariable(kInputVariable, config.input_universe, std::move(in_terms))},
                         LinguisticVariable(kOutputVariable, config.output_universe, std::move(out_terms)),
                         std::move(rules));
}

HeadlightController::HeadlightController(const ControllerConfig& config, SuperUser su)
    : config_(config), su_(su), rule_base_(build_headlight_fis(config, su)) {}

Illuminance HeadlightController::command(Illuminance i_p) const {
  return Illuminance(fuzzy::infer(rule_base_, {{kInputVariable, i_p.lux()}}));
}

fuzzy::AggregatedSet HeadlightController::rule_view(Illuminance i_p) const {
  return fuzzy::evaluate_rules(rule_base_, {{kInputVariable, i_p.lux()}});
}

Illuminance control(Illuminance i_p, SuperUser su, const ControllerConfig& config) {
  return HeadlightController(config, su).command(i_p);
}

double lamp_voltage(Illuminance o_p, const LampSpec& lamp) {
  const double ratio = std::min(o_p.lux(), lamp.o_max) / lamp.o_max;
  return std::clamp(lamp.v_max * std::pow(ratio, 1.0 / lamp.gamma), 0.0, lamp.v_max);
}

SurfaceShape surface_shape(const ControllerConfig& config, std::span<const Anchor> anchors) {
  const HeadlightController poor(config, SuperUser(0.5));
  const HeadlightController normal(config, SuperUser(1.0));
  const HeadlightController good(config, SuperUser(1.5));
  auto op = [](const HeadlightController& c, double ip) { return c.command(Illuminance(ip)).lux(); };
  const double i_pc = config.comfort.i_pc;
  const double o_pc = config.comfort.o_pc();

  SurfaceShape s;
  for (const auto& a : anchors) {
    s.max_anchor_error = std::max(s.max_anchor_error, std::abs(op(normal, a.i_p) / a.o_p - 1.0));
  }

  s.comfort_op = op(normal, i_pc);
  s.fixed_point_spread = std::max(std::abs(op(poor, i_pc) / s.comfort_op - 1.0),
                                  std::abs(op(good, i_pc) / s.comfort_op - 1.0));

  s.ordering_excess = -std::numeric_limits<double>::infinity();
  for (double ip : {2.0, 2.5, 3.0, 4.0, 5.0}) {
    const double lo = op(poor, ip);
    const double mid = op(normal, ip);
    const double hi = op(good, ip);
    s.ordering_excess = std::max({s.ordering_excess, mid - lo, hi - mid});
  }

  // V shape: non-increasing up to the comfort point, non-decreasing after.
  s.monotonicity_excess = -std::numeric_limits<double>::infinity();
  double prev = op(normal, 1.0);
  for (int k = 1; k <= 40; ++k) {
    const double ip = 1.0 + 0.2 * k;
    if (ip > 8.0 + 1e-9) break;
    const double cur = op(normal, ip);
    const double step = ip <= i_pc + 1e-9 ? (cur - prev) / prev : (prev - cur) / prev;
    s.monotonicity_excess = std::max(s.monotonicity_excess, step);
    prev = cur;
  }

  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 70; ++k) {
    const double ip = 1.0 + 0.1 * k;
    const double v = op(normal, ip);
    if (v < best) {
      best = v;
      s.argmin_ip = ip;
    }
  }

  for (int k = 0; k <= 16; ++k) {
    const double ip = 3.0 + 0.05 * k;
    s.comfort_band_error = std::max(s.comfort_band_error, std::abs(op(normal, ip) / o_pc - 1.0));
  }

  const auto& comfort_out = config.output_term("Comfort");
  s.comfort_centroid_error =
      std::abs(gaussian_centroid_on(config.output_universe, comfort_out.mean, comfort_out.sigma) / o_pc - 1.0);
  return s;
}

std::vector<InvariantCheck> check_invariants(const ControllerConfig& config) {
  std::vector<InvariantCheck> checks;
  auto add = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };
  auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
  };

  try {
    validate_structure(config);
    add("structure", true, "terms, universes, comfort constants and lamp are well formed");
  } catch (const ConfigError& e) {
    add("structure", false, e.what());
  }

  const ComfortZone& cz = config.comfort;
  const double o_pc = cz.o_pc();
  add("o_pc = i_pc * blind_spot_distance^2", std::isfinite(o_pc) && o_pc > 0, "o_pc=" + fmt(o_pc));

  bool comfort_ok = false;
  double comfort_mean = std::numeric_limits<double>::quiet_NaN();
  try {
    comfort_mean = config.input_term("Comfort").mean;
    comfort_ok = comfort_mean == cz.i_pc;
  } catch (const ConfigError&) {
  }
  add("Comfort mean = i_pc", comfort_ok, "mean=" + fmt(comfort_mean) + " i_pc=" + fmt(cz.i_pc));
  if (!checks.front().passed) return checks;

  const auto anchors = reference_anchors();
  SurfaceShape s;
  try {
    s = surface_shape(config, anchors);
  } catch (const std::exception& e) {
    add("rule base builds", false, e.what());
    return checks;
  }
  add("output Comfort centroid = o_pc within 1%", s.comfort_centroid_error <= kComfortCentroidTolerance,
      "relative error " + fmt(s.comfort_centroid_error));

  std::string residuals;
  const HeadlightController normal(config, SuperUser(1.0));
  for (const auto& a : anchors) {
    const double got = normal.command(Illuminance(a.i_p)).lux();
    residuals += (residuals.empty() ? "" : " ") + fmt(a.i_p) + "lx->" + fmt(got) + " (" +
                 fmt(got / a.o_p - 1.0) + ")";
  }
  add("anchors reproduced within 10%", s.max_anchor_error <= kAnchorTolerance, residuals);
  add("O_p(i_pc) within 10% of o_pc", std::abs(s.comfort_op / o_pc - 1.0) <= kComfortPointTolerance,
      "O_p=" + fmt(s.comfort_op));
  add("surface minimum at i_pc +/- 0.2 lx", std::abs(s.argmin_ip - cz.i_pc) <= kArgminTolerance + 1e-9,
      "argmin=" + fmt(s.argmin_ip));
  add("surface V-shaped (1% slack per 0.2 lx step)", s.monotonicity_excess <= kMonotoneStepSlack,
      "worst step " + fmt(s.monotonicity_excess));
  const double slack = kOrderingSlackFraction * (config.output_universe.max - config.output_universe.min);
  add("super-user ordering", s.ordering_excess <= slack, "worst excess " + fmt(s.ordering_excess) + " lx");
  add("super-user fixed point at i_pc within 1%", s.fixed_point_spread <= kFixedPointTolerance,
      "spread " + fmt(s.fixed_point_spread));
  add("O_p within 15% of o_pc for I_p in [3.0, 3.8]", s.comfort_band_error <= kComfortBandTolerance,
      "worst " + fmt(s.comfort_band_error));
  return checks;
}

namespace {

// Tunable parameters of the calibration search, with their bounds.
struct Parameter {
  std::function<double&(ControllerConfig&)> ref;
  double lo;
  double hi;
};

std::vector<Parameter> search_parameters(const ControllerConfig& t) {
  const double in_lo = t.input_universe.min;
  const double in_span = t.input_universe.max - t.input_universe.min;
  const double out_span = t.output_universe.max - t.output_universe.min;
  const double i_pc = t.comfort.i_pc;
  const double o_pc = t.comfort.o_pc();
  auto in = [](const char* n, bool mean) {
    return [n, mean](ControllerConfig& c) -> double& {
      auto& term = c.input_term(n);
      return mean ? term.mean : term.sigma;
    };
  };
  auto out = [](const char* n, bool mean) {
    return [n, mean](ControllerConfig& c) -> double& {
      auto& term = c.output_term(n);
      return mean ? term.mean : term.sigma;
    };
  };
  return {
      {in("VeryLow", false), 0.02 * in_span, 0.25 * in_span},
      {in("Low", true), std::max(in_lo, t.comfort.i_pc_low), i_pc - 0.01 * in_span},
      {in("Low", false), 0.01 * in_span, 0.15 * in_span},
      {in("Comfort", false), 0.005 * in_span, 0.08 * in_span},
      {in("High", true), i_pc + 0.01 * in_span, in_lo + 0.7 * in_span},
      {in("High", false), 0.01 * in_span, 0.2 * in_span},
      {in("VeryHigh", true), in_lo + 0.5 * in_span, t.input_universe.max},
      {in("VeryHigh", false), 0.03 * in_span, 0.3 * in_span},
      {out("Comfort", false), 0.01 * out_span, 0.2 * out_span},
      {out("High", true), o_pc, t.output_universe.min + 0.8 * out_span},
      {out("High", false), 0.01 * out_span, 0.2 * out_span},
      {out("VeryHigh", true), t.output_universe.min + 0.6 * out_span, t.output_universe.max},
      {out("VeryHigh", false), 0.01 * out_span, 0.25 * out_span},
  };
}

// Margin kept inside every shape tolerance during the search.
constexpr double kShapeMargin = 0.8;

double shape_penalty(const SurfaceShape& s, const ControllerConfig& c) {
  const double slack = kOrderingSlackFraction * (c.output_universe.max - c.output_universe.min);
  const double o_pc = c.comfort.o_pc();
  const std::array<double, 7> normalized{
      s.fixed_point_spread / kFixedPointTolerance,
      1.0 + s.ordering_excess / slack,  // asks for strict ordering, slack left unused
      s.monotonicity_excess / kMonotoneStepSlack,
      std::abs(s.argmin_ip - c.comfort.i_pc) / kArgminTolerance,
      s.comfort_band_error / kComfortBandTolerance,
      s.comfort_centroid_error / kComfortCentroidTolerance,
      std::abs(s.comfort_op / o_pc - 1.0) / kComfortPointTolerance,
  };
  double penalty = 0.0;
  for (double v : normalized) penalty += std::max(0.0, v - kShapeMargin);
  return penalty;
}

}  // namespace

CalibrationReport calibrate(std::span<const Anchor> anchors, const ControllerConfig& config_template,
                            const CalibrationOptions& options) {
  validate_structure(config_template);
  const double i_pc = config_template.comfort.i_pc;
  if (anchors.size() < 3) throw ConfigError("calibration needs at least three anchors");
  const bool below = std::any_of(anchors.begin(), anchors.end(), [&](const Anchor& a) { return a.i_p < i_pc - 0.5; });
  const bool at = std::any_of(anchors.begin(), anchors.end(),
                              [&](const Anchor& a) { return std::abs(a.i_p - i_pc) <= 0.5; });
  const bool above = std::any_of(anchors.begin(), anchors.end(), [&](const Anchor& a) { return a.i_p > i_pc + 0.5; });
  if (!(below && at && above)) {
    throw ConfigError("calibration anchors must lie below, at (within 0.5 lx) and above the comfort point");
  }
  for (const auto& a : anchors) {
    if (!(a.o_p > 0.0) || !std::isfinite(a.i_p)) throw ConfigError("anchor outputs must be positive");
  }

  CalibrationReport report;
  auto objective = [&](const ControllerConfig& c) {
    ++report.evaluations;
    try {
      const SurfaceShape s = surface_shape(c, anchors);
      return s.max_anchor_error + shape_penalty(s, c);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  ControllerConfig best = config_template;
  double best_f = objective(best);
  const auto params = search_parameters(config_template);
  std::vector<double> steps;
  for (const auto& p : params) steps.push_back(options.initial_step_fraction * (p.hi - p.lo));

  for (int sweep = 0; sweep < options.max_sweeps && best_f > 0.0; ++sweep) {
    bool improved = false;
    for (std::size_t j = 0; j < params.size(); ++j) {
      for (double dir : {1.0, -1.0}) {
        ControllerConfig trial = best;
        double& v = params[j].ref(trial);
        const double next = std::clamp(v + dir * steps[j], params[j].lo, params[j].hi);
        if (next == v) continue;
        v = next;
        const double f = objective(trial);
        if (f < best_f) {
          best = std::move(trial);
          best_f = f;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      bool converged = true;
      for (std::size_t j = 0; j < params.size(); ++j) {
        steps[j] *= 0.5;
        if (steps[j] > options.min_step_fraction * (params[j].hi - params[j].lo)) converged = false;
      }
      if (converged) break;
    }
  }

  report.config = best;
  const HeadlightController normal(best, SuperUser(1.0));
  for (const auto& a : anchors) {
    const double r = normal.command(Illuminance(a.i_p)).lux() / a.o_p - 1.0;
    report.residuals.push_back(r);
    report.max_abs_residual = std::max(report.max_abs_residual, std::abs(r));
  }
  if (report.max_abs_residual > options.tolerance) {
    throw CalibrationError("calibration could not reach the anchor tolerance", report.residuals);
  }
  return report;
}

}  // namespace headlight::controller

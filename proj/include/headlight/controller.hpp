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

#ifndef HEADLIGHT_CONTROLLER_HPP_
#define HEADLIGHT_CONTROLLER_HPP_

#include <span>
#include <string>
#include <vector>

#include "headlight/fuzzy.hpp"
#include "headlight/photometry.hpp"

namespace headlight::controller {

using photometry::Illuminance;

inline constexpr const char* kInputVariable = "ip";
inline constexpr const char* kOutputVariable = "op";

// Human visual comfort limits the rule base is built around.
struct ComfortZone {
  double i_pc_low = 1.0;               // lx, lower end of the tolerable band
  double i_pc = 3.4;                   // lx, low-light vision limit
  double blind_spot_distance = 46.0;   // m
  double critical_band_min = 30.0;     // m
  double critical_band_max = 60.0;     // m
  double glare_angle_threshold_deg = 45.0;

  // i_pc * blind_spot_distance^2 (lux at source reference geometry).
  double o_pc() const { return i_pc * (blind_spot_distance * blind_spot_distance); }

  bool operator==(const ComfortZone&) const = default;
};

// Driver sensitivity: 0.5 poor visibility, 1.0 normal, 1.5 good visibility.
class SuperUser {
 public:
  static constexpr double kMin = 0.5;
  static constexpr double kMax = 1.5;

  SuperUser() = default;
  explicit SuperUser(double factor);  // throws ConfigError outside [0.5, 1.5]

  double factor() const noexcept { return factor_; }

 private:
  double factor_ = 1.0;
};

// Bulb curve O = o_max * (V / v_max)^gamma.
struct LampSpec {
  double v_max = 12.0;
  double o_max = 2.0e4;
  double gamma = 3.4;

  bool operator==(const LampSpec&) const = default;
};

struct GaussianTerm {
  std::string name;
  double mean = 0.0;
  double sigma = 1.0;

  bool operator==(const GaussianTerm&) const = default;
};

struct ControllerConfig {
  ComfortZone comfort;
  fuzzy::Universe input_universe{0.0, 10.0, 1001};
  fuzzy::Universe output_universe{0.0, 2.0e4, 1001};
  std::vector<GaussianTerm> input_terms;   // VeryLow, Low, Comfort, High, VeryHigh
  std::vector<GaussianTerm> output_terms;  // Low, Comfort, High, VeryHigh
  LampSpec lamp;

  const GaussianTerm& input_term(const std::string& name) const;
  GaussianTerm& input_term(const std::string& name);
  const GaussianTerm& output_term(const std::string& name) const;
  GaussianTerm& output_term(const std::string& name);

  bool operator==(const ControllerConfig&) const = default;
};

const std::vector<std::string>& input_term_names();
const std::vector<std::string>& output_term_names();

// Shipped calibrated configuration: calibrate(reference_anchors(),
// calibration_template()).
ControllerConfig default_config();

// Starting layout for calibration.
ControllerConfig calibration_template();

struct Anchor {
  double i_p;
  double o_p;
};

// Reference operating points: (2.0 lx, 1.01e4), (3.2 lx, 7.37e3), (5.0 lx, 1.41e4).
std::vector<Anchor> reference_anchors();
inline constexpr double kAnchorTolerance = 0.10;

// Structural invariants only (names, comfort constants, term placement).
// Throws ConfigError listing every violation.
void validate_structure(const ControllerConfig& config);

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Every ControllerConfig invariant including anchor reproduction, with
// residuals in the detail text. Never throws for a parseable config.
std::vector<InvariantCheck> check_invariants(const ControllerConfig& config);

// sigma * su.
double super_user_scale(double sigma, SuperUser su);

// Two rules per side of the comfort zone plus the comfort rule:
//   VeryLow -> VeryHigh, Low -> High, Comfort -> Comfort,
//   High -> High, VeryHigh -> VeryHigh.
// Input sigmas are scaled by the super-user factor.
fuzzy::RuleBase build_headlight_fis(const ControllerConfig& config, SuperUser su);

// Pre-built controller for repeated use (simulation loops).
class HeadlightController {
 public:
  HeadlightController(const ControllerConfig& config, SuperUser su);

  Illuminance command(Illuminance i_p) const;
  fuzzy::AggregatedSet rule_view(Illuminance i_p) const;

  const ControllerConfig& config() const noexcept { return config_; }
  SuperUser super_user() const noexcept { return su_; }

 private:
  ControllerConfig config_;
  SuperUser su_;
  fuzzy::RuleBase rule_base_;
};

Illuminance control(Illuminance i_p, SuperUser su, const ControllerConfig& config);

// v_max * (min(o_p, o_max) / o_max)^(1/gamma).
double lamp_voltage(Illuminance o_p, const LampSpec& lamp);

// Shape of the rule surface at the points the controller is judged on.
struct SurfaceShape {
  double max_anchor_error = 0.0;      // worst |O_p / target - 1| over the anchors
  double comfort_op = 0.0;            // O_p(i_pc, su = 1)
  double fixed_point_spread = 0.0;    // max |O_p(i_pc, su) / O_p(i_pc, 1) - 1|, su in {0.5, 1.5}
  double ordering_excess = 0.0;       // max of O_p(su_hi) - O_p(su_lo) over the ordering probes, lux
  double monotonicity_excess = 0.0;   // worst relative step against the V shape, 0.2 lx grid
  double argmin_ip = 0.0;             // argmin of O_p over [1, 8] at 0.1 lx
  double comfort_band_error = 0.0;    // max |O_p / o_pc - 1| over [3.0, 3.8]
  double comfort_centroid_error = 0.0;  // |centroid(output Comfort) / o_pc - 1|
};

inline constexpr double kFixedPointTolerance = 0.01;
inline constexpr double kOrderingSlackFraction = 0.01;  // of output span
inline constexpr double kMonotoneStepSlack = 0.01;
inline constexpr double kArgminTolerance = 0.2;          // lx
inline constexpr double kComfortBandTolerance = 0.15;
inline constexpr double kComfortCentroidTolerance = 0.01;
inline constexpr double kComfortPointTolerance = 0.10;

SurfaceShape surface_shape(const ControllerConfig& config, std::span<const Anchor> anchors);

struct CalibrationOptions {
  double tolerance = kAnchorTolerance;
  int max_sweeps = 200;
  double initial_step_fraction = 0.25;  // of each parameter's search range
  double min_step_fraction = 1e-4;
};

struct CalibrationReport {
  ControllerConfig config;
  std::vector<double> residuals;  // signed relative error per anchor
  double max_abs_residual = 0.0;
  int evaluations = 0;
};

// Deterministic coordinate descent over term means and sigmas starting from
// `config_template`. The comfort input mean and the comfort output mean stay
// pinned to the comfort zone. The objective is the worst relative anchor
// error, with penalties keeping the rule surface V-shaped around the comfort
// point and the super-user ordering intact.
// Throws ConfigError for fewer than three anchors or anchors that do not
// straddle the comfort point; CalibrationError when the best residual exceeds
// the tolerance.
CalibrationReport calibrate(std::span<const Anchor> anchors, const ControllerConfig& config_template,
                            const CalibrationOptions& options = {});

}  // namespace headlight::controller

#endif  // HEADLIGHT_CONTROLLER_HPP_

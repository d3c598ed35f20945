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

#ifndef HEADLIGHT_ENCOUNTER_HPP_
#define HEADLIGHT_ENCOUNTER_HPP_

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "headlight/controller.hpp"
#include "headlight/photometry.hpp"

namespace headlight::sim {

using photometry::PulseFeature;

struct SensorModel {
  double detection_threshold = 0.05;  // lx
  double noise_std = 0.0;             // lx, additive Gaussian
  std::size_t filter_window = 5;      // samples
  double saturation = 50.0;           // lx

  void validate() const;  // throws ConfigError
};

enum class Mode { kClosedLoop, kStandalone };

// Vehicle A drives in +x from 0, vehicle B in -x from initial_separation in
// the adjacent lane. In standalone mode only A is controlled and B holds
// uncontrolled_beam.
struct EncounterScenario {
  double initial_separation = 500.0;  // m, along the road
  double speed_a = 20.0;              // m/s
  double speed_b = 20.0;              // m/s
  double lane_offset = 3.5;           // m, between lane centerlines
  double dt = 0.05;                   // s
  Mode mode = Mode::kClosedLoop;
  double uncontrolled_beam = 2.0e4;  // lux at reference geometry
  controller::ControllerConfig config = controller::default_config();
  double super_user_a = 1.0;
  double super_user_b = 1.0;
  SensorModel sensor;
  std::uint64_t seed = 1;

  double closing_speed() const { return speed_a + speed_b; }
  // separation / closing speed plus a 10 % margin.
  double max_time() const;
  void validate() const;  // throws ConfigError naming the offending field
};

struct VehicleState {
  double position = 0.0;  // m, signed along the road
  double speed = 0.0;     // m/s, magnitude
  double lateral_offset = 0.0;
  controller::LampSpec lamp;
  bool controlled = true;
  double op = 0.0;  // lux, current commanded output
};

struct TraceSample {
  double t = 0.0;
  double r = 0.0;
  double phi = 0.0;
  double ip_a_raw = 0.0;
  double ip_a_filt = 0.0;
  double op_a = 0.0;
  double v_a = 0.0;
  double bsgf_a = 0.0;
  double ip_b_raw = 0.0;
  double ip_b_filt = 0.0;
  double op_b = 0.0;
  double v_b = 0.0;
  double bsgf_b = 0.0;

  bool operator==(const TraceSample&) const = default;
};

// Stepwise closed-loop simulation. Each vehicle reads the other's output from
// the previous step (one-step feedback delay). In-loop filtering is a
// trailing moving average over the last filter_window raw samples, since
// future samples are not available to a real-time controller.
class EncounterSimulator {
 public:
  explicit EncounterSimulator(const EncounterScenario& scenario);

  // True once the vehicles have crossed or max_time has elapsed.
  bool done() const;
  TraceSample step();

  const VehicleState& vehicle_a() const noexcept { return a_; }
  const VehicleState& vehicle_b() const noexcept { return b_; }
  double longitudinal_gap() const;

 private:
  struct Channel {
    std::optional<controller::HeadlightController> controller;
    std::deque<double> window;
  };

  double sense(Channel& channel, double source_op, const photometry::GlareGeometry& geometry, double& raw);

  EncounterScenario scenario_;
  VehicleState a_;
  VehicleState b_;
  Channel channel_a_;
  Channel channel_b_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_noise_{0.0, 1.0};
  std::size_t index_ = 0;
};

std::vector<TraceSample> simulate_encounter(const EncounterScenario& scenario);

// Uniformly sampled received-intensity record.
struct IntensitySeries {
  std::vector<double> t;
  std::vector<double> lux;

  double time(std::size_t i) const { return t[i]; }
  std::size_t size() const { return lux.size(); }
};

struct OncomingVehicle {
  double initial_gap = 1000.0;  // m along the road at t = 0
  double closing_speed = 20.0;  // m/s
  double source = 2.0e4;        // cd
};

struct TrafficStream {
  std::vector<OncomingVehicle> vehicles;  // ordered by arrival
  double lane_offset = 3.5;
  double dt = 0.05;
  double duration = 60.0;
  SensorModel sensor;
  std::uint64_t seed = 1;

  void validate() const;
};

// Sum of all oncoming contributions, noise added and saturated. A vehicle
// stops contributing once it has passed.
IntensitySeries generate_traffic_stream(const TrafficStream& stream);

// Threshold segmentation. A pulse still above threshold at the end of the
// record closes at the last sample.
std::vector<PulseFeature> detect_pulses(const IntensitySeries& series, const SensorModel& sensor);

// Raw channel A (ego) of an encounter trace as a series.
IntensitySeries ego_series(const std::vector<TraceSample>& trace);

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  bool operator==(const GrayImage&) const = default;
};

// Scales every pixel by o_p / reference_op, rounds, clamps to [0, 255].
GrayImage render_scene_brightness(const GrayImage& image, photometry::Illuminance o_p, double reference_op);
// Reference is the configured comfort output o_pc.
GrayImage render_scene_brightness(const GrayImage& image, photometry::Illuminance o_p,
                                  const controller::ControllerConfig& config);

}  // namespace headlight::sim

#endif  // HEADLIGHT_ENCOUNTER_HPP_

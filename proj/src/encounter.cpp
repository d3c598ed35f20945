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

#include "headlight/encounter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "headlight/errors.hpp"

namespace headlight::sim {

using controller::HeadlightController;
using controller::SuperUser;
using photometry::GlareGeometry;
using photometry::Illuminance;
using photometry::LuminousIntensity;

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void SensorModel::validate() const {
  require(std::isfinite(detection_threshold) && detection_threshold >= 0.0, "sensor.detection_threshold",
          "must be >= 0");
  require(std::isfinite(noise_std) && noise_std >= 0.0, "sensor.noise_std", "must be >= 0");
  require(filter_window >= 1, "sensor.filter_window", "must be >= 1");
  require(std::isfinite(saturation) && detection_threshold < saturation, "sensor.saturation",
          "must exceed detection_threshold");
}

double EncounterScenario::max_time() const { return 1.1 * initial_separation / closing_speed(); }

void EncounterScenario::validate() const {
  require(finite_positive(initial_separation), "initial_separation", "must be > 0");
  require(std::isfinite(speed_a) && speed_a >= 0.0, "speed_a", "must be >= 0");
  require(std::isfinite(speed_b) && speed_b >= 0.0, "speed_b", "must be >= 0");
  require(closing_speed() > 0.0, "speed_a+speed_b", "zero closing speed never reaches crossover");
  require(std::isfinite(lane_offset) && lane_offset >= 0.0, "lane_offset", "must be >= 0");
  require(finite_positive(dt), "dt", "must be > 0");
  require(dt < initial_separation / closing_speed(), "dt", "must be shorter than the encounter");
  require(std::isfinite(uncontrolled_beam) && uncontrolled_beam >= 0.0, "uncontrolled_beam", "must be >= 0");
  require(super_user_a >= SuperUser::kMin && super_user_a <= SuperUser::kMax, "super_user_a",
          "must lie in [0.5, 1.5]");
  require(super_user_b >= SuperUser::kMin && super_user_b <= SuperUser::kMax, "super_user_b",
          "must lie in [0.5, 1.5]");
  sensor.validate();
  try {
    controller::validate_structure(config);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

EncounterSimulator::EncounterSimulator(const EncounterScenario& scenario)
    : scenario_(scenario), rng_(scenario.seed) {
  scenario_.validate();
  const auto& lamp = scenario_.config.lamp;

  a_ = VehicleState{0.0, scenario_.speed_a, 0.0, lamp, true, 0.0};
  b_ = VehicleState{scenario_.initial_separation, scenario_.speed_b, scenario_.lane_offset, lamp,
                    scenario_.mode == Mode::kClosedLoop, 0.0};

  channel_a_.controller.emplace(scenario_.config, SuperUser(scenario_.super_user_a));
  a_.op = channel_a_.controller->command(Illuminance(0.0)).lux();
  if (b_.controlled) {
    channel_b_.controller.emplace(scenario_.config, SuperUser(scenario_.super_user_b));
    b_.op = channel_b_.controller->command(Illuminance(0.0)).lux();
  } else {
    b_.op = scenario_.uncontrolled_beam;
  }
}

double EncounterSimulator::longitudinal_gap() const { return b_.position - a_.position; }

bool EncounterSimulator::done() const {
  const double t = scenario_.dt * static_cast<double>(index_);
  const double gap = scenario_.initial_separation - scenario_.closing_speed() * t;
  return gap <= 0.0 || t > scenario_.max_time();
}

double EncounterSimulator::sense(Channel& channel, double source_op, const GlareGeometry& geometry,
                                 double& raw) {
  const SensorModel& sensor = scenario_.sensor;
  raw = photometry::received_intensity(LuminousIntensity(source_op), geometry).lux();
  if (sensor.noise_std > 0.0) raw += sensor.noise_std * unit_noise_(rng_);
  raw = std::clamp(raw, 0.0, sensor.saturation);

  channel.window.push_back(raw);
  if (channel.window.size() > sensor.filter_window) channel.window.pop_front();
  const double mean = std::accumulate(channel.window.begin(), channel.window.end(), 0.0) /
                      static_cast<double>(channel.window.size());
  const auto [mn, mx] = std::minmax_element(channel.window.begin(), channel.window.end());
  return std::clamp(mean, *mn, *mx);
}

TraceSample EncounterSimulator::step() {
  if (done()) throw DomainError("encounter already reached crossover");
  const double t = scenario_.dt * static_cast<double>(index_);
  a_.position = a_.speed * t;
  b_.position = scenario_.initial_separation - b_.speed * t;

  const double gap = longitudinal_gap();
  const GlareGeometry geometry = GlareGeometry::from_offsets(b_.lateral_offset - a_.lateral_offset, gap);

  TraceSample s;
  s.t = t;
  s.r = geometry.r();
  s.phi = geometry.phi();

  // Both vehicles sense the other's output from the previous step.
  const double source_for_a = b_.op;
  const double source_for_b = a_.op;
  s.ip_a_filt = sense(channel_a_, source_for_a, geometry, s.ip_a_raw);
  s.ip_b_filt = sense(channel_b_, source_for_b, geometry, s.ip_b_raw);

  if (channel_a_.controller) a_.op = channel_a_.controller->command(Illuminance(s.ip_a_filt)).lux();
  if (channel_b_.controller) b_.op = channel_b_.controller->command(Illuminance(s.ip_b_filt)).lux();

  s.op_a = a_.op;
  s.op_b = b_.op;
  s.v_a = controller::lamp_voltage(Illuminance(a_.op), a_.lamp);
  s.v_b = controller::lamp_voltage(Illuminance(b_.op), b_.lamp);
  s.bsgf_a = photometry::blind_spot_generating_factor(Illuminance(s.ip_a_raw), geometry).value;
  s.bsgf_b = photometry::blind_spot_generating_factor(Illuminance(s.ip_b_raw), geometry).value;

  ++index_;
  return s;
}

std::vector<TraceSample> simulate_encounter(const EncounterScenario& scenario) {
  EncounterSimulator sim(scenario);
  std::vector<TraceSample> trace;
  while (!sim.done()) trace.push_back(sim.step());
  return trace;
}

void TrafficStream::validate() const {
  require(finite_positive(dt), "dt", "must be > 0");
  require(finite_positive(duration), "duration", "must be > 0");
  require(std::isfinite(lane_offset) && lane_offset >= 0.0, "lane_offset", "must be >= 0");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto& v = vehicles[i];
    const std::string field = "vehicles[" + std::to_string(i) + "]";
    require(std::isfinite(v.initial_gap), field + ".initial_gap", "must be finite");
    require(finite_positive(v.closing_speed), field + ".closing_speed", "must be > 0");
    require(std::isfinite(v.source) && v.source >= 0.0, field + ".source", "must be >= 0");
    if (i > 0) {
      const auto& prev = vehicles[i - 1];
      require(prev.initial_gap / prev.closing_speed <= v.initial_gap / v.closing_speed, field,
              "vehicles must be ordered by arrival");
    }
  }
  sensor.validate();
}

IntensitySeries generate_traffic_stream(const TrafficStream& stream) {
  stream.validate();
  IntensitySeries series;
  const auto n = static_cast<std::size_t>(std::floor(stream.duration / stream.dt)) + 1;
  series.lux.assign(n, 0.0);
  series.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) series.t[i] = stream.dt * static_cast<double>(i);

  std::mt19937_64 rng(stream.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = series.time(i);
    double total = 0.0;
    for (const auto& v : stream.vehicles) {
      const double gap = v.initial_gap - v.closing_speed * t;
      if (gap <= 0.0) continue;
      const auto geometry = GlareGeometry::from_offsets(stream.lane_offset, gap);
      total += photometry::received_intensity(LuminousIntensity(v.source), geometry).lux();
    }
    if (stream.sensor.noise_std > 0.0) total += stream.sensor.noise_std * unit(rng);
    series.lux[i] = std::clamp(total, 0.0, stream.sensor.saturation);
  }
  return series;
}

std::vector<PulseFeature> detect_pulses(const IntensitySeries& series, const SensorModel& sensor) {
  std::vector<PulseFeature> pulses;
  const double threshold = sensor.detection_threshold;
  const std::size_t n = series.lux.size();
  if (series.t.size() != n) throw DomainError("series time and value columns differ in length");
  std::size_t i = 0;
  while (i < n) {
    if (series.lux[i] < threshold) {
      ++i;
      continue;
    }
    PulseFeature p;
    p.start_time = series.time(i);
    std::size_t peak = i;
    std::size_t j = i;
    while (j < n && series.lux[j] >= threshold) {
      if (series.lux[j] > series.lux[peak]) peak = j;
      ++j;
    }
    p.peak_time = series.time(peak);
    p.peak_lux = series.lux[peak];
    p.crossover_time = series.time(j < n ? j : n - 1);
    p.width = p.crossover_time - p.start_time;
    if (p.width > 0.0) pulses.push_back(p);
    i = j;
  }
  return pulses;
}

IntensitySeries ego_series(const std::vector<TraceSample>& trace) {
  IntensitySeries series;
  series.t.reserve(trace.size());
  series.lux.reserve(trace.size());
  for (const auto& s : trace) {
    series.t.push_back(s.t);
    series.lux.push_back(s.ip_a_raw);
  }
  return series;
}

GrayImage render_scene_brightness(const GrayImage& image, Illuminance o_p, double reference_op) {
  if (image.width == 0 || image.height == 0 || image.pixels.empty()) throw DomainError("empty image");
  if (image.pixels.size() != image.width * image.height) throw DomainError("pixel count does not match size");
  if (!(reference_op > 0.0)) throw DomainError("reference output must be > 0");
  const double gain = o_p.lux() / reference_op;
  GrayImage out = image;
  for (auto& px : out.pixels) {
    px = static_cast<std::uint8_t>(std::clamp(std::round(px * gain), 0.0, 255.0));
  }
  return out;
}

GrayImage render_scene_brightness(const GrayImage& image, Illuminance o_p,
                                  const controller::ControllerConfig& config) {
  return render_scene_brightness(image, o_p, config.comfort.o_pc());
}

}  // namespace headlight::sim

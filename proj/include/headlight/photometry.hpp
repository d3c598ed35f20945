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

#ifndef HEADLIGHT_PHOTOMETRY_HPP_
#define HEADLIGHT_PHOTOMETRY_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace headlight::photometry {

// Reference pair at which BSGF is 1: the low-light vision limit received at
// the typical blind-spot distance, on-axis.
inline constexpr double kReferenceIlluminanceLux = 3.4;
inline constexpr double kReferenceDistanceM = 46.0;

// Illuminance in lux. Non-negative.
class Illuminance {
 public:
  constexpr Illuminance() = default;
  explicit Illuminance(double lux);

  double lux() const noexcept { return lux_; }

  auto operator<=>(const Illuminance&) const = default;

 private:
  double lux_ = 0.0;
};

// Point-source luminous intensity in candela: on-axis illuminance at distance
// r is candela / r^2. A commanded output in "lux at reference geometry" is
// numerically the candela value of the equivalent point source.
class LuminousIntensity {
 public:
  constexpr LuminousIntensity() = default;
  explicit LuminousIntensity(double candela);

  double candela() const noexcept { return candela_; }

  auto operator<=>(const LuminousIntensity&) const = default;

 private:
  double candela_ = 0.0;
};

// Separation r between the lamps and the glare angle phi between the source
// direction and the observer's line of sight.
class GlareGeometry {
 public:
  // r > 0, 0 <= phi < pi/2.
  GlareGeometry(double r, double phi);

  static GlareGeometry on_axis(double r) { return GlareGeometry(r, 0.0); }
  // From lane offset and along-road distance (> 0).
  static GlareGeometry from_offsets(double lateral_offset, double longitudinal_distance);

  double r() const noexcept { return r_; }
  double phi() const noexcept { return phi_; }
  double lateral_offset() const noexcept { return lateral_offset_; }
  double longitudinal_distance() const noexcept { return longitudinal_; }

 private:
  GlareGeometry(double r, double phi, double lateral, double longitudinal)
      : r_(r), phi_(phi), lateral_offset_(lateral), longitudinal_(longitudinal) {}

  double r_;
  double phi_;
  double lateral_offset_;
  double longitudinal_;
};

struct BsgfValue {
  double value = 0.0;
};

// One sawtooth pulse of a received-intensity signal.
struct PulseFeature {
  double start_time = 0.0;      // first sample at or above threshold
  double peak_time = 0.0;       // argmax within the pulse
  double crossover_time = 0.0;  // falling edge (first sample below threshold, or end of record)
  double width = 0.0;           // crossover_time - start_time
  double peak_lux = 0.0;
};

// O_pC = I_pC * r^2. Throws DomainError for r <= 0.
Illuminance comfort_output_intensity(Illuminance i_pc, double r);

// Directional sensor reading: candela * cos(phi) / r^2.
Illuminance received_intensity(LuminousIntensity source, const GlareGeometry& geometry);

// sqrt(source / i_p); the angle is ignored, so off-axis readings bias the
// estimate high by 1/sqrt(cos phi). Throws DomainError for i_p <= 0.
double estimate_distance(Illuminance i_p, LuminousIntensity assumed_source);

// On-axis distance at which `source` first reaches `threshold`.
double detection_range(Illuminance threshold, LuminousIntensity source);

// detection_range / pulse.width. Throws DomainError for non-positive width or range.
double estimate_relative_speed(const PulseFeature& pulse, double detection_range);

// k * i_p * cos(phi) / r^2 with k = 46^2 / 3.4.
BsgfValue blind_spot_generating_factor(Illuminance i_p, const GlareGeometry& geometry);

// atan(lateral / longitudinal). Throws DomainError for longitudinal <= 0 or lateral < 0.
double glare_angle(double lateral_offset, double longitudinal_distance);

// Centered moving average; windows are truncated at the edges. For an even
// window the extra sample is taken on the right.
std::vector<double> moving_average_filter(std::span<const double> samples, std::size_t window);

}  // namespace headlight::photometry

#endif  // HEADLIGHT_PHOTOMETRY_HPP_

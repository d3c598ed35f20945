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

#include "headlight/photometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "headlight/errors.hpp"

namespace headlight::photometry {

Illuminance::Illuminance(double lux) : lux_(lux) {
  if (!(lux >= 0.0) || !std::isfinite(lux)) throw DomainError("illuminance must be finite and >= 0");
}

LuminousIntensity::LuminousIntensity(double candela) : candela_(candela) {
  if (!(candela >= 0.0) || !std::isfinite(candela)) {
    throw DomainError("luminous intensity must be finite and >= 0");
  }
}

GlareGeometry::GlareGeometry(double r, double phi)
    : r_(r), phi_(phi), lateral_offset_(r * std::sin(phi)), longitudinal_(r * std::cos(phi)) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("separation must be finite and > 0");
  if (!(phi >= 0.0 && phi < std::numbers::pi / 2)) throw DomainError("glare angle must lie in [0, pi/2)");
}

GlareGeometry GlareGeometry::from_offsets(double lateral_offset, double longitudinal_distance) {
  const double phi = glare_angle(lateral_offset, longitudinal_distance);
  return GlareGeometry(std::hypot(lateral_offset, longitudinal_distance), phi, lateral_offset,
                       longitudinal_distance);
}

Illuminance comfort_output_intensity(Illuminance i_pc, double r) {
  if (!(r > 0.0)) throw DomainError("distance must be > 0");
  return Illuminance(i_pc.lux() * (r * r));
}

Illuminance received_intensity(LuminousIntensity source, const GlareGeometry& geometry) {
  const double r = geometry.r();
  return Illuminance(source.candela() * std::cos(geometry.phi()) / (r * r));
}

double estimate_distance(Illuminance i_p, LuminousIntensity assumed_source) {
  if (!(i_p.lux() > 0.0)) throw DomainError("distance estimate needs i_p > 0");
  if (!(assumed_source.candela() > 0.0)) throw DomainError("distance estimate needs a source > 0");
  return std::sqrt(assumed_source.candela() / i_p.lux());
}

double detection_range(Illuminance threshold, LuminousIntensity source) {
  return estimate_distance(threshold, source);
}

double estimate_relative_speed(const PulseFeature& pulse, double detection_range) {
  if (!(pulse.width > 0.0)) throw DomainError("pulse width must be > 0");
  if (!(detection_range > 0.0)) throw DomainError("detection range must be > 0");
  return detection_range / pulse.width;
}

BsgfValue blind_spot_generating_factor(Illuminance i_p, const GlareGeometry& geometry) {
  constexpr double k = kReferenceDistanceM * kReferenceDistanceM / kReferenceIlluminanceLux;
  const double r = geometry.r();
  return BsgfValue{k * i_p.lux() * std::cos(geometry.phi()) / (r * r)};
}

double glare_angle(double lateral_offset, double longitudinal_distance) {
  if (!(longitudinal_distance > 0.0)) throw DomainError("longitudinal distance must be > 0");
  if (!(lateral_offset >= 0.0)) throw DomainError("lateral offset must be >= 0");
  return std::atan(lateral_offset / longitudinal_distance);
}

std::vector<double> moving_average_filter(std::span<const double> samples, std::size_t window) {
  if (samples.empty()) throw DomainError("cannot filter an empty series");
  if (window == 0 || window > samples.size()) throw DomainError("filter window must lie in [1, series length]");
  const std::size_t left = (window - 1) / 2;
  const std::size_t right = window - 1 - left;
  const std::size_t n = samples.size();

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= left ? i - left : 0;
    const std::size_t hi = std::min(n - 1, i + right);
    double sum = 0.0;
    double mn = samples[lo];
    double mx = samples[lo];
    for (std::size_t k = lo; k <= hi; ++k) {
      sum += samples[k];
      mn = std::min(mn, samples[k]);
      mx = std::max(mx, samples[k]);
    }
    // Rounding must not move the mean outside the window's range.
    out[i] = std::clamp(sum / static_cast<double>(hi - lo + 1), mn, mx);
  }
  return out;
}

}  // namespace headlight::photometry

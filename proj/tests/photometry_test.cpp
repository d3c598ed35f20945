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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "headlight/errors.hpp"

namespace headlight::photometry {
namespace {

TEST(Photometry, ComfortOutputIntensity) {
  EXPECT_NEAR(comfort_output_intensity(Illuminance(3.4), 46).lux(), 7194.4, 1e-9);
  EXPECT_NEAR(comfort_output_intensity(Illuminance(1.0), 46).lux(), 2116.0, 1e-12);
  EXPECT_THROW(comfort_output_intensity(Illuminance(1.0), 0.0), DomainError);
}

TEST(Photometry, ReceivedIntensityInverseSquare) {
  const LuminousIntensity src(7194.4);
  EXPECT_NEAR(received_intensity(src, GlareGeometry::on_axis(46)).lux(), 3.4, 1e-12);
  const double near = received_intensity(src, GlareGeometry::on_axis(20)).lux();
  const double far = received_intensity(src, GlareGeometry::on_axis(40)).lux();
  EXPECT_NEAR(near / far, 4.0, 1e-12);
  EXPECT_NEAR(received_intensity(src, GlareGeometry(46, std::numbers::pi / 3)).lux(), 1.7, 1e-12);
}

TEST(Photometry, DistanceEstimate) {
  EXPECT_NEAR(estimate_distance(Illuminance(3.4), LuminousIntensity(7194.4)), 46.0, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(1, 2000);
  std::uniform_real_distribution<double> s(100, 1e5);
  for (int i = 0; i < 1000; ++i) {
    const LuminousIntensity src(s(rng));
    const double d = r(rng);
    EXPECT_NEAR(estimate_distance(received_intensity(src, GlareGeometry::on_axis(d)), src), d, 1e-9 * d);
  }
  EXPECT_THROW(estimate_distance(Illuminance(0.0), LuminousIntensity(1.0)), DomainError);
  EXPECT_THROW(estimate_distance(Illuminance(1.0), LuminousIntensity(0.0)), DomainError);
}

TEST(Photometry, DetectionRangeAndRelativeSpeed) {
  EXPECT_NEAR(detection_range(Illuminance(0.05), LuminousIntensity(2e4)), std::sqrt(4e5), 1e-9);
  PulseFeature p;
  p.start_time = 1.0;
  p.crossover_time = 5.0;
  p.width = 4.0;
  EXPECT_DOUBLE_EQ(estimate_relative_speed(p, 200.0), 50.0);
  p.width = 0.0;
  EXPECT_THROW(estimate_relative_speed(p, 200.0), DomainError);
}

TEST(Photometry, BlindSpotFactorExamples) {
  EXPECT_NEAR(blind_spot_generating_factor(Illuminance(3.4), GlareGeometry::on_axis(46)).value, 1.0, 1e-12);
  EXPECT_NEAR(blind_spot_generating_factor(Illuminance(3.4), GlareGeometry::on_axis(23)).value, 4.0, 1e-12);
  EXPECT_NEAR(blind_spot_generating_factor(Illuminance(6.8), GlareGeometry(46, std::numbers::pi / 3)).value, 1.0,
              1e-12);
}

TEST(Photometry, BlindSpotFactorScaling) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ip(0.01, 40);
  std::uniform_real_distribution<double> r(1, 500);
  std::uniform_real_distribution<double> phi(0, 1.5);
  std::uniform_real_distribution<double> k(0.1, 10);
  for (int i = 0; i < 1000; ++i) {
    const GlareGeometry g(r(rng), phi(rng));
    const double base_ip = ip(rng);
    const double base = blind_spot_generating_factor(Illuminance(base_ip), g).value;
    const double scale = k(rng);
    EXPECT_NEAR(blind_spot_generating_factor(Illuminance(base_ip * scale), g).value, base * scale,
                1e-12 * base * scale);
    const GlareGeometry g2(g.r() * scale, g.phi());
    EXPECT_NEAR(blind_spot_generating_factor(Illuminance(base_ip), g2).value, base / (scale * scale),
                1e-12 * base / (scale * scale));
  }
}

TEST(Photometry, GlareAngle) {
  EXPECT_DOUBLE_EQ(glare_angle(0.0, 10.0), 0.0);
  EXPECT_NEAR(glare_angle(10.0, 10.0), std::numbers::pi / 4, 1e-15);
  double prev = glare_angle(3.5, 500.0);
  for (double d = 499.0; d > 0.5; d -= 1.0) {
    const double a = glare_angle(3.5, d);
    EXPECT_GT(a, prev);
    prev = a;
  }
  EXPECT_THROW(glare_angle(3.5, 0.0), DomainError);
  EXPECT_THROW(glare_angle(-1.0, 5.0), DomainError);
}

TEST(Photometry, GeometryFromOffsets) {
  const auto g = GlareGeometry::from_offsets(3.0, 4.0);
  EXPECT_DOUBLE_EQ(g.r(), 5.0);
  EXPECT_NEAR(std::cos(g.phi()), 0.8, 1e-15);
  EXPECT_THROW(GlareGeometry(0.0, 0.0), DomainError);
  EXPECT_THROW(GlareGeometry(1.0, std::numbers::pi / 2), DomainError);
}

TEST(Photometry, QuantitiesRejectNegativeAndNonFinite) {
  EXPECT_THROW(Illuminance(-1e-9), DomainError);
  EXPECT_THROW(Illuminance(std::nan("")), DomainError);
  EXPECT_THROW(LuminousIntensity(-5), DomainError);
  EXPECT_THROW(LuminousIntensity(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(MovingAverage, WindowOneIsIdentity) {
  const std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
  EXPECT_EQ(moving_average_filter(x, 1), x);
}

TEST(MovingAverage, ConstantSeriesUnchanged) {
  const std::vector<double> x(37, 0.1 + 0.2);
  for (std::size_t w : {1u, 2u, 5u, 10u, 37u}) EXPECT_EQ(moving_average_filter(x, w), x);
}

TEST(MovingAverage, StaysWithinInputRange) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(50);
    for (auto& v : x) v = u(rng);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    for (double y : moving_average_filter(x, 1 + static_cast<std::size_t>(trial % 50))) {
      EXPECT_GE(y, *lo);
      EXPECT_LE(y, *hi);
    }
  }
}

TEST(MovingAverage, NoisyPeakStaysNearTruePeak) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> noise(0, 0.02);
  const std::size_t window = 7;
  std::vector<double> x;
  for (int i = 0; i <= 200; ++i) x.push_back(1.0 - std::abs(i - 120) / 100.0 + noise(rng));
  const auto y = moving_average_filter(x, window);
  const auto peak = std::distance(y.begin(), std::max_element(y.begin(), y.end()));
  EXPECT_LE(std::abs(peak - 120), static_cast<long>(window / 2));
}

TEST(MovingAverage, RejectsBadArguments) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(moving_average_filter(x, 0), DomainError);
  EXPECT_THROW(moving_average_filter(x, 4), DomainError);
  EXPECT_THROW(moving_average_filter(std::vector<double>{}, 1), DomainError);
}

}  // namespace
}  // namespace headlight::photometry

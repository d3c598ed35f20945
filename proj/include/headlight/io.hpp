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

#ifndef HEADLIGHT_IO_HPP_
#define HEADLIGHT_IO_HPP_

// File formats: JSON controller configs, scenarios and traffic streams; CSV
// traces and intensity series; binary PGM (P5) images.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "headlight/controller.hpp"
#include "headlight/encounter.hpp"

namespace headlight::io {

using json = nlohmann::json;

json to_json(const controller::ControllerConfig& config);
// Parses without checking controller invariants (see check_invariants).
// Throws ParseError on unknown keys or wrongly typed fields.
controller::ControllerConfig config_from_json(const json& j);
controller::ControllerConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const controller::ControllerConfig& config);

json to_json(const sim::EncounterScenario& scenario);
// Missing fields take their defaults. "config" is either an inline controller
// config or a path relative to base_dir.
sim::EncounterScenario scenario_from_json(const json& j, const std::filesystem::path& base_dir = {});
sim::EncounterScenario load_scenario(const std::filesystem::path& path);

json to_json(const sim::TrafficStream& stream);
sim::TrafficStream stream_from_json(const json& j);
sim::TrafficStream load_stream(const std::filesystem::path& path);

inline constexpr const char* kTraceHeader =
    "t,r,phi,ip_a_raw,ip_a_filt,op_a,v_a,bsgf_a,ip_b_raw,ip_b_filt,op_b,v_b,bsgf_b";
inline constexpr const char* kSeriesHeader = "t,ip_raw";

// Shortest decimal representation that round-trips; never locale-dependent.
std::string format_number(double v);

void write_trace_csv(std::ostream& os, const std::vector<sim::TraceSample>& trace);
std::vector<sim::TraceSample> read_trace_csv(std::istream& is);

void write_series_csv(std::ostream& os, const sim::IntensitySeries& series);
// Accepts either a trace (ego raw channel is used) or a `t,ip_raw` series.
sim::IntensitySeries read_series_csv(std::istream& is);

sim::GrayImage read_pgm(std::istream& is);
void write_pgm(std::ostream& os, const sim::GrayImage& image);

json read_json_file(const std::filesystem::path& path);

}  // namespace headlight::io

#endif  // HEADLIGHT_IO_HPP_

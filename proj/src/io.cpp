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

#include "headlight/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "headlight/errors.hpp"

namespace headlight::io {

using controller::ControllerConfig;
using controller::GaussianTerm;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + "." + key + " has the wrong type");
  }
}

json universe_json(const fuzzy::Universe& u) {
  return {{"min", u.min}, {"max", u.max}, {"resolution", u.resolution}};
}

fuzzy::Universe universe_from(const json& j, fuzzy::Universe u, const std::string& where) {
  reject_unknown(j, {"min", "max", "resolution"}, where);
  read_field(j, "min", u.min, where);
  read_field(j, "max", u.max, where);
  read_field(j, "resolution", u.resolution, where);
  return u;
}

json terms_json(const std::vector<GaussianTerm>& terms) {
  json arr = json::array();
  for (const auto& t : terms) arr.push_back({{"name", t.name}, {"shape", "gaussian"}, {"mean", t.mean}, {"sigma", t.sigma}});
  return arr;
}

std::vector<GaussianTerm> terms_from(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array");
  std::vector<GaussianTerm> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    reject_unknown(j[i], {"name", "shape", "mean", "sigma"}, w);
    std::string shape = "gaussian";
    read_field(j[i], "shape", shape, w);
    if (shape != "gaussian") throw ParseError(w + ".shape must be \"gaussian\"");
    if (!j[i].contains("name") || !j[i].contains("mean") || !j[i].contains("sigma")) {
      throw ParseError(w + " needs name, mean and sigma");
    }
    GaussianTerm t;
    read_field(j[i], "name", t.name, w);
    read_field(j[i], "mean", t.mean, w);
    read_field(j[i], "sigma", t.sigma, w);
    terms.push_back(std::move(t));
  }
  return terms;
}

json sensor_json(const sim::SensorModel& s) {
  return {{"detection_threshold", s.detection_threshold},
          {"noise_std", s.noise_std},
          {"filter_window", s.filter_window},
          {"saturation", s.saturation}};
}

sim::SensorModel sensor_from(const json& j) {
  const std::string where = "sensor";
  reject_unknown(j, {"detection_threshold", "noise_std", "filter_window", "saturation"}, where);
  sim::SensorModel s;
  read_field(j, "detection_threshold", s.detection_threshold, where);
  read_field(j, "noise_std", s.noise_std, where);
  read_field(j, "filter_window", s.filter_window, where);
  read_field(j, "saturation", s.saturation, where);
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("malformed number '" + text + "'", line);
  return v;
}

bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

json to_json(const ControllerConfig& c) {
  const auto& cz = c.comfort;
  return {
      {"comfort",
       {{"i_pc_low", cz.i_pc_low},
        {"i_pc", cz.i_pc},
        {"blind_spot_distance", cz.blind_spot_distance},
        {"o_pc", cz.o_pc()},
        {"critical_band", {cz.critical_band_min, cz.critical_band_max}},
        {"glare_angle_threshold_deg", cz.glare_angle_threshold_deg}}},
      {"input_universe", universe_json(c.input_universe)},
      {"output_universe", universe_json(c.output_universe)},
      {"input_terms", terms_json(c.input_terms)},
      {"output_terms", terms_json(c.output_terms)},
      {"lamp", {{"v_max", c.lamp.v_max}, {"o_max", c.lamp.o_max}, {"gamma", c.lamp.gamma}}},
  };
}

ControllerConfig config_from_json(const json& j) {
  reject_unknown(j, {"comfort", "input_universe", "output_universe", "input_terms", "output_terms", "lamp"},
                 "config");
  ControllerConfig c;
  if (auto it = j.find("comfort"); it != j.end()) {
    const std::string w = "comfort";
    reject_unknown(*it, {"i_pc_low", "i_pc", "blind_spot_distance", "o_pc", "critical_band", "glare_angle_threshold_deg"},
                   w);
    auto& cz = c.comfort;
    read_field(*it, "i_pc_low", cz.i_pc_low, w);
    read_field(*it, "i_pc", cz.i_pc, w);
    read_field(*it, "blind_spot_distance", cz.blind_spot_distance, w);
    read_field(*it, "glare_angle_threshold_deg", cz.glare_angle_threshold_deg, w);
    if (auto band = it->find("critical_band"); band != it->end()) {
      if (!band->is_array() || band->size() != 2 || !(*band)[0].is_number() || !(*band)[1].is_number()) {
        throw ParseError("comfort.critical_band must be [min, max]");
      }
      cz.critical_band_min = (*band)[0].get<double>();
      cz.critical_band_max = (*band)[1].get<double>();
    }
    // o_pc is derived; a stored value only documents it and must agree.
    if (auto o = it->find("o_pc"); o != it->end()) {
      if (!o->is_number()) throw ParseError("comfort.o_pc has the wrong type");
      const double stored = o->get<double>();
      if (std::abs(stored - cz.o_pc()) > 1e-9 * std::max(1.0, std::abs(cz.o_pc()))) {
        throw ParseError("comfort.o_pc must equal i_pc * blind_spot_distance^2");
      }
    }
  }
  if (auto it = j.find("input_universe"); it != j.end()) c.input_universe = universe_from(*it, c.input_universe, "input_universe");
  if (auto it = j.find("output_universe"); it != j.end()) {
    c.output_universe = universe_from(*it, c.output_universe, "output_universe");
  }
  if (!j.contains("input_terms") || !j.contains("output_terms")) {
    throw ParseError("config needs input_terms and output_terms");
  }
  c.input_terms = terms_from(j.at("input_terms"), "input_terms");
  c.output_terms = terms_from(j.at("output_terms"), "output_terms");
  if (auto it = j.find("lamp"); it != j.end()) {
    reject_unknown(*it, {"v_max", "o_max", "gamma"}, "lamp");
    read_field(*it, "v_max", c.lamp.v_max, "lamp");
    read_field(*it, "o_max", c.lamp.o_max, "lamp");
    read_field(*it, "gamma", c.lamp.gamma, "lamp");
  }
  return c;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ControllerConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json_file(path)); }

void save_config(const std::filesystem::path& path, const ControllerConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << to_json(config).dump(2) << '\n';
}

json to_json(const sim::EncounterScenario& s) {
  return {{"initial_separation", s.initial_separation},
          {"speed_a", s.speed_a},
          {"speed_b", s.speed_b},
          {"lane_offset", s.lane_offset},
          {"dt", s.dt},
          {"mode", s.mode == sim::Mode::kClosedLoop ? "closed_loop" : "standalone"},
          {"uncontrolled_beam", s.uncontrolled_beam},
          {"config", to_json(s.config)},
          {"super_user_a", s.super_user_a},
          {"super_user_b", s.super_user_b},
          {"sensor", sensor_json(s.sensor)},
          {"seed", s.seed}};
}

sim::EncounterScenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  const std::string w = "scenario";
  reject_unknown(j,
                 {"initial_separation", "speed_a", "speed_b", "lane_offset", "dt", "mode", "uncontrolled_beam",
                  "config", "super_user_a", "super_user_b", "sensor", "seed"},
                 w);
  sim::EncounterScenario s;
  read_field(j, "initial_separation", s.initial_separation, w);
  read_field(j, "speed_a", s.speed_a, w);
  read_field(j, "speed_b", s.speed_b, w);
  read_field(j, "lane_offset", s.lane_offset, w);
  read_field(j, "dt", s.dt, w);
  read_field(j, "uncontrolled_beam", s.uncontrolled_beam, w);
  read_field(j, "super_user_a", s.super_user_a, w);
  read_field(j, "super_user_b", s.super_user_b, w);
  read_field(j, "seed", s.seed, w);
  std::string mode = "closed_loop";
  read_field(j, "mode", mode, w);
  if (mode == "closed_loop") {
    s.mode = sim::Mode::kClosedLoop;
  } else if (mode == "standalone") {
    s.mode = sim::Mode::kStandalone;
  } else {
    throw ParseError("scenario.mode must be \"closed_loop\" or \"standalone\"");
  }
  if (auto it = j.find("config"); it != j.end()) {
    if (it->is_string()) {
      s.config = load_config(base_dir / it->get<std::string>());
    } else {
      s.config = config_from_json(*it);
    }
  }
  if (auto it = j.find("sensor"); it != j.end()) s.sensor = sensor_from(*it);
  return s;
}

sim::EncounterScenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

json to_json(const sim::TrafficStream& stream) {
  json vehicles = json::array();
  for (const auto& v : stream.vehicles) {
    vehicles.push_back({{"initial_gap", v.initial_gap}, {"closing_speed", v.closing_speed}, {"source", v.source}});
  }
  return {{"vehicles", vehicles},
          {"lane_offset", stream.lane_offset},
          {"dt", stream.dt},
          {"duration", stream.duration},
          {"sensor", sensor_json(stream.sensor)},
          {"seed", stream.seed}};
}

sim::TrafficStream stream_from_json(const json& j) {
  const std::string w = "stream";
  reject_unknown(j, {"vehicles", "lane_offset", "dt", "duration", "sensor", "seed"}, w);
  sim::TrafficStream s;
  read_field(j, "lane_offset", s.lane_offset, w);
  read_field(j, "dt", s.dt, w);
  read_field(j, "duration", s.duration, w);
  read_field(j, "seed", s.seed, w);
  if (auto it = j.find("sensor"); it != j.end()) s.sensor = sensor_from(*it);
  if (auto it = j.find("vehicles"); it != j.end()) {
    if (!it->is_array()) throw ParseError("stream.vehicles must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string vw = "stream.vehicles[" + std::to_string(i) + "]";
      reject_unknown((*it)[i], {"initial_gap", "closing_speed", "source"}, vw);
      sim::OncomingVehicle v;
      read_field((*it)[i], "initial_gap", v.initial_gap, vw);
      read_field((*it)[i], "closing_speed", v.closing_speed, vw);
      read_field((*it)[i], "source", v.source, vw);
      s.vehicles.push_back(v);
    }
  }
  return s;
}

sim::TrafficStream load_stream(const std::filesystem::path& path) { return stream_from_json(read_json_file(path)); }

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw DomainError("cannot format number");
  return std::string(buf, ptr);
}

void write_trace_csv(std::ostream& os, const std::vector<sim::TraceSample>& trace) {
  os << kTraceHeader << '\n';
  for (const auto& s : trace) {
    const double row[] = {s.t,        s.r,         s.phi,  s.ip_a_raw, s.ip_a_filt, s.op_a,  s.v_a,
                          s.bsgf_a,   s.ip_b_raw,  s.ip_b_filt, s.op_b, s.v_b,    s.bsgf_b};
    bool first = true;
    for (double v : row) {
      if (!first) os << ',';
      os << format_number(v);
      first = false;
    }
    os << '\n';
  }
}

std::vector<sim::TraceSample> read_trace_csv(std::istream& is) {
  std::string line;
  if (!next_line(is, line) || line != kTraceHeader) throw ParseError("expected trace header", 1);
  std::vector<sim::TraceSample> trace;
  std::size_t line_no = 1;
  while (next_line(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 13) throw ParseError("expected 13 fields, got " + std::to_string(f.size()), line_no);
    double v[13];
    for (std::size_t k = 0; k < 13; ++k) v[k] = parse_number(f[k], line_no);
    trace.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11], v[12]});
  }
  return trace;
}

void write_series_csv(std::ostream& os, const sim::IntensitySeries& series) {
  os << kSeriesHeader << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    os << format_number(series.t[i]) << ',' << format_number(series.lux[i]) << '\n';
  }
}

sim::IntensitySeries read_series_csv(std::istream& is) {
  std::string header;
  if (!next_line(is, header)) throw ParseError("empty file", 1);
  std::size_t columns = 0;
  std::size_t value_column = 0;
  if (header == kTraceHeader) {
    columns = 13;
    value_column = 3;
  } else if (header == kSeriesHeader) {
    columns = 2;
    value_column = 1;
  } else {
    throw ParseError("unrecognized header (expected trace or series schema)", 1);
  }
  sim::IntensitySeries series;
  std::string line;
  std::size_t line_no = 1;
  while (next_line(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " fields, got " + std::to_string(f.size()), line_no);
    }
    series.t.push_back(parse_number(f[0], line_no));
    series.lux.push_back(parse_number(f[value_column], line_no));
  }
  return series;
}

namespace {

// Next whitespace-separated header token, skipping '#' comments.
std::string pgm_token(std::istream& is) {
  std::string token;
  int c;
  while ((c = is.get()) != EOF) {
    if (c == '#') {
      while ((c = is.get()) != EOF && c != '\n') {
      }
      if (!token.empty()) break;
      continue;
    }
    if (std::isspace(c)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(c));
  }
  return token;
}

std::size_t pgm_number(std::istream& is, const char* what) {
  const std::string token = pgm_token(is);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(std::string("PGM: malformed ") + what);
  }
  return v;
}

}  // namespace

sim::GrayImage read_pgm(std::istream& is) {
  if (pgm_token(is) != "P5") throw ParseError("PGM: expected binary P5 magic");
  sim::GrayImage img;
  img.width = pgm_number(is, "width");
  img.height = pgm_number(is, "height");
  const std::size_t maxval = pgm_number(is, "maxval");
  if (img.width == 0 || img.height == 0) throw ParseError("PGM: empty image");
  if (maxval == 0 || maxval > 255) throw ParseError("PGM: only 8-bit images are supported");
  img.pixels.resize(img.width * img.height);
  is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (static_cast<std::size_t>(is.gcount()) != img.pixels.size()) throw ParseError("PGM: truncated pixel data");
  return img;
}

void write_pgm(std::ostream& os, const sim::GrayImage& image) {
  os << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

}  // namespace headlight::io

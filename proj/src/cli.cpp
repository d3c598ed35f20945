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

#include "headlight/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "headlight/controller.hpp"
#include "headlight/encounter.hpp"
#include "headlight/errors.hpp"
#include "headlight/io.hpp"
#include "headlight/photometry.hpp"

namespace headlight::cli {

namespace {

using controller::ControllerConfig;
using controller::SuperUser;
using photometry::Illuminance;
using photometry::LuminousIntensity;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Range {
  double first;
  double last;
  std::size_t count;

  double at(std::size_t i) const {
    if (i + 1 == count) return last;
    return first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

// a:b:n, both endpoints included.
Range parse_range(const std::string& text, const std::string& flag) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
    throw UsageError(flag + " must look like a:b:n");
  }
  auto number = [&](std::string_view s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw UsageError(flag + ": malformed number");
    return v;
  };
  const std::string_view sv(text);
  Range r{number(sv.substr(0, c1)), number(sv.substr(c1 + 1, c2 - c1 - 1)), 0};
  const auto n = sv.substr(c2 + 1);
  auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), r.count);
  if (n.empty() || ec != std::errc() || p != n.data() + n.size()) throw UsageError(flag + ": malformed count");
  if (r.count == 0) throw UsageError(flag + ": count must be >= 1");
  if (r.count == 1 && r.first != r.last) throw UsageError(flag + ": a single point needs a == b");
  return r;
}

ControllerConfig config_or_default(const std::string& path) {
  if (path.empty()) return controller::default_config();
  ControllerConfig c = io::load_config(path);
  controller::validate_structure(c);
  return c;
}

SuperUser super_user_flag(double su) {
  if (!(su >= SuperUser::kMin && su <= SuperUser::kMax)) throw UsageError("--su must lie in [0.5, 1.5]");
  return SuperUser(su);
}

Illuminance clamp_ip(double ip, std::ostream& err) {
  if (!std::isfinite(ip)) throw UsageError("--ip must be finite");
  if (ip < 0.0) {
    err << "headlight: warning: --ip " << ip << " is negative, clamped to 0\n";
    return Illuminance(0.0);
  }
  return Illuminance(ip);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot read " + path);
  return f;
}

using io::format_number;

int cmd_infer(double ip, double su, const std::string& config_path, std::ostream& out, std::ostream& err) {
  const ControllerConfig config = config_or_default(config_path);
  const auto o_p = controller::control(clamp_ip(ip, err), super_user_flag(su), config);
  out << "op_lux=" << format_number(o_p.lux()) << " lamp_volts=" << format_number(controller::lamp_voltage(o_p, config.lamp))
      << '\n';
  return kOk;
}

int cmd_surface(const std::string& ip_range, const std::string& su_range, const std::string& config_path,
                std::ostream& out) {
  const Range ips = parse_range(ip_range, "--ip-range");
  const Range sus = parse_range(su_range, "--su-range");
  const ControllerConfig config = config_or_default(config_path);
  std::vector<controller::HeadlightController> controllers;
  for (std::size_t j = 0; j < sus.count; ++j) controllers.emplace_back(config, super_user_flag(sus.at(j)));

  out << "ip,su,op\n";
  for (std::size_t i = 0; i < ips.count; ++i) {
    const double ip = ips.at(i);
    if (ip < 0.0) throw UsageError("--ip-range must not include negative values");
    for (std::size_t j = 0; j < sus.count; ++j) {
      out << format_number(ip) << ',' << format_number(sus.at(j)) << ','
          << format_number(controllers[j].command(Illuminance(ip)).lux()) << '\n';
    }
  }
  return kOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_path, std::ostream& out) {
  const sim::EncounterScenario scenario = io::load_scenario(scenario_path);
  scenario.validate();
  const auto trace = sim::simulate_encounter(scenario);
  {
    auto f = open_out(out_path);
    io::write_trace_csv(f, trace);
  }
  const auto pulses = sim::detect_pulses(sim::ego_series(trace), scenario.sensor);
  double min_r = std::numeric_limits<double>::infinity();
  double max_bsgf = 0.0;
  for (const auto& s : trace) {
    min_r = std::min(min_r, s.r);
    max_bsgf = std::max({max_bsgf, s.bsgf_a, s.bsgf_b});
  }
  out << "samples=" << trace.size() << " pulses=" << pulses.size() << " min_r=" << format_number(min_r)
      << " max_bsgf=" << format_number(max_bsgf) << '\n';
  return kOk;
}

int cmd_stream(const std::string& spec_path, const std::string& out_path, std::ostream& out) {
  const sim::TrafficStream stream = io::load_stream(spec_path);
  const auto series = sim::generate_traffic_stream(stream);
  {
    auto f = open_out(out_path);
    io::write_series_csv(f, series);
  }
  out << "samples=" << series.size() << " pulses=" << sim::detect_pulses(series, stream.sensor).size() << '\n';
  return kOk;
}

int cmd_pulses(const std::string& trace_path, double source_cd, double threshold, std::ostream& out) {
  sim::SensorModel sensor;
  sensor.detection_threshold = threshold;
  sensor.validate();
  if (!(source_cd > 0.0)) throw UsageError("--source must be > 0");
  auto f = open_in(trace_path);
  const auto series = io::read_series_csv(f);
  const LuminousIntensity source(source_cd);
  const double range = photometry::detection_range(Illuminance(threshold), source);

  out << "start,peak,width,est_speed,est_min_distance\n";
  for (const auto& p : sim::detect_pulses(series, sensor)) {
    out << format_number(p.start_time) << ',' << format_number(p.peak_time) << ',' << format_number(p.width) << ','
        << format_number(photometry::estimate_relative_speed(p, range)) << ','
        << format_number(photometry::estimate_distance(Illuminance(p.peak_lux), source)) << '\n';
  }
  return kOk;
}

int cmd_render(const std::string& image_path, double ip, double su, const std::string& config_path,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ControllerConfig config = config_or_default(config_path);
  auto f = open_in(image_path);
  const sim::GrayImage image = io::read_pgm(f);
  const controller::HeadlightController ctl(config, super_user_flag(su));
  const Illuminance o_p = ctl.command(clamp_ip(ip, err));
  // Normalize by the controller's own comfort output so comfort input leaves
  // the scene unchanged.
  const double reference = ctl.command(Illuminance(config.comfort.i_pc)).lux();
  const sim::GrayImage rendered = sim::render_scene_brightness(image, o_p, reference);
  {
    auto o = open_out(out_path);
    io::write_pgm(o, rendered);
  }
  double sum = 0.0;
  for (auto px : rendered.pixels) sum += px;
  out << "op_lux=" << format_number(o_p.lux()) << " gain=" << format_number(o_p.lux() / reference)
      << " mean_level=" << format_number(sum / static_cast<double>(rendered.pixels.size())) << '\n';
  return kOk;
}

int cmd_validate(const std::string& config_path, std::ostream& out) {
  const ControllerConfig config = io::load_config(config_path);
  bool all = true;
  for (const auto& c : controller::check_invariants(config)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? kOk : kFailure;
}

int cmd_calibrate(const std::string& template_path, const std::string& out_path, std::ostream& out) {
  const ControllerConfig tmpl = template_path.empty() ? controller::calibration_template() : io::load_config(template_path);
  const auto anchors = controller::reference_anchors();
  const auto report = controller::calibrate(anchors, tmpl);
  io::save_config(out_path, report.config);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    out << "anchor ip=" << format_number(anchors[i].i_p) << " target=" << format_number(anchors[i].o_p)
        << " residual=" << format_number(report.residuals[i]) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy headlight-intensity controller"};
  app.name("headlight");
  app.require_subcommand(1);

  double ip = 0.0;
  double su = 1.0;
  std::string config_path;
  std::string path_a;
  std::string path_b;
  std::string ip_range;
  std::string su_range;
  double source_cd = 2.0e4;
  double threshold = sim::SensorModel{}.detection_threshold;

  auto* infer = app.add_subcommand("infer", "Single inference: O_p and lamp voltage for one I_p");
  infer->add_option("--ip", ip, "Incoming illuminance, lx")->required();
  infer->add_option("--su", su, "Super-user factor in [0.5, 1.5]");
  infer->add_option("--config", config_path, "Controller config JSON");

  auto* surface = app.add_subcommand("surface", "Rule surface O_p(I_p, su) as CSV");
  surface->add_option("--ip-range", ip_range, "a:b:n")->required();
  surface->add_option("--su-range", su_range, "a:b:m")->required();
  surface->add_option("--config", config_path, "Controller config JSON");

  auto* simulate = app.add_subcommand("simulate", "Two-vehicle encounter trace");
  simulate->add_option("--scenario", path_a, "Scenario JSON")->required();
  simulate->add_option("--out", path_b, "Trace CSV")->required();

  auto* stream = app.add_subcommand("stream", "Received intensity of an oncoming traffic stream");
  stream->add_option("--spec", path_a, "Stream JSON")->required();
  stream->add_option("--out", path_b, "Series CSV")->required();

  auto* pulses = app.add_subcommand("pulses", "Pulse table with speed and distance estimates");
  pulses->add_option("--trace", path_a, "Trace or series CSV")->required();
  pulses->add_option("--source", source_cd, "Assumed oncoming source, cd");
  pulses->add_option("--threshold", threshold, "Detection threshold, lx");

  auto* render = app.add_subcommand("render", "Scale a grayscale night scene by the commanded beam");
  render->add_option("--image", path_a, "Input PGM (P5)")->required();
  render->add_option("--ip", ip, "Incoming illuminance, lx")->required();
  render->add_option("--su", su, "Super-user factor in [0.5, 1.5]");
  render->add_option("--config", config_path, "Controller config JSON");
  render->add_option("--out", path_b, "Output PGM")->required();

  auto* validate = app.add_subcommand("validate", "Check every controller config invariant");
  validate->add_option("--config", config_path, "Controller config JSON")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Fit term parameters to the reference anchors");
  calibrate->add_option("--template", config_path, "Starting config JSON");
  calibrate->add_option("--out", path_b, "Output config JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "headlight: usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*infer) return cmd_infer(ip, su, config_path, out, err);
    if (*surface) return cmd_surface(ip_range, su_range, config_path, out);
    if (*simulate) return cmd_simulate(path_a, path_b, out);
    if (*stream) return cmd_stream(path_a, path_b, out);
    if (*pulses) return cmd_pulses(path_a, source_cd, threshold, out);
    if (*render) return cmd_render(path_a, ip, su, config_path, path_b, out, err);
    if (*validate) return cmd_validate(config_path, out);
    if (*calibrate) return cmd_calibrate(config_path, path_b, out);
  } catch (const UsageError& e) {
    err << "headlight: usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "headlight: invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "headlight: parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "headlight: domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    err << "headlight: i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const CalibrationError& e) {
    err << "headlight: calibration failed: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "headlight: error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace headlight::cli

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

#include "headlight/errors.hpp"

#include <sstream>

namespace headlight {

namespace {

std::string describe_inputs(const std::map<std::string, double>& inputs) {
  std::ostringstream os;
  os << "no rule fired for inputs {";
  bool first = true;
  for (const auto& [name, value] : inputs) {
    if (!first) os << ", ";
    os << name << '=' << value;
    first = false;
  }
  os << '}';
  return os.str();
}

std::string with_line(const std::string& what, std::size_t line) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

NoRuleFiredError::NoRuleFiredError(std::map<std::string, double> inputs)
    : std::runtime_error(describe_inputs(inputs)), inputs_(std::move(inputs)) {}

CalibrationError::CalibrationError(const std::string& what, std::vector<double> residuals)
    : std::runtime_error(what), residuals_(std::move(residuals)) {}

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

}  // namespace headlight

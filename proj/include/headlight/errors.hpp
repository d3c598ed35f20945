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

#ifndef HEADLIGHT_ERRORS_HPP_
#define HEADLIGHT_ERRORS_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace headlight {

// Argument outside the mathematical domain of an operation (non-finite input,
// r <= 0, empty series, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A configuration, rule base, or scenario violates one of its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Aggregated output set is identically zero. Commanding 0 lx would switch the
// lamp off, so this is never silently mapped to a number.
class NoRuleFiredError : public std::runtime_error {
 public:
  explicit NoRuleFiredError(std::map<std::string, double> inputs);

  const std::map<std::string, double>& inputs() const noexcept { return inputs_; }

 private:
  std::map<std::string, double> inputs_;
};

// Calibration could not bring every anchor inside tolerance.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(const std::string& what, std::vector<double> residuals);

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// Malformed text or binary input (CSV, PGM, JSON). line is 1-based, 0 if n/a.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace headlight

#endif  // HEADLIGHT_ERRORS_HPP_

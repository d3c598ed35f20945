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

#ifndef HEADLIGHT_CLI_HPP_
#define HEADLIGHT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace headlight::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;  // checks failed, calibration failed, no rule fired
inline constexpr int kUsage = 2;    // bad flags, invalid config/scenario, malformed input
inline constexpr int kIo = 3;       // unreadable or unwritable file

// Runs one invocation. args excludes the program name. Data goes to out,
// diagnostics (one line per error or warning) to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace headlight::cli

#endif  // HEADLIGHT_CLI_HPP_

// gtc/cli.h

// Copyright 2026  The GTC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GTC_CLI_H_
#define GTC_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace gtc::cli {

// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kInfeasible = 3;

// Runs the `gtc` command line. `args` excludes the program name. Results
// go to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace gtc::cli

#endif  // GTC_CLI_H_

// Copyright 2026 The Coalition Sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef COALITION_CLI_H_
#define COALITION_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace coalition {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoStable = 2;

// Runs the command line `args` (without the program name):
//   analyze <instance.json> [--mechanism M] [--dynamics greedy|improve]
//           [--max-steps N] [--format json|text|csv] [--seed N]
//           [--sidecar FILE] [--output FILE] [--no-timestamp]
//   generate <equal-tight|usage-lower|taxi-cycle|random> --out FILE
//           [--K K] [--s S] [--form F] [--family F] [--n N] [--seed N]
//           [--overshoot X] [--sidecar FILE]
//   sweep <config.json> [--jobs N] [--output FILE] [--summary FILE]
// Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coalition

#endif  // COALITION_CLI_H_

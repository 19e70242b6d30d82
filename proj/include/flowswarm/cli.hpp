// Copyright 2026 The flowswarm Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWSWARM_CLI_HPP
#define FLOWSWARM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace flowswarm::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationFailure = 1;
inline constexpr int kInfeasible = 2;
inline constexpr int kInternalError = 3;

// Runs one command line; args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flowswarm::cli

#endif  // FLOWSWARM_CLI_HPP

// Copyright 2026 The wcprsp Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wcprsp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kParameterError = 2;
inline constexpr int kInfeasible = 3;

// Runs one command line (args excludes the program name). The artifact goes
// to --output when given, else to `out`; the human-readable summary goes to
// `out` when --output is given, else to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wcprsp::cli

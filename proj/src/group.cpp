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

#include "wcprsp/group.hpp"

#include <string>

namespace wcprsp {

std::string to_string(GroupElement g) {
  std::string s = g.x_bit() ? "X" : "";
  if (g.angle() != 0 || !g.x_bit()) {
    if (!s.empty()) s += "*";
    s += "Z(" + std::to_string(g.angle()) + "pi/4)";
  }
  return s;
}

std::string to_string(PlusState s) { return "|+_" + std::to_string(s.angle()) + "pi/4>"; }

}  // namespace wcprsp

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

#include <cmath>
#include <string>

#include "wcprsp/errors.hpp"

namespace wcprsp {

// A real number in [0, 1]. Construction outside the interval throws.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ParameterError("probability out of [0,1]: " + std::to_string(value));
    }
  }

  double value() const { return value_; }
  operator double() const { return value_; }  // NOLINT: reads like a number

 private:
  double value_ = 0.0;
};

}  // namespace wcprsp

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

#include <cstdint>
#include <span>

namespace wcprsp {

// Two-sided z for 99.9% coverage.
inline constexpr double kZ999 = 3.2905267314919255;

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ999);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Pearson goodness-of-fit of observed counts against expected probabilities.
// Cells with expected count below `min_expected` are pooled into their
// neighbour so the chi-square approximation holds. `probabilities` need not
// sum to one; the residual mass forms an extra cell whose observed count is
// total - sum(observed).
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities,
                               double min_expected = 5.0);

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int degrees_of_freedom);

}  // namespace wcprsp

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

#include "wcprsp/statistics.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <vector>

#include "wcprsp/errors.hpp"

namespace wcprsp {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  if (successes > trials) throw ParameterError("wilson_interval: successes > trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  // The endpoints are exact at the edges; rounding would otherwise leave ~1e-20.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
          successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

double chi_square_sf(double statistic, int dof) {
  if (dof <= 0) throw ParameterError("chi_square_sf: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> observed,
                               std::span<const double> probabilities,
                               double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw ParameterError("chi_square_gof: size mismatch");
  }
  const double total = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> exp_counts;
  exp_counts.reserve(probabilities.size() + 1);
  double mass = 0.0;
  for (double p : probabilities) {
    exp_counts.push_back(p * total);
    mass += p;
  }
  // The residual cell only carries expectation; all observations are already
  // in the listed cells by construction of the callers.
  if (mass < 1.0 - 1e-12) {
    obs.push_back(0.0);
    exp_counts.push_back((1.0 - mass) * total);
  }

  // Pool from the tails inward until every cell is large enough.
  std::vector<double> po, pe;
  double acc_o = 0.0, acc_e = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    acc_o += obs[i];
    acc_e += exp_counts[i];
    if (acc_e >= min_expected) {
      po.push_back(acc_o);
      pe.push_back(acc_e);
      acc_o = acc_e = 0.0;
    }
  }
  if (acc_e > 0.0 || acc_o > 0.0) {
    if (pe.empty()) {
      po.push_back(acc_o);
      pe.push_back(acc_e);
    } else {
      po.back() += acc_o;
      pe.back() += acc_e;
    }
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < po.size(); ++i) {
    if (pe[i] > 0.0) r.statistic += (po[i] - pe[i]) * (po[i] - pe[i]) / pe[i];
  }
  r.degrees_of_freedom = static_cast<int>(po.size()) - 1;
  r.p_value = r.degrees_of_freedom > 0 ? chi_square_sf(r.statistic, r.degrees_of_freedom) : 1.0;
  return r;
}

}  // namespace wcprsp

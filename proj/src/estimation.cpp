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

#include "wcprsp/estimation.hpp"

#include <string>

#include "wcprsp/errors.hpp"

namespace wcprsp {

Coefficients coefficients(double nu, double nu_prime) {
  if (!(nu > 0.0) || !(nu_prime > nu) || !std::isfinite(nu_prime)) {
    throw ParameterError("coefficients: need 0 < nu < nu_prime, got nu=" +
                         std::to_string(nu) + ", nu_prime=" + std::to_string(nu_prime));
  }
  Coefficients k;
  k.nu = nu;
  k.nu_prime = nu_prime;
  k.a = std::exp(-nu);
  k.b = nu * k.a;
  k.c = nu * nu * k.a / 2.0;
  k.a_prime = std::exp(-nu_prime);
  k.b_prime = nu_prime * k.a_prime;
  k.c_prime = nu_prime * nu_prime * k.a_prime / 2.0;
  k.discriminant = nu * nu_prime / 2.0 * std::exp(-nu - nu_prime) * (nu_prime - nu);
  return k;
}

double statistic_T(const AcceptedCounts& counts, const Coefficients& k) {
  return (k.c_prime * static_cast<double>(counts.p_low) -
          k.c * static_cast<double>(counts.p_high)) /
         k.discriminant;
}

double reference_t(const Coefficients& k, double eta, std::uint64_t n_pulses) {
  return (k.c_prime * k.detect(eta) - k.c * k.detect_prime(eta)) / k.discriminant *
         (static_cast<double>(n_pulses) / 2.0);
}

const char* to_string(Decision d) { return d == Decision::kAccept ? "Accept" : "Abort"; }

TwoIntensityEstimator::TwoIntensityEstimator(const Coefficients& coeffs, double eta,
                                             std::uint64_t n_pulses, double delta0)
    : coeffs_(coeffs), eta_(eta), n_pulses_(n_pulses), delta0_(delta0) {
  if (!(delta0 > 0.0)) throw ParameterError("estimation: Delta0 must be > 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("estimation: eta must lie in [0,1]");
  t_ = reference_t(coeffs_, eta_, n_pulses_);
  threshold_ = t_ - delta0_ * static_cast<double>(n_pulses_) / 2.0;
}

AcceptedCounts TwoIntensityEstimator::tally(std::span<const std::uint32_t> accepted,
                                            const IntensityLabels& labels) const {
  if (labels.size() != n_pulses_ || labels.class_intensity.size() != 2) {
    throw ParameterError("estimation: labels must cover N pulses in exactly two classes");
  }
  AcceptedCounts counts;
  for (std::uint32_t i : accepted) {
    if (i >= n_pulses_) {
      throw ProtocolViolation("estimation: accepted index " + std::to_string(i) +
                              " outside [0, " + std::to_string(n_pulses_) + ")");
    }
    if (labels.class_of[i] == 0) {
      ++counts.p_low;
    } else {
      ++counts.p_high;
    }
  }
  return counts;
}

Decision TwoIntensityEstimator::decide_counts(const AcceptedCounts& counts) const {
  return decide_statistic(statistic_T(counts, coeffs_));
}

Decision TwoIntensityEstimator::decide(std::span<const std::uint32_t> accepted,
                                       const IntensityLabels& labels) const {
  return decide_counts(tally(accepted, labels));
}

Decision algorithm_b(std::span<const std::uint32_t> accepted, const IntensityLabels& labels,
                     const Coefficients& coeffs, double eta, std::uint64_t n_pulses,
                     double delta0) {
  return TwoIntensityEstimator(coeffs, eta, n_pulses, delta0).decide(accepted, labels);
}

double multiphoton_tail(double nu) {
  // 1 - e^{-nu}(1 + nu + nu^2/2); the series avoids cancellation below 0.1.
  if (nu < 0.1) {
    double term = nu * nu * nu / 6.0, sum = 0.0;
    for (int n = 3; n < 40 && term > sum * 1e-18; ++n) {
      sum += term;
      term *= nu / (n + 1);
    }
    return sum * std::exp(-nu);
  }
  return -std::expm1(-nu) - nu * std::exp(-nu) * (1.0 + nu / 2.0);
}

}  // namespace wcprsp

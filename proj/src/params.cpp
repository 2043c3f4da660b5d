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

#include "wcprsp/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcprsp/errors.hpp"

namespace wcprsp {

ProtocolParams ProtocolParams::with_intensities(std::vector<double> intensities, double eta,
                                                std::uint32_t batch_size) {
  if (intensities.empty()) throw ParameterError("protocol: N must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("protocol: eta must lie in [0,1]");
  if (batch_size > intensities.size()) {
    throw ParameterError("protocol: K=" + std::to_string(batch_size) + " exceeds N=" +
                         std::to_string(intensities.size()));
  }
  for (double mu : intensities) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
      throw ParameterError("protocol: intensities must be finite and >= 0");
    }
  }
  ProtocolParams p;
  p.n_pulses = static_cast<std::uint32_t>(intensities.size());
  p.batch_size = batch_size;
  p.eta = eta;
  std::vector<double> distinct = intensities;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() > 255) throw ParameterError("protocol: too many intensity classes");
  p.labels.class_intensity = distinct;
  p.labels.class_of.reserve(intensities.size());
  for (double mu : intensities) {
    const auto it = std::lower_bound(distinct.begin(), distinct.end(), mu);
    p.labels.class_of.push_back(static_cast<std::uint8_t>(it - distinct.begin()));
  }
  p.intensities = std::move(intensities);
  return p;
}

ProtocolParams ProtocolParams::two_intensity(double nu, double nu_prime, double eta,
                                             std::uint32_t n_pulses, std::uint32_t batch_size) {
  if (n_pulses < 2 || n_pulses % 2 != 0) {
    throw ParameterError("protocol: two-intensity layout needs even N >= 2");
  }
  if (!(nu > 0.0 && nu < nu_prime)) {
    throw ParameterError("protocol: need 0 < nu < nu_prime");
  }
  std::vector<double> mu(n_pulses, nu);
  std::fill(mu.begin() + n_pulses / 2, mu.end(), nu_prime);
  return with_intensities(std::move(mu), eta, batch_size);
}

ProtocolParams ProtocolParams::two_intensity_from_delta(double nu, double nu_prime, double eta,
                                                        std::uint32_t n_pulses, double delta) {
  const Coefficients k = coefficients(nu, nu_prime);
  return two_intensity(nu, nu_prime, eta, n_pulses,
                       batch_size_from_delta(k, eta, n_pulses, delta));
}

std::uint32_t ProtocolParams::pulses_in_class(std::uint8_t cls) const {
  return static_cast<std::uint32_t>(
      std::count(labels.class_of.begin(), labels.class_of.end(), cls));
}

std::uint32_t batch_size_from_delta(const Coefficients& k, double eta,
                                    std::uint32_t n_pulses, double delta) {
  const double mean_rate = (k.detect(eta) + k.detect_prime(eta)) / 2.0;
  if (!(delta > 0.0)) throw ConstraintError("0 < delta", "delta=" + std::to_string(delta));
  if (!(delta < mean_rate)) {
    throw ConstraintError("delta < (2 - a^eta - a'^eta)/2",
                          "delta=" + std::to_string(delta) +
                              ", limit=" + std::to_string(mean_rate));
  }
  return static_cast<std::uint32_t>(std::floor((mean_rate - delta) * n_pulses));
}

double effective_delta(const Coefficients& k, double eta, std::uint32_t n_pulses,
                       std::uint32_t batch_size) {
  return (k.detect(eta) + k.detect_prime(eta)) / 2.0 -
         static_cast<double>(batch_size) / static_cast<double>(n_pulses);
}

}  // namespace wcprsp

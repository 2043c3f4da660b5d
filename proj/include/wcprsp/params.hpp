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
#include <vector>

#include "wcprsp/estimation.hpp"

namespace wcprsp {

// Public protocol constants: N pulses, batch size K, channel transmittance
// eta, and the per-pulse intensities mu_1..mu_N in original (un-permuted)
// order. `labels` groups equal intensities into ascending classes.
struct ProtocolParams {
  std::uint32_t n_pulses = 0;
  std::uint32_t batch_size = 0;
  double eta = 1.0;
  std::vector<double> intensities;
  IntensityLabels labels;

  // Arbitrary intensities; throws ParameterError on invalid input.
  static ProtocolParams with_intensities(std::vector<double> intensities, double eta,
                                         std::uint32_t batch_size);

  // Two-intensity layout: indices [0, N/2) at nu, [N/2, N) at nu_prime.
  // N must be even and 0 < nu < nu_prime.
  static ProtocolParams two_intensity(double nu, double nu_prime, double eta,
                                      std::uint32_t n_pulses, std::uint32_t batch_size);

  // As above with K = floor(((2 - e^{-eta nu} - e^{-eta nu'})/2 - delta) N).
  static ProtocolParams two_intensity_from_delta(double nu, double nu_prime, double eta,
                                                 std::uint32_t n_pulses, double delta);

  bool is_two_intensity() const { return labels.class_intensity.size() == 2; }
  std::uint32_t pulses_in_class(std::uint8_t cls) const;
};

// K implied by delta. Throws ConstraintError if delta is outside
// (0, (2 - a^eta - a'^eta)/2).
std::uint32_t batch_size_from_delta(const Coefficients& k, double eta,
                                    std::uint32_t n_pulses, double delta);

// delta = (2 - a^eta - a'^eta)/2 - K/N: the slack a given K actually leaves.
double effective_delta(const Coefficients& k, double eta, std::uint32_t n_pulses,
                       std::uint32_t batch_size);

}  // namespace wcprsp

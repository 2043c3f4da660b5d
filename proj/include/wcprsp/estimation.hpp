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
#include <cstdint>
#include <span>
#include <vector>

namespace wcprsp {

// Photon-number probabilities of the two intensities nu < nu'.
//   a = e^{-nu}, b = nu e^{-nu}, c = nu^2 e^{-nu} / 2, primed likewise.
// discriminant = b c' - b' c = (nu nu' / 2) e^{-nu-nu'} (nu' - nu) > 0.
struct Coefficients {
  double nu = 0.0;
  double nu_prime = 0.0;
  double a = 0.0, b = 0.0, c = 0.0;
  double a_prime = 0.0, b_prime = 0.0, c_prime = 0.0;
  double discriminant = 0.0;

  // e^{-eta nu} and e^{-eta nu'}: vacuum probabilities after loss.
  double a_eta(double eta) const { return std::exp(-eta * nu); }
  double a_prime_eta(double eta) const { return std::exp(-eta * nu_prime); }
  // 1 - e^{-eta nu}, computed without cancellation.
  double detect(double eta) const { return -std::expm1(-eta * nu); }
  double detect_prime(double eta) const { return -std::expm1(-eta * nu_prime); }
};

// Throws ParameterError unless 0 < nu < nu_prime (the statistic divides by
// the discriminant, which vanishes at nu == nu_prime).
Coefficients coefficients(double nu, double nu_prime);

// 1 - e^{-nu}(1 + nu + nu^2/2) = Pr[Poisson(nu) >= 3], without cancellation
// at small nu.
double multiphoton_tail(double nu);

// Accepted pulses by intensity: P at nu, P' at nu'.
struct AcceptedCounts {
  std::uint64_t p_low = 0;
  std::uint64_t p_high = 0;
};

// T = (c' P - c P') / (b c' - b' c).
double statistic_T(const AcceptedCounts& counts, const Coefficients& k);

// t = [c'(1 - e^{-eta nu}) - c(1 - e^{-eta nu'})] / (b c' - b' c) * N / 2,
// the honest expectation of T.
double reference_t(const Coefficients& k, double eta, std::uint64_t n_pulses);

enum class Decision { kAccept, kAbort };

const char* to_string(Decision d);

// The sender's private record of which intensity class each original pulse
// index used. class_of[i] indexes class_intensity.
struct IntensityLabels {
  std::vector<std::uint8_t> class_of;
  std::vector<double> class_intensity;

  std::size_t size() const { return class_of.size(); }
};

// Estimation interface the protocol and both games are parametric in. It sees
// the un-permuted accepted index set and the sender's labels, never photon
// counts.
class EstimationAlgorithm {
 public:
  virtual ~EstimationAlgorithm() = default;
  virtual Decision decide(std::span<const std::uint32_t> accepted,
                          const IntensityLabels& labels) const = 0;
};

// Two-intensity test: Accept iff T >= t - Delta0 N / 2.
class TwoIntensityEstimator final : public EstimationAlgorithm {
 public:
  TwoIntensityEstimator(const Coefficients& coeffs, double eta, std::uint64_t n_pulses,
                        double delta0);

  Decision decide(std::span<const std::uint32_t> accepted,
                  const IntensityLabels& labels) const override;

  // Decision from already-tallied counts; the Monte Carlo fast paths use it.
  Decision decide_counts(const AcceptedCounts& counts) const;
  Decision decide_statistic(double T) const { return T >= threshold_ ? Decision::kAccept : Decision::kAbort; }

  AcceptedCounts tally(std::span<const std::uint32_t> accepted,
                       const IntensityLabels& labels) const;

  const Coefficients& coeffs() const { return coeffs_; }
  double eta() const { return eta_; }
  double delta0() const { return delta0_; }
  std::uint64_t n_pulses() const { return n_pulses_; }
  double reference() const { return t_; }
  double threshold() const { return threshold_; }

 private:
  Coefficients coeffs_;
  double eta_;
  std::uint64_t n_pulses_;
  double delta0_;
  double t_;
  double threshold_;
};

// Free-function form: tally, compute T and t, compare.
Decision algorithm_b(std::span<const std::uint32_t> accepted, const IntensityLabels& labels,
                     const Coefficients& coeffs, double eta, std::uint64_t n_pulses,
                     double delta0);

}  // namespace wcprsp

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
#include <string>
#include <vector>

#include "json.hpp"
#include "wcprsp/estimation.hpp"
#include "wcprsp/log_value.hpp"

namespace wcprsp {

// Free slack parameters of the finite-size analysis.
struct SlackParams {
  double delta = 0.0;               // sets K = ((2 - a^eta - a'^eta)/2 - delta) N
  double delta0 = 0.0;              // Delta0, the acceptance margin of the estimator
  double delta0_small = 0.0;        // delta0
  double delta0_small_prime = 0.0;  // delta0'
  double gamma0 = 0.0;
  double gamma0_prime = 0.0;
};

struct BoundOptions {
  // Multiplier on M. 32 counts the union over the four deviation events;
  // 1 gives the assembled formula as literally printed.
  double domain_union_factor = 32.0;
};

struct ErrorBudget {
  Coefficients coeffs;
  double eta = 0.0;
  std::uint64_t n_pulses = 0;
  SlackParams slack;

  LogValue eps_corr = LogValue::one();
  LogValue eps_sec = LogValue::one();
  LogValue eps_ac = LogValue::one() + LogValue::one();

  double Delta0p = 0.0;   // Delta0'
  double Delta0pp = 0.0;  // Delta0''
  double Gamma = 0.0;
  double C = 0.0;         // max(c, c')
  LogValue M = LogValue::one();
  LogValue P_IK = LogValue::one();

  bool constraints_satisfied = false;
  bool pik_branch = false;  // true when P_{|I|,K} = 2 exp(-Gamma^2 N)
  std::vector<std::string> violations;
};

// Inequalities of the validity region that `slack` breaks, named as
// "0 < delta", "gamma0 < c", "0 < Delta0''", ... Empty when valid.
std::vector<std::string> constraint_violations(const Coefficients& k, double eta,
                                               const SlackParams& slack);

// eps_corr = 2 exp(-delta^2 N) + 2 exp(-Delta0^2 (bc'-b'c)^2 / (4 C^2) N).
// Throws ConstraintError naming the first violated correctness inequality
// (delta range, Delta0 > 0).
LogValue correctness_bound(const Coefficients& k, double eta, std::uint64_t n_pulses,
                           const SlackParams& slack);

// Delta0' = [c c'(delta0 + delta0') + c' gamma0 (1 + delta0)
//            + c gamma0' (1 + delta0')] / (bc' - b'c).
double delta_prime(const Coefficients& k, const SlackParams& slack);

// Delta0'' = (1/c')(c'(1 - a^eta) - c(1 - a'^eta) - (Delta0 + Delta0')(bc' - b'c))
//            - (1 - a - b - c).
double delta_double_prime(const Coefficients& k, double eta, double delta0,
                          double delta_prime_val);

// eps_sec = P_{|I|,K} (factor M + exp(-Delta0''^2 N)); exactly 1 whenever a
// validity inequality fails, Delta0'' <= 0 included.
LogValue security_bound(const Coefficients& k, double eta, std::uint64_t n_pulses,
                        const SlackParams& slack, const BoundOptions& options = {});

// Full budget. Never throws for invalid slack: the failing inequalities are
// listed, eps_sec is 1, and eps_corr is 1 if its own inequalities fail.
ErrorBudget epsilon_ac(const Coefficients& k, double eta, std::uint64_t n_pulses,
                       const SlackParams& slack, const BoundOptions& options = {});

nlohmann::json to_json(const SlackParams& slack);
nlohmann::json to_json(const ErrorBudget& budget);

}  // namespace wcprsp

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

#include "wcprsp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wcprsp/errors.hpp"

namespace wcprsp {

namespace {

const double kLog2 = std::log(2.0);

void check_inputs(const Coefficients& k, double eta, std::uint64_t n_pulses) {
  if (!(k.nu > 0.0 && k.nu < k.nu_prime) || !(k.discriminant > 0.0)) {
    throw ParameterError("bounds: need 0 < nu < nu'");
  }
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("bounds: eta must lie in (0, 1]");
  if (n_pulses == 0) throw ParameterError("bounds: N must be positive");
}

double delta_ceiling(const Coefficients& k, double eta) {
  return (k.detect(eta) + k.detect_prime(eta)) / 2.0;
}

double max_c(const Coefficients& k) { return std::max(k.c, k.c_prime); }

void push_if(std::vector<std::string>& out, bool ok, const char* name) {
  if (!ok) out.emplace_back(name);
}

std::vector<std::string> correctness_violations(const Coefficients& k, double eta,
                                                const SlackParams& s) {
  std::vector<std::string> v;
  push_if(v, s.delta > 0.0, "0 < delta");
  push_if(v, s.delta < delta_ceiling(k, eta), "delta < (2 - a^eta - a'^eta)/2");
  push_if(v, s.delta0 > 0.0, "0 < Delta0");
  return v;
}

}  // namespace

std::vector<std::string> constraint_violations(const Coefficients& k, double eta,
                                               const SlackParams& s) {
  auto v = correctness_violations(k, eta, s);
  push_if(v, s.delta0_small > 0.0, "0 < delta0");
  push_if(v, s.delta0_small_prime > 0.0, "0 < delta0'");
  push_if(v, s.gamma0 > 0.0, "0 < gamma0");
  push_if(v, s.gamma0_prime > 0.0, "0 < gamma0'");
  push_if(v, s.gamma0 < k.c, "gamma0 < c");
  push_if(v, s.gamma0_prime < k.c_prime, "gamma0' < c'");
  const double dpp = delta_double_prime(k, eta, s.delta0, delta_prime(k, s));
  push_if(v, dpp > 0.0, "0 < Delta0''");
  return v;
}

LogValue correctness_bound(const Coefficients& k, double eta, std::uint64_t n_pulses,
                           const SlackParams& s) {
  check_inputs(k, eta, n_pulses);
  const auto v = correctness_violations(k, eta, s);
  if (!v.empty()) {
    throw ConstraintError(v.front(), "delta=" + std::to_string(s.delta) +
                                         ", Delta0=" + std::to_string(s.delta0));
  }
  const double n = static_cast<double>(n_pulses);
  const double cmax = max_c(k);
  const double rate2 = s.delta0 * s.delta0 * k.discriminant * k.discriminant / (4.0 * cmax * cmax);
  return LogValue::from_log(kLog2 - s.delta * s.delta * n) +
         LogValue::from_log(kLog2 - rate2 * n);
}

double delta_prime(const Coefficients& k, const SlackParams& s) {
  return (k.c * k.c_prime * (s.delta0_small + s.delta0_small_prime) +
          k.c_prime * s.gamma0 * (1.0 + s.delta0_small) +
          k.c * s.gamma0_prime * (1.0 + s.delta0_small_prime)) /
         k.discriminant;
}

double delta_double_prime(const Coefficients& k, double eta, double delta0,
                          double delta_prime_val) {
  return (k.c_prime * k.detect(eta) - k.c * k.detect_prime(eta) -
          (delta0 + delta_prime_val) * k.discriminant) /
             k.c_prime -
         multiphoton_tail(k.nu);
}

ErrorBudget epsilon_ac(const Coefficients& k, double eta, std::uint64_t n_pulses,
                       const SlackParams& s, const BoundOptions& options) {
  check_inputs(k, eta, n_pulses);
  if (!(options.domain_union_factor > 0.0)) {
    throw ParameterError("bounds: domain_union_factor must be positive");
  }
  ErrorBudget b;
  b.coeffs = k;
  b.eta = eta;
  b.n_pulses = n_pulses;
  b.slack = s;
  b.C = max_c(k);
  b.Delta0p = delta_prime(k, s);
  b.Delta0pp = delta_double_prime(k, eta, s.delta0, b.Delta0p);
  b.Gamma = (k.a + k.b + k.a_prime + k.b_prime - k.a_eta(eta) - k.a_prime_eta(eta)) / 2.0 - s.delta;
  b.violations = constraint_violations(k, eta, s);
  b.constraints_satisfied = b.violations.empty();

  const double n = static_cast<double>(n_pulses);
  b.eps_corr = correctness_violations(k, eta, s).empty() ? correctness_bound(k, eta, n_pulses, s)
                                                         : LogValue::one();

  // The M and P_{|I|,K} diagnostics are reported whenever they are defined.
  if (s.gamma0 < k.c && s.gamma0_prime < k.c_prime) {
    b.M = max(max(LogValue::from_log(-s.gamma0 * s.gamma0 * n),
                  LogValue::from_log(-s.delta0_small * s.delta0_small * (k.c - s.gamma0) * n)),
              max(LogValue::from_log(-s.gamma0_prime * s.gamma0_prime * n),
                  LogValue::from_log(-s.delta0_small_prime * s.delta0_small_prime *
                                     (k.c_prime - s.gamma0_prime) * n)));
  }
  b.pik_branch = b.Gamma > 0.0 && s.delta > 0.0;
  b.P_IK = b.pik_branch ? LogValue::from_log(kLog2 - b.Gamma * b.Gamma * n) : LogValue::one();

  if (b.constraints_satisfied) {
    const LogValue factor = LogValue::from_value(options.domain_union_factor);
    b.eps_sec = b.P_IK * (factor * b.M + LogValue::from_log(-b.Delta0pp * b.Delta0pp * n));
  } else {
    b.eps_sec = LogValue::one();
  }
  b.eps_ac = b.eps_corr + b.eps_sec;
  return b;
}

LogValue security_bound(const Coefficients& k, double eta, std::uint64_t n_pulses,
                        const SlackParams& slack, const BoundOptions& options) {
  return epsilon_ac(k, eta, n_pulses, slack, options).eps_sec;
}

nlohmann::json to_json(const SlackParams& s) {
  return {{"delta", s.delta},   {"Delta0", s.delta0},          {"delta0", s.delta0_small},
          {"delta0p", s.delta0_small_prime}, {"gamma0", s.gamma0}, {"gamma0p", s.gamma0_prime}};
}

namespace {

nlohmann::json log_value_json(const LogValue& v) {
  return {{"value", v.value}, {"log", v.log}};
}

}  // namespace

nlohmann::json to_json(const ErrorBudget& b) {
  nlohmann::json j = to_json(b.slack);
  j["nu"] = b.coeffs.nu;
  j["nu_prime"] = b.coeffs.nu_prime;
  j["eta"] = b.eta;
  j["N"] = b.n_pulses;
  j["Delta0p"] = b.Delta0p;
  j["Delta0pp"] = b.Delta0pp;
  j["Gamma"] = b.Gamma;
  j["C"] = b.C;
  j["M"] = log_value_json(b.M);
  j["P_IK"] = log_value_json(b.P_IK);
  j["eps_corr"] = log_value_json(b.eps_corr);
  j["eps_sec"] = log_value_json(b.eps_sec);
  j["eps_AC"] = log_value_json(b.eps_ac);
  j["constraints_satisfied"] = b.constraints_satisfied;
  j["pik_branch"] = b.pik_branch;
  j["violations"] = b.violations;
  return j;
}

}  // namespace wcprsp

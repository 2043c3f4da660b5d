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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wcprsp/bounds.hpp"
#include "wcprsp/errors.hpp"

namespace wcprsp {
namespace {

// Second implementation in long double, written from the formulas directly.
struct Oracle {
  long double eps_corr_log, eps_sec_log, d0p, d0pp, gamma;
};

Oracle oracle(double nu_d, double nu_prime_d, double eta_d, double n_d, const SlackParams& s) {
  using L = long double;
  const L nu = nu_d, np = nu_prime_d, eta = eta_d, n = n_d;
  const L a = std::exp(-nu), b = nu * a, c = nu * nu * a / 2;
  const L ap = std::exp(-np), bp = np * ap, cp = np * np * ap / 2;
  const L disc = b * cp - bp * c;
  const L cmax = std::max(c, cp);
  const L aeta = std::exp(-eta * nu), apeta = std::exp(-eta * np);
  Oracle o{};
  const L t1 = std::log(2.0L) - L(s.delta) * s.delta * n;
  const L t2 = std::log(2.0L) - L(s.delta0) * s.delta0 * disc * disc / (4 * cmax * cmax) * n;
  const L hi = std::max(t1, t2);
  o.eps_corr_log = hi + std::log(std::exp(t1 - hi) + std::exp(t2 - hi));
  o.d0p = (c * cp * (L(s.delta0_small) + s.delta0_small_prime) +
           cp * s.gamma0 * (1 + L(s.delta0_small)) +
           c * s.gamma0_prime * (1 + L(s.delta0_small_prime))) /
          disc;
  o.d0pp = (cp * (1 - aeta) - c * (1 - apeta) - (L(s.delta0) + o.d0p) * disc) / cp -
           (1 - a - b - c);
  o.gamma = (a + b + ap + bp - aeta - apeta) / 2 - s.delta;
  const L m = std::max({-L(s.gamma0) * s.gamma0 * n,
                        -L(s.delta0_small) * s.delta0_small * (c - s.gamma0) * n,
                        -L(s.gamma0_prime) * s.gamma0_prime * n,
                        -L(s.delta0_small_prime) * s.delta0_small_prime * (cp - s.gamma0_prime) * n});
  const L x = std::log(32.0L) + m, y = -o.d0pp * o.d0pp * n;
  const L h = std::max(x, y);
  const L inner = h + std::log(std::exp(x - h) + std::exp(y - h));
  const L pik = o.gamma > 0 ? std::log(2.0L) - o.gamma * o.gamma * n : 0.0L;
  o.eps_sec_log = pik + inner;
  return o;
}

SlackParams small_slack() { return {0.01, 0.01, 1e-3, 1e-3, 1e-3, 1e-3}; }

TEST(Bounds, CorrectnessReferenceValue) {
  // Second term negligible: Delta0 large.
  const Coefficients k = coefficients(0.1, 0.2);
  const SlackParams s{0.01, 5.0, 0, 0, 0, 0};
  const LogValue v = correctness_bound(k, 1.0, 10000, s);
  const double second = 2 * std::exp(-25.0 * k.discriminant * k.discriminant /
                                     (4 * k.c_prime * k.c_prime) * 10000);
  EXPECT_NEAR(v.value, 2 * std::exp(-1.0) + second, 1e-12);
  EXPECT_NEAR(2 * std::exp(-1.0), 0.7358, 1e-4);
}

TEST(Bounds, CorrectnessDecreasesInN) {
  const Coefficients k = coefficients(0.1, 0.2);
  double prev = 1e300;
  for (std::uint64_t n : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    const double v = correctness_bound(k, 0.5, n, small_slack()).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Bounds, CorrectnessConstraintErrors) {
  const Coefficients k = coefficients(0.1, 0.2);
  SlackParams s = small_slack();
  s.delta = 0.0;
  EXPECT_THROW(correctness_bound(k, 0.5, 1000, s), ConstraintError);
  s = small_slack();
  s.delta = 0.5;
  EXPECT_THROW(correctness_bound(k, 0.5, 1000, s), ConstraintError);
  s = small_slack();
  s.delta0 = 0.0;
  try {
    correctness_bound(k, 0.5, 1000, s);
    FAIL();
  } catch (const ConstraintError& e) {
    EXPECT_NE(std::string(e.what()).find("Delta0"), std::string::npos);
  }
}

TEST(Bounds, DeltaPrimeValues) {
  const Coefficients k = coefficients(0.1, 0.2);
  const SlackParams s{0.01, 0.01, 1e-3, 1e-3, 1e-3, 1e-3};
  const double expected = (k.c * k.c_prime * 2e-3 + k.c_prime * 1e-3 * 1.001 + k.c * 1e-3 * 1.001) /
                          k.discriminant;
  EXPECT_NEAR(delta_prime(k, s), expected, 1e-15);
  EXPECT_EQ(delta_prime(k, SlackParams{0.01, 0.01, 0, 0, 0, 0}), 0.0);
  // Strictly increasing in each small slack.
  for (int which = 0; which < 4; ++which) {
    SlackParams t = s;
    double* f[] = {&t.delta0_small, &t.delta0_small_prime, &t.gamma0, &t.gamma0_prime};
    *f[which] *= 2;
    EXPECT_GT(delta_prime(k, t), delta_prime(k, s)) << which;
  }
}

TEST(Bounds, SmallEtaExpansion) {
  const double nu_prime = 0.01, alpha = 0.5, eta = 1e-3;
  const Coefficients k = coefficients(alpha * nu_prime, nu_prime);
  const SlackParams s{eta / 10, eta / 3, 1e-9, 1e-9, 1e-9, 1e-9};
  const double d0p = delta_prime(k, s);
  const double exact = delta_double_prime(k, eta, s.delta0, d0p);
  const double approx = (eta - (s.delta0 + d0p)) * nu_prime * alpha * (1 - alpha);
  EXPECT_NEAR(exact / approx, 1.0, 0.05);
}

TEST(Bounds, InsecureRegionDetected) {
  // Delta0 at the leading-order ceiling eta.
  const double eta = 1e-3;
  const Coefficients k = coefficients(0.005, 0.01);
  EXPECT_LT(delta_double_prime(k, eta, eta, 0.0), 0.0);
  const Coefficients tiny = coefficients(1e-3, 2e-3);
  EXPECT_GT(delta_double_prime(tiny, 1.0, 1e-4, delta_prime(tiny, {1e-4, 1e-4, 1e-6, 1e-6, 1e-6, 1e-6})),
            0.0);
}

TEST(Bounds, MatchesOracle) {
  struct Case { double nu, nu_prime, eta; std::uint64_t n; SlackParams s; };
  const std::vector<Case> cases{
      {0.1, 0.2, 1.0, 100000, small_slack()},
      {0.1, 0.2, 0.5, 1000000, {0.005, 0.02, 1e-3, 2e-3, 1e-4, 2e-4}},
      {0.0927318316502215, 0.185463663300443, 0.01, 4000000000ULL,
       {0.00011039590600299797, 0.0031023586645260587, 0.001151721660337319,
        0.0005991653323755569, 7.143713499973252e-05, 7.143713499973252e-05}},
      {0.3, 0.9, 0.2, 50000, {0.01, 0.05, 1e-2, 1e-2, 1e-3, 1e-3}},
      {0.1, 0.2, 1.0, 100000, {0.13, 0.01, 1e-3, 1e-3, 1e-3, 1e-3}},  // Gamma < 0
  };
  for (const auto& cs : cases) {
    const Coefficients k = coefficients(cs.nu, cs.nu_prime);
    const ErrorBudget b = epsilon_ac(k, cs.eta, cs.n, cs.s);
    const Oracle o = oracle(cs.nu, cs.nu_prime, cs.eta, static_cast<double>(cs.n), cs.s);
    ASSERT_TRUE(b.constraints_satisfied) << cs.eta;
    EXPECT_NEAR(b.Delta0p, static_cast<double>(o.d0p), 1e-12 * std::abs(static_cast<double>(o.d0p)));
    EXPECT_NEAR(b.Delta0pp, static_cast<double>(o.d0pp), 1e-12 * std::abs(static_cast<double>(o.d0pp)));
    EXPECT_NEAR(b.Gamma, static_cast<double>(o.gamma), 1e-12);
    const double sec = static_cast<double>(o.eps_sec_log);
    const double corr = static_cast<double>(o.eps_corr_log);
    EXPECT_NEAR(b.eps_sec.log, sec, 1e-12 * std::max(1.0, std::abs(sec)));
    EXPECT_NEAR(b.eps_corr.log, corr, 1e-12 * std::max(1.0, std::abs(corr)));
    if (std::exp(sec) > 1e-300) EXPECT_NEAR(b.eps_sec.value / std::exp(sec), 1.0, 1e-12);
    EXPECT_EQ(b.pik_branch, o.gamma > 0);
    EXPECT_EQ(b.eps_ac.value, b.eps_corr.value + b.eps_sec.value);
  }
}

TEST(Bounds, UnderflowKeepsLog) {
  const Coefficients k = coefficients(0.1, 0.2);
  const std::uint64_t n = 100000000000ULL;
  const ErrorBudget b = epsilon_ac(k, 1.0, n, small_slack());
  const Oracle o = oracle(0.1, 0.2, 1.0, static_cast<double>(n), small_slack());
  EXPECT_EQ(b.eps_sec.value, 0.0);
  EXPECT_LT(b.eps_sec.log, -1e4);
  EXPECT_NEAR(b.eps_sec.log / static_cast<double>(o.eps_sec_log), 1.0, 1e-9);
  EXPECT_NEAR(b.eps_corr.log / static_cast<double>(o.eps_corr_log), 1.0, 1e-9);
}

TEST(Bounds, GammaBranchInactive) {
  const Coefficients k = coefficients(0.1, 0.2);
  SlackParams s = small_slack();
  s.delta = 0.13;
  const ErrorBudget b = epsilon_ac(k, 1.0, 1000, s);
  ASSERT_TRUE(b.constraints_satisfied);
  EXPECT_LE(b.Gamma, 0.0);
  EXPECT_FALSE(b.pik_branch);
  EXPECT_EQ(b.P_IK.value, 1.0);
  EXPECT_NEAR(b.eps_sec.value, 32 * b.M.value + std::exp(-b.Delta0pp * b.Delta0pp * 1000), 1e-12);
}

TEST(Bounds, UnionFactorSwitch) {
  const Coefficients k = coefficients(0.1, 0.2);
  const ErrorBudget b32 = epsilon_ac(k, 1.0, 100000, small_slack());
  const ErrorBudget b1 = epsilon_ac(k, 1.0, 100000, small_slack(), BoundOptions{1.0});
  const double tail = std::exp(-b1.Delta0pp * b1.Delta0pp * 100000);
  EXPECT_NEAR(b1.eps_sec.value, b1.P_IK.value * (b1.M.value + tail), 1e-15);
  EXPECT_NEAR(b32.eps_sec.value, b32.P_IK.value * (32 * b32.M.value + tail), 1e-15);
  EXPECT_THROW(epsilon_ac(k, 1.0, 100, small_slack(), BoundOptions{0.0}), ParameterError);
}

TEST(Bounds, InvalidSlackGivesTrivialBudget) {
  const Coefficients k = coefficients(0.1, 0.2);
  SlackParams s = small_slack();
  s.gamma0 = 1.0;  // above c
  ErrorBudget b = epsilon_ac(k, 1.0, 1000, s);
  EXPECT_FALSE(b.constraints_satisfied);
  EXPECT_EQ(b.eps_sec.value, 1.0);
  EXPECT_NE(b.eps_corr.value, 1.0);  // computed, not the fallback
  EXPECT_NE(std::find(b.violations.begin(), b.violations.end(), "gamma0 < c"), b.violations.end());
  EXPECT_EQ(security_bound(k, 1.0, 1000, s).value, 1.0);

  s = small_slack();
  s.delta = -1;
  b = epsilon_ac(k, 1.0, 1000, s);
  EXPECT_EQ(b.eps_corr.value, 1.0);
  EXPECT_EQ(b.eps_ac.value, 2.0);

  // Delta0'' <= 0.
  s = small_slack();
  s.delta0 = 1.0;
  b = epsilon_ac(k, 1.0, 1000, s);
  EXPECT_LE(b.Delta0pp, 0.0);
  EXPECT_NE(std::find(b.violations.begin(), b.violations.end(), "0 < Delta0''"), b.violations.end());
  EXPECT_EQ(b.eps_sec.value, 1.0);
}

TEST(Bounds, RejectsBadInputs) {
  const Coefficients k = coefficients(0.1, 0.2);
  EXPECT_THROW(epsilon_ac(k, 0.0, 1000, small_slack()), ParameterError);
  EXPECT_THROW(epsilon_ac(k, 1.5, 1000, small_slack()), ParameterError);
  EXPECT_THROW(epsilon_ac(k, 0.5, 0, small_slack()), ParameterError);
  Coefficients swapped = k;
  std::swap(swapped.nu, swapped.nu_prime);
  EXPECT_THROW(epsilon_ac(swapped, 0.5, 1000, small_slack()), ParameterError);
}

TEST(Bounds, NonincreasingInN) {
  const Coefficients k = coefficients(0.1, 0.2);
  double prev = 1e300;
  for (std::uint64_t n = 1000; n <= 100000000; n *= 3) {
    const double v = epsilon_ac(k, 1.0, n, small_slack()).eps_ac.value;
    EXPECT_LE(v, prev) << n;
    prev = v;
  }
}

TEST(Bounds, JsonNamesSymbols) {
  const Coefficients k = coefficients(0.1, 0.2);
  const auto j = to_json(epsilon_ac(k, 1.0, 100000, small_slack()));
  for (const char* key : {"delta", "Delta0", "delta0", "delta0p", "gamma0", "gamma0p", "nu",
                          "nu_prime", "eta", "N", "Delta0p", "Delta0pp", "Gamma", "C", "M", "P_IK",
                          "eps_corr", "eps_sec", "eps_AC", "constraints_satisfied", "pik_branch",
                          "violations"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["eps_AC"].contains("log"));
}

}  // namespace
}  // namespace wcprsp

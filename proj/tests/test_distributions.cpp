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
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/hypergeometric.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "wcprsp/distributions.hpp"
#include "wcprsp/errors.hpp"
#include "wcprsp/statistics.hpp"

namespace wcprsp {
namespace {

// Goodness of fit of `samples` draws against pmf(k) for k in [0, support).
template <typename Draw, typename Pmf>
double fit_p_value(int samples, std::uint64_t support, Draw draw, Pmf pmf) {
  std::vector<std::uint64_t> counts(support, 0);
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t k = draw();
    if (k < support) ++counts[k];
  }
  std::vector<double> p(support);
  for (std::uint64_t k = 0; k < support; ++k) p[k] = pmf(k);
  return chi_square_gof(counts, p).p_value;
}

TEST(Poisson, PmfMatchesBoost) {
  for (double mean : {0.01, 0.3, 2.0, 17.5, 250.0}) {
    boost::math::poisson_distribution<> d(mean);
    for (std::uint64_t k : {0, 1, 2, 5, 20, 300}) {
      EXPECT_NEAR(poisson_pmf(k, mean).value(), boost::math::pdf(d, static_cast<double>(k)),
                  1e-12 * std::max(1.0, boost::math::pdf(d, static_cast<double>(k))) + 1e-300);
    }
  }
}

TEST(Poisson, ZeroMeanIsPointMass) {
  RngStream r(1, 0);
  EXPECT_EQ(poisson_pmf(0, 0.0).value(), 1.0);
  EXPECT_EQ(poisson_pmf(3, 0.0).value(), 0.0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(poisson_sample(0.0, r), 0u);
}

TEST(Poisson, NegativeMeanThrows) {
  RngStream r(1, 0);
  EXPECT_THROW(poisson_sample(-1.0, r), ParameterError);
  EXPECT_THROW(poisson_pmf(0, -1.0), ParameterError);
}

class PoissonFit : public ::testing::TestWithParam<double> {};

TEST_P(PoissonFit, ChiSquare) {
  const double mean = GetParam();
  RngStream r(3, static_cast<std::uint64_t>(mean * 1000));
  const auto support = static_cast<std::uint64_t>(mean + 12 * std::sqrt(mean) + 15);
  const double p = fit_p_value(
      200000, support, [&] { return poisson_sample(mean, r); },
      [&](std::uint64_t k) { return poisson_pmf(k, mean).value(); });
  EXPECT_GT(p, 1e-4) << "mean " << mean;
}

INSTANTIATE_TEST_SUITE_P(Means, PoissonFit, ::testing::Values(0.05, 0.5, 3.0, 9.9, 10.1, 40.0, 600.0));

TEST(Poisson, SampleMeanAndVariance) {
  RngStream r(4, 4);
  const double mean = 6.5;
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(poisson_sample(mean, r));
    s += x;
    s2 += x * x;
  }
  const double m = s / n, v = s2 / n - m * m;
  EXPECT_NEAR(m, mean, 5 * std::sqrt(mean / n));
  EXPECT_NEAR(v, mean, 0.1);
}

TEST(Binomial, PmfMatchesBoost) {
  for (auto [n, p] : std::vector<std::pair<std::uint64_t, double>>{{10, 0.3}, {1000, 0.01}, {50, 0.999}}) {
    boost::math::binomial_distribution<> d(static_cast<double>(n), p);
    for (std::uint64_t k = 0; k <= std::min<std::uint64_t>(n, 30); ++k) {
      EXPECT_NEAR(binomial_pmf(k, n, p).value(), boost::math::pdf(d, static_cast<double>(k)), 1e-12);
    }
  }
}

struct BinomialCase {
  std::uint64_t n;
  double p;
};

class BinomialFit : public ::testing::TestWithParam<BinomialCase> {};

TEST_P(BinomialFit, ChiSquare) {
  const auto [n, p] = GetParam();
  RngStream r(5, n);
  const double pv = fit_p_value(
      200000, n + 1, [&] { return binomial_sample(n, Probability(p), r); },
      [&](std::uint64_t k) { return binomial_pmf(k, n, p).value(); });
  EXPECT_GT(pv, 1e-4) << "n=" << n << " p=" << p;
}

INSTANTIATE_TEST_SUITE_P(Cases, BinomialFit,
                         ::testing::Values(BinomialCase{1, 0.5}, BinomialCase{20, 0.1},
                                           BinomialCase{200, 0.05}, BinomialCase{1000, 0.3},
                                           BinomialCase{5000, 0.97}, BinomialCase{100000, 0.5}));

TEST(Binomial, DegenerateProbabilities) {
  RngStream r(1, 1);
  EXPECT_EQ(binomial_sample(17, Probability(0.0), r), 0u);
  EXPECT_EQ(binomial_sample(17, Probability(1.0), r), 17u);
  EXPECT_EQ(binomial_sample(0, Probability(0.4), r), 0u);
}

TEST(Hypergeometric, PmfMatchesBoost) {
  // boost: hypergeometric_distribution(r = marked, n = draws, N = population)
  boost::math::hypergeometric_distribution<> d(30, 25, 80);
  for (std::uint64_t k = 0; k <= 25; ++k) {
    EXPECT_NEAR(hypergeometric_pmf(k, 80, 25, 30).value(),
                boost::math::pdf(d, static_cast<unsigned>(k)), 1e-12);
  }
}

struct HyperCase {
  std::uint64_t population, draws, marked;
};

class HypergeometricFit : public ::testing::TestWithParam<HyperCase> {};

TEST_P(HypergeometricFit, ChiSquare) {
  const auto [pop, draws, marked] = GetParam();
  RngStream r(6, pop * 31 + draws);
  const double pv = fit_p_value(
      200000, std::min(draws, marked) + 1,
      [&] { return hypergeometric_sample(pop, draws, marked, r); },
      [&](std::uint64_t k) { return hypergeometric_pmf(k, pop, draws, marked).value(); });
  EXPECT_GT(pv, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Cases, HypergeometricFit,
                         ::testing::Values(HyperCase{10, 3, 4}, HyperCase{50, 25, 10},
                                           HyperCase{1000, 400, 300}, HyperCase{20000, 50, 19000}));

TEST(Hypergeometric, EdgeCases) {
  RngStream r(1, 2);
  EXPECT_EQ(hypergeometric_sample(10, 0, 4, r), 0u);
  EXPECT_EQ(hypergeometric_sample(10, 10, 4, r), 4u);
  EXPECT_EQ(hypergeometric_sample(10, 5, 0, r), 0u);
  EXPECT_EQ(hypergeometric_sample(10, 5, 10, r), 5u);
  EXPECT_THROW(hypergeometric_sample(10, 11, 4, r), ParameterError);
}

TEST(LogChoose, SmallValues) {
  EXPECT_NEAR(log_choose(10, 3), std::log(120.0), 1e-12);
  EXPECT_EQ(log_choose(5, 0), 0.0);
  EXPECT_EQ(log_choose(5, 5), 0.0);
}

TEST(RandomPermutation, IsPermutationAndUniform) {
  RngStream r(7, 7);
  std::map<std::vector<std::uint32_t>, std::uint64_t> seen;
  for (int i = 0; i < 60000; ++i) {
    auto p = random_permutation(3, r);
    auto sorted = p;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<std::uint32_t>{0, 1, 2}));
    ++seen[p];
  }
  ASSERT_EQ(seen.size(), 6u);
  std::vector<std::uint64_t> counts;
  for (const auto& [k, v] : seen) counts.push_back(v);
  EXPECT_GT(chi_square_gof(counts, std::vector<double>(6, 1.0 / 6)).p_value, 1e-4);
}

TEST(RandomSubset, PreservesOrderAndIsUniform) {
  RngStream r(8, 8);
  const std::vector<std::uint32_t> items{10, 20, 30, 40, 50};
  std::map<std::vector<std::uint32_t>, std::uint64_t> seen;
  for (int i = 0; i < 100000; ++i) {
    auto s = random_subset(items, 2, r);
    ASSERT_EQ(s.size(), 2u);
    ASSERT_LT(s[0], s[1]);
    ++seen[s];
  }
  ASSERT_EQ(seen.size(), 10u);
  std::vector<std::uint64_t> counts;
  for (const auto& [k, v] : seen) counts.push_back(v);
  EXPECT_GT(chi_square_gof(counts, std::vector<double>(10, 0.1)).p_value, 1e-4);
}

TEST(RandomSubset, Extremes) {
  RngStream r(8, 9);
  const std::vector<std::uint32_t> items{1, 2, 3};
  EXPECT_TRUE(random_subset(items, 0, r).empty());
  EXPECT_EQ(random_subset(items, 3, r), items);
  EXPECT_THROW(random_subset(items, 4, r), ParameterError);
}

}  // namespace
}  // namespace wcprsp

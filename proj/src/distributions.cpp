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

#include "wcprsp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wcprsp/errors.hpp"

namespace wcprsp {

namespace {

void check_mean(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw ParameterError("Poisson mean must be finite and >= 0, got " +
                         std::to_string(mean));
  }
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Inversion over the support ordered mode, mode-1, mode+1, mode-2, ... .
// Any fixed enumeration of the support gives an exact sampler; starting at
// the mode keeps the expected number of steps O(standard deviation).
// `down(k)` returns pmf(k-1)/pmf(k), `up(k)` returns pmf(k+1)/pmf(k).
template <typename Down, typename Up>
std::uint64_t invert_from_mode(std::uint64_t mode, double pmf_mode, std::uint64_t lo,
                               std::uint64_t hi, Down down, Up up, RngStream& rng) {
  double u = rng.uniform01() - pmf_mode;
  if (u < 0.0) return mode;
  std::uint64_t left = mode, right = mode;
  double p_left = pmf_mode, p_right = pmf_mode;
  bool left_open = mode > lo, right_open = mode < hi;
  while (left_open || right_open) {
    if (left_open) {
      p_left *= down(left);
      --left;
      u -= p_left;
      if (u < 0.0) return left;
      left_open = left > lo && p_left > 0.0;
    }
    if (right_open) {
      p_right *= up(right);
      ++right;
      u -= p_right;
      if (u < 0.0) return right;
      right_open = right < hi && p_right > 0.0;
    }
  }
  // Only reachable through rounding in the accumulated mass.
  return mode;
}

}  // namespace

double log_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -INFINITY;
  const double dn = static_cast<double>(n), dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

Probability poisson_pmf(std::uint64_t n, double mean) {
  check_mean(mean);
  if (mean == 0.0) return Probability(n == 0 ? 1.0 : 0.0);
  const double dn = static_cast<double>(n);
  return Probability(clamp01(std::exp(dn * std::log(mean) - mean - std::lgamma(dn + 1.0))));
}

std::uint64_t poisson_sample(double mean, RngStream& rng) {
  check_mean(mean);
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double u = rng.uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf && p > 0.0) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  const auto mode = static_cast<std::uint64_t>(std::floor(mean));
  return invert_from_mode(
      mode, poisson_pmf(mode, mean).value(), 0, UINT64_MAX,
      [mean](std::uint64_t k) { return static_cast<double>(k) / mean; },
      [mean](std::uint64_t k) { return mean / static_cast<double>(k + 1); }, rng);
}

Probability binomial_pmf(std::uint64_t k, std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binomial p out of [0,1]");
  if (k > trials) return Probability(0.0);
  if (p == 0.0) return Probability(k == 0 ? 1.0 : 0.0);
  if (p == 1.0) return Probability(k == trials ? 1.0 : 0.0);
  const double dk = static_cast<double>(k), dn = static_cast<double>(trials);
  return Probability(clamp01(
      std::exp(log_choose(trials, k) + dk * std::log(p) + (dn - dk) * std::log1p(-p))));
}

std::uint64_t binomial_sample(std::uint64_t trials, Probability prob, RngStream& rng) {
  const double p = prob.value();
  if (trials == 0 || p == 0.0) return 0;
  if (p == 1.0) return trials;
  const double q = 1.0 - p;
  const double odds = p / q;
  const double dn = static_cast<double>(trials);
  if (dn * std::min(p, q) < 20.0) {
    // Sequential search from 0; the pmf at 0 is q^n, which is not tiny here
    // when p is the small side. For a small q, count failures instead.
    if (p > 0.5) return trials - binomial_sample(trials, Probability(q), rng);
    const double u = rng.uniform01();
    double pk = std::exp(dn * std::log1p(-p));
    double cdf = pk;
    std::uint64_t k = 0;
    while (u >= cdf && k < trials && pk > 0.0) {
      pk *= odds * static_cast<double>(trials - k) / static_cast<double>(k + 1);
      ++k;
      cdf += pk;
    }
    return k;
  }
  const auto mode = std::min<std::uint64_t>(
      trials, static_cast<std::uint64_t>(std::floor((dn + 1.0) * p)));
  return invert_from_mode(
      mode, binomial_pmf(mode, trials, p).value(), 0, trials,
      [&](std::uint64_t k) {
        return static_cast<double>(k) / (odds * static_cast<double>(trials - k + 1));
      },
      [&](std::uint64_t k) {
        return odds * static_cast<double>(trials - k) / static_cast<double>(k + 1);
      },
      rng);
}

Probability hypergeometric_pmf(std::uint64_t k, std::uint64_t population,
                               std::uint64_t draws, std::uint64_t marked) {
  if (draws > population || marked > population) {
    throw ParameterError("hypergeometric: draws and marked must be <= population");
  }
  if (k > draws || k > marked || draws - k > population - marked) return Probability(0.0);
  return Probability(clamp01(std::exp(log_choose(marked, k) +
                                      log_choose(population - marked, draws - k) -
                                      log_choose(population, draws))));
}

std::uint64_t hypergeometric_sample(std::uint64_t population, std::uint64_t draws,
                                    std::uint64_t marked, RngStream& rng) {
  if (draws > population || marked > population) {
    throw ParameterError("hypergeometric: draws and marked must be <= population");
  }
  const std::uint64_t lo = draws + marked > population ? draws + marked - population : 0;
  const std::uint64_t hi = std::min(draws, marked);
  if (lo == hi) return lo;
  const double n = static_cast<double>(population), d = static_cast<double>(draws),
               m = static_cast<double>(marked);
  const auto mode = std::clamp<std::uint64_t>(
      static_cast<std::uint64_t>(std::floor((d + 1.0) * (m + 1.0) / (n + 2.0))), lo, hi);
  return invert_from_mode(
      mode, hypergeometric_pmf(mode, population, draws, marked).value(), lo, hi,
      [&](std::uint64_t k) {
        const double x = static_cast<double>(k);
        return x * (n - m - d + x) / ((m - x + 1.0) * (d - x + 1.0));
      },
      [&](std::uint64_t k) {
        const double x = static_cast<double>(k);
        return (m - x) * (d - x) / ((x + 1.0) * (n - m - d + x + 1.0));
      },
      rng);
}

std::vector<std::uint32_t> random_permutation(std::uint32_t n, RngStream& rng) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {
    const auto j = static_cast<std::uint32_t>(rng.uniform_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::vector<std::uint32_t> random_subset(std::span<const std::uint32_t> items,
                                         std::uint32_t k, RngStream& rng) {
  if (k > items.size()) {
    throw ParameterError("random_subset: k=" + std::to_string(k) + " exceeds " +
                         std::to_string(items.size()) + " items");
  }
  std::vector<std::uint32_t> out;
  out.reserve(k);
  std::uint64_t remaining = items.size();
  std::uint64_t needed = k;
  for (std::uint32_t item : items) {
    if (needed == 0) break;
    if (rng.uniform_below(remaining) < needed) {
      out.push_back(item);
      --needed;
    }
    --remaining;
  }
  return out;
}

}  // namespace wcprsp

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
#include <span>
#include <vector>

#include "wcprsp/probability.hpp"
#include "wcprsp/rng.hpp"

namespace wcprsp {

// Poisson(mean) probability of exactly n events, evaluated in log space.
Probability poisson_pmf(std::uint64_t n, double mean);

// Exact Poisson draw. Inversion by sequential search for mean < 10 (every
// regime the protocol uses); search outward from the mode above that.
std::uint64_t poisson_sample(double mean, RngStream& rng);

// Binomial(trials, p) probability of exactly k successes.
Probability binomial_pmf(std::uint64_t k, std::uint64_t trials, double p);

// Exact Binomial(trials, p) draw by inversion (from 0 for small means, from
// the mode otherwise).
std::uint64_t binomial_sample(std::uint64_t trials, Probability p, RngStream& rng);

// Hypergeometric: number of marked items among `draws` taken without
// replacement from a population of `population` items, `marked` of them
// marked. Written H(population, draws, marked).
Probability hypergeometric_pmf(std::uint64_t k, std::uint64_t population,
                               std::uint64_t draws, std::uint64_t marked);
std::uint64_t hypergeometric_sample(std::uint64_t population, std::uint64_t draws,
                                    std::uint64_t marked, RngStream& rng);

// log of the binomial coefficient C(n, k).
double log_choose(std::uint64_t n, std::uint64_t k);

// Uniform random permutation of [0, n) (Fisher-Yates).
std::vector<std::uint32_t> random_permutation(std::uint32_t n, RngStream& rng);

// Uniform random subset of size k of `items`, returned in the order the items
// appear in the input (selection sampling). Requires k <= items.size().
std::vector<std::uint32_t> random_subset(std::span<const std::uint32_t> items,
                                         std::uint32_t k, RngStream& rng);

}  // namespace wcprsp

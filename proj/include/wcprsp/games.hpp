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
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wcprsp/estimation.hpp"
#include "wcprsp/params.hpp"
#include "wcprsp/probability.hpp"
#include "wcprsp/rng.hpp"
#include "wcprsp/statistics.hpp"

namespace wcprsp {

// Photon-number census of one batch of N pulses. counts[n] = c_n is all an
// adversary may see; by_class[k][n] (C_n, C'_n for two intensities) is the
// hidden split by intensity class.
struct PhotonCensus {
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<std::uint64_t>> by_class;

  std::uint64_t at(std::size_t n) const { return n < counts.size() ? counts[n] : 0; }
  std::uint64_t total() const;
  std::uint64_t at_least(std::size_t n) const;  // sum_{m >= n} c_m
  std::uint64_t class_at_least(std::size_t cls, std::size_t n) const;
};

// (d_n): how many n-photon pulses the adversary acknowledges.
struct AdversaryDecision {
  std::vector<std::uint64_t> accept_by_n;

  std::uint64_t at(std::size_t n) const { return n < accept_by_n.size() ? accept_by_n[n] : 0; }
  std::uint64_t total() const;
};

// A map (c_n) -> (d_n). Strategies may randomize through `rng`.
class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual std::string name() const = 0;
  virtual AdversaryDecision decide(std::span<const std::uint64_t> counts,
                                   std::uint64_t batch_size, RngStream& rng) const = 0;
};

// d_0 = d_1 = 0; fill K from the highest photon number downward.
std::unique_ptr<AdversaryStrategy> adversary_pns_greedy();

// d_0 = d_1 = 0; d_2 = min(round(beta c_2), K); remainder from n >= 3,
// highest first. Falls short of K (and so cannot cheat) when the multiphoton
// supply runs out.
std::unique_ptr<AdversaryStrategy> adversary_beta(Probability beta);

// Imitates a lossy honest channel of transmittance eta: d_n ~
// Binomial(c_n, 1 - (1-eta)^n), then uniformly trimmed to K, or padded with
// unacknowledged non-empty pulses when short.
std::unique_ptr<AdversaryStrategy> adversary_honest_mimic(double eta);

// Wraps an arbitrary map, for tests and ad hoc strategies.
std::unique_ptr<AdversaryStrategy> adversary_from_function(
    std::string name,
    std::function<AdversaryDecision(std::span<const std::uint64_t>, std::uint64_t, RngStream&)> fn);

enum class GameVerdict { kAbort, kAccept, kFail, kSuccess };
const char* to_string(GameVerdict v);

// Realized quantities behind a verdict, for offline analysis.
struct GameDiagnostics {
  std::uint64_t non_empty = 0;             // |I~| (game 1) or sum_n d_n (game 2)
  std::uint64_t p_low = 0, p_high = 0;     // P, P'
  bool estimation_ran = false;
  Decision estimation = Decision::kAbort;
  bool decision_conforming = true;         // game 2: sum d_n == K
  std::vector<std::uint64_t> d_low, d_high;  // D_n, D'_n (game 2)
  std::vector<std::uint64_t> c_low, c_high;  // C_n, C'_n (game 2)
  std::uint64_t c_ge2 = 0, c_ge3 = 0;      // C_{>=2}, C_{>=3} over both classes
  std::uint64_t c_low_ge3 = 0;             // C_{>=3} of the nu class
  std::uint64_t d_low_ge3 = 0, d_high_ge3 = 0;  // D_{>=3}, D'_{>=3}
};

struct GameOutcome {
  GameVerdict verdict = GameVerdict::kAbort;
  GameDiagnostics diagnostics;
};

// How a game draws its randomness. kPerPulse follows the games literally,
// one Poisson draw and explicit index subsets per pulse. kCensus draws the
// per-class photon-number counts (multinomial), and the intensity split of
// acknowledged pulses (hypergeometric), directly: the same joint law of
// everything the verdict depends on, at O(max photon number) cost per trial.
// kCensus needs a two-intensity layout.
enum class GameEngine { kPerPulse, kCensus };

// Game 1. Honest lossy channel; Abort if fewer than K non-empty pulses, else
// run estimation on a uniform K-subset of them.
GameOutcome game_cor(const ProtocolParams& params, const TwoIntensityEstimator& estimation,
                     RngStream& rng, GameEngine engine = GameEngine::kPerPulse);

// Convenience form building the two-intensity estimator.
GameOutcome game_cor(const ProtocolParams& params, double delta0, RngStream& rng);

// Game 2. Lossless channel; the adversary sees only (c_n). Fail iff the
// estimation accepts and d_0 = d_1 = 0. Decisions with sum d_n != K cannot
// pass the sender's size check and score Success. Throws
// AdversaryContractError if some d_n > c_n.
GameOutcome game_sim(const ProtocolParams& params, const TwoIntensityEstimator& estimation,
                     const AdversaryStrategy& adversary, RngStream& rng,
                     GameEngine engine = GameEngine::kPerPulse);

GameOutcome game_sim(const ProtocolParams& params, double delta0,
                     const AdversaryStrategy& adversary, RngStream& rng);

// Draws the photon census of one batch; eta scales every intensity.
PhotonCensus sample_census(const ProtocolParams& params, double eta, RngStream& rng);

struct MonteCarloConfig {
  std::uint64_t trials = 20000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
  GameEngine engine = GameEngine::kPerPulse;
};

// Aggregate over independent trials. Trial i uses RngStream(seed, i), and the
// reduction is a sum of counts, so results do not depend on `threads`.
struct MonteCarloSummary {
  std::string game;       // "game_cor" or "game_sim"
  std::string adversary;  // empty for game_cor
  std::uint64_t trials = 0;
  std::uint64_t events = 0;    // Abort (game 1) or Fail (game 2) verdicts
  std::uint64_t accepts = 0;   // trials where the estimation ran and accepted
  std::uint64_t estimation_runs = 0;
  Interval wilson;             // 99.9% Wilson interval of events/trials

  double rate() const { return trials ? static_cast<double>(events) / trials : 0.0; }
};

MonteCarloSummary run_game_cor(const ProtocolParams& params,
                               const TwoIntensityEstimator& estimation,
                               const MonteCarloConfig& config);

MonteCarloSummary run_game_sim(const ProtocolParams& params,
                               const TwoIntensityEstimator& estimation,
                               const AdversaryStrategy& adversary,
                               const MonteCarloConfig& config);

// CSV: nu,nu_prime,eta,N,K,Delta0,game,adversary,trials,events,rate,wilson_lower,wilson_upper
void write_summary_csv_header(std::ostream& out);
void write_summary_csv_row(std::ostream& out, const ProtocolParams& params,
                           const TwoIntensityEstimator& estimation,
                           const MonteCarloSummary& summary);

}  // namespace wcprsp

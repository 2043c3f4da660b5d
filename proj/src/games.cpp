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

#include "wcprsp/games.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numeric>
#include <ostream>

#include "wcprsp/distributions.hpp"
#include "wcprsp/errors.hpp"
#include "wcprsp/format.hpp"
#include "wcprsp/parallel.hpp"

namespace wcprsp {

namespace {

constexpr std::uint64_t kAdversaryStream = 0xAD;

std::uint64_t sum_from(std::span<const std::uint64_t> v, std::size_t from) {
  std::uint64_t s = 0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i];
  return s;
}

void require_two_intensity(const ProtocolParams& params) {
  if (!params.is_two_intensity()) {
    throw ParameterError("game: the two-intensity estimator needs exactly two intensity classes");
  }
}

// Multinomial split of `pulses` pulses of Poisson(mean) photon numbers into
// counts per photon number, by sequential conditional binomials.
std::vector<std::uint64_t> multinomial_photon_counts(std::uint64_t pulses, double mean,
                                                     RngStream& rng) {
  std::vector<std::uint64_t> counts;
  std::uint64_t remaining = pulses;
  for (std::uint64_t n = 0; remaining > 0; ++n) {
    // P(X = n | X >= n); P(X >= n) is the regularized lower gamma P(n, mean).
    const double tail = n == 0 ? 1.0 : boost::math::gamma_p(static_cast<double>(n), mean);
    const double pmf = poisson_pmf(n, mean).value();
    double p = tail > 0.0 ? pmf / tail : 1.0;
    if (!(p < 1.0) || n > 10000) p = 1.0;
    const std::uint64_t here = binomial_sample(remaining, Probability(std::max(0.0, p)), rng);
    counts.push_back(here);
    remaining -= here;
  }
  return counts;
}

void add_into(std::vector<std::uint64_t>& acc, const std::vector<std::uint64_t>& v) {
  if (acc.size() < v.size()) acc.resize(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}

void fill_census_diagnostics(const PhotonCensus& census, GameDiagnostics& d) {
  d.c_ge2 = census.at_least(2);
  d.c_ge3 = census.at_least(3);
  d.c_low_ge3 = census.class_at_least(0, 3);
  if (census.by_class.size() == 2) {
    d.c_low = census.by_class[0];
    d.c_high = census.by_class[1];
  }
}

void validate_decision(const AdversaryDecision& dec, std::span<const std::uint64_t> counts) {
  for (std::size_t n = 0; n < dec.accept_by_n.size(); ++n) {
    const std::uint64_t c = n < counts.size() ? counts[n] : 0;
    if (dec.accept_by_n[n] > c) {
      throw AdversaryContractError("adversary accepted d_" + std::to_string(n) + "=" +
                                   std::to_string(dec.accept_by_n[n]) + " > c_" +
                                   std::to_string(n) + "=" + std::to_string(c));
    }
  }
}

// Keeps `keep` of the items described by per-class sizes, uniformly at random
// without replacement (multivariate hypergeometric).
std::vector<std::uint64_t> uniform_keep(const std::vector<std::uint64_t>& sizes,
                                        std::uint64_t keep, RngStream& rng) {
  std::uint64_t population = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
  std::vector<std::uint64_t> out(sizes.size(), 0);
  for (std::size_t i = 0; i < sizes.size() && keep > 0; ++i) {
    out[i] = hypergeometric_sample(population, keep, sizes[i], rng);
    population -= sizes[i];
    keep -= out[i];
  }
  return out;
}

class PnsGreedy final : public AdversaryStrategy {
 public:
  std::string name() const override { return "pns_greedy"; }
  AdversaryDecision decide(std::span<const std::uint64_t> counts, std::uint64_t k,
                           RngStream&) const override {
    AdversaryDecision d;
    d.accept_by_n.assign(counts.size(), 0);
    std::uint64_t room = k;
    for (std::size_t n = counts.size(); n-- > 2 && room > 0;) {
      d.accept_by_n[n] = std::min(counts[n], room);
      room -= d.accept_by_n[n];
    }
    return d;
  }
};

class BetaAttack final : public AdversaryStrategy {
 public:
  explicit BetaAttack(Probability beta) : beta_(beta) {}
  std::string name() const override { return "beta(" + format_number(beta_.value()) + ")"; }
  AdversaryDecision decide(std::span<const std::uint64_t> counts, std::uint64_t k,
                           RngStream&) const override {
    AdversaryDecision d;
    d.accept_by_n.assign(std::max<std::size_t>(counts.size(), 3), 0);
    const std::uint64_t c2 = counts.size() > 2 ? counts[2] : 0;
    d.accept_by_n[2] = std::min<std::uint64_t>(
        k, static_cast<std::uint64_t>(std::llround(beta_.value() * static_cast<double>(c2))));
    std::uint64_t room = k - d.accept_by_n[2];
    for (std::size_t n = counts.size(); n-- > 3 && room > 0;) {
      d.accept_by_n[n] = std::min(counts[n], room);
      room -= d.accept_by_n[n];
    }
    return d;
  }

 private:
  Probability beta_;
};

class HonestMimic final : public AdversaryStrategy {
 public:
  explicit HonestMimic(double eta) : eta_(eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("honest_mimic: eta must lie in [0,1]");
  }
  std::string name() const override { return "honest_mimic(" + format_number(eta_) + ")"; }
  AdversaryDecision decide(std::span<const std::uint64_t> counts, std::uint64_t k,
                           RngStream& rng) const override {
    AdversaryDecision d;
    d.accept_by_n.assign(counts.size(), 0);
    for (std::size_t n = 1; n < counts.size(); ++n) {
      const double survive = -std::expm1(static_cast<double>(n) * std::log1p(-eta_));
      d.accept_by_n[n] = binomial_sample(counts[n], Probability(std::min(1.0, survive)), rng);
    }
    const std::uint64_t total = d.total();
    if (total > k) {
      d.accept_by_n = uniform_keep(d.accept_by_n, k, rng);
    } else if (total < k) {
      std::vector<std::uint64_t> spare(counts.size(), 0);
      for (std::size_t n = 1; n < counts.size(); ++n) spare[n] = counts[n] - d.accept_by_n[n];
      const std::uint64_t available = std::accumulate(spare.begin(), spare.end(), std::uint64_t{0});
      const auto extra = uniform_keep(spare, std::min(available, k - total), rng);
      for (std::size_t n = 0; n < extra.size(); ++n) d.accept_by_n[n] += extra[n];
    }
    return d;
  }

 private:
  double eta_;
};

class FunctionAdversary final : public AdversaryStrategy {
 public:
  using Fn = std::function<AdversaryDecision(std::span<const std::uint64_t>, std::uint64_t,
                                             RngStream&)>;
  FunctionAdversary(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string name() const override { return name_; }
  AdversaryDecision decide(std::span<const std::uint64_t> counts, std::uint64_t k,
                           RngStream& rng) const override {
    return fn_(counts, k, rng);
  }

 private:
  std::string name_;
  Fn fn_;
};

}  // namespace

std::uint64_t PhotonCensus::total() const { return sum_from(counts, 0); }
std::uint64_t PhotonCensus::at_least(std::size_t n) const { return sum_from(counts, n); }
std::uint64_t PhotonCensus::class_at_least(std::size_t cls, std::size_t n) const {
  return cls < by_class.size() ? sum_from(by_class[cls], n) : 0;
}

std::uint64_t AdversaryDecision::total() const { return sum_from(accept_by_n, 0); }

std::unique_ptr<AdversaryStrategy> adversary_pns_greedy() { return std::make_unique<PnsGreedy>(); }
std::unique_ptr<AdversaryStrategy> adversary_beta(Probability beta) {
  return std::make_unique<BetaAttack>(beta);
}
std::unique_ptr<AdversaryStrategy> adversary_honest_mimic(double eta) {
  return std::make_unique<HonestMimic>(eta);
}
std::unique_ptr<AdversaryStrategy> adversary_from_function(
    std::string name,
    std::function<AdversaryDecision(std::span<const std::uint64_t>, std::uint64_t, RngStream&)> fn) {
  return std::make_unique<FunctionAdversary>(std::move(name), std::move(fn));
}

const char* to_string(GameVerdict v) {
  switch (v) {
    case GameVerdict::kAbort:
      return "Abort";
    case GameVerdict::kAccept:
      return "Accept";
    case GameVerdict::kFail:
      return "Fail";
    case GameVerdict::kSuccess:
      return "Success";
  }
  return "?";
}

PhotonCensus sample_census(const ProtocolParams& params, double eta, RngStream& rng) {
  PhotonCensus census;
  const auto& classes = params.labels.class_intensity;
  census.by_class.reserve(classes.size());
  for (std::size_t k = 0; k < classes.size(); ++k) {
    census.by_class.push_back(multinomial_photon_counts(
        params.pulses_in_class(static_cast<std::uint8_t>(k)), classes[k] * eta, rng));
    add_into(census.counts, census.by_class.back());
  }
  return census;
}

GameOutcome game_cor(const ProtocolParams& params, const TwoIntensityEstimator& estimation,
                     RngStream& rng, GameEngine engine) {
  require_two_intensity(params);
  GameOutcome out;
  GameDiagnostics& d = out.diagnostics;
  const std::uint32_t k = params.batch_size;

  if (engine == GameEngine::kCensus) {
    const std::uint64_t low = params.pulses_in_class(0);
    const std::uint64_t high = params.n_pulses - low;
    const Coefficients& co = estimation.coeffs();
    const std::uint64_t det_low = binomial_sample(low, Probability(co.detect(params.eta)), rng);
    const std::uint64_t det_high =
        binomial_sample(high, Probability(co.detect_prime(params.eta)), rng);
    d.non_empty = det_low + det_high;
    if (d.non_empty < k) {
      out.verdict = GameVerdict::kAbort;
      return out;
    }
    d.p_low = hypergeometric_sample(d.non_empty, k, det_low, rng);
    d.p_high = k - d.p_low;
  } else {
    std::vector<std::uint32_t> non_empty;
    for (std::uint32_t i = 0; i < params.n_pulses; ++i) {
      if (poisson_sample(params.intensities[i] * params.eta, rng) >= 1) non_empty.push_back(i);
    }
    d.non_empty = non_empty.size();
    if (d.non_empty < k) {
      out.verdict = GameVerdict::kAbort;
      return out;
    }
    const auto chosen = random_subset(non_empty, k, rng);
    const AcceptedCounts counts = estimation.tally(chosen, params.labels);
    d.p_low = counts.p_low;
    d.p_high = counts.p_high;
  }
  d.estimation_ran = true;
  d.estimation = estimation.decide_counts({d.p_low, d.p_high});
  out.verdict = d.estimation == Decision::kAccept ? GameVerdict::kAccept : GameVerdict::kAbort;
  return out;
}

GameOutcome game_cor(const ProtocolParams& params, double delta0, RngStream& rng) {
  require_two_intensity(params);
  const auto& cls = params.labels.class_intensity;
  const TwoIntensityEstimator est(coefficients(cls[0], cls[1]), params.eta, params.n_pulses,
                                  delta0);
  return game_cor(params, est, rng);
}

GameOutcome game_sim(const ProtocolParams& params, const TwoIntensityEstimator& estimation,
                     const AdversaryStrategy& adversary, RngStream& rng, GameEngine engine) {
  require_two_intensity(params);
  GameOutcome out;
  GameDiagnostics& d = out.diagnostics;
  const std::uint32_t k = params.batch_size;
  RngStream adversary_rng = rng.split(kAdversaryStream);

  PhotonCensus census;
  std::vector<std::vector<std::uint32_t>> by_photons;  // J_n, per-pulse engine only
  if (engine == GameEngine::kCensus) {
    census = sample_census(params, 1.0, rng);
  } else {
    census.by_class.assign(2, {});
    for (std::uint32_t i = 0; i < params.n_pulses; ++i) {
      const auto n = static_cast<std::size_t>(poisson_sample(params.intensities[i], rng));
      if (by_photons.size() <= n) by_photons.resize(n + 1);
      by_photons[n].push_back(i);
      auto& row = census.by_class[params.labels.class_of[i]];
      if (row.size() <= n) row.resize(n + 1, 0);
      ++row[n];
    }
    for (const auto& row : census.by_class) add_into(census.counts, row);
  }
  fill_census_diagnostics(census, d);

  const AdversaryDecision dec = adversary.decide(census.counts, k, adversary_rng);
  validate_decision(dec, census.counts);
  d.non_empty = dec.total();
  const std::size_t width = std::max(dec.accept_by_n.size(), census.counts.size());
  d.d_low.assign(width, 0);
  d.d_high.assign(width, 0);

  if (dec.total() != k) {
    d.decision_conforming = false;
    out.verdict = GameVerdict::kSuccess;
    return out;
  }

  for (std::size_t n = 0; n < dec.accept_by_n.size(); ++n) {
    const std::uint64_t dn = dec.accept_by_n[n];
    if (dn == 0) continue;
    if (engine == GameEngine::kCensus) {
      const std::uint64_t c_low = n < census.by_class[0].size() ? census.by_class[0][n] : 0;
      d.d_low[n] = hypergeometric_sample(census.counts[n], dn, c_low, rng);
    } else {
      const auto chosen = random_subset(by_photons[n], static_cast<std::uint32_t>(dn), rng);
      for (std::uint32_t i : chosen) d.d_low[n] += params.labels.class_of[i] == 0 ? 1 : 0;
    }
    d.d_high[n] = dn - d.d_low[n];
  }
  d.p_low = sum_from(d.d_low, 0);
  d.p_high = sum_from(d.d_high, 0);
  d.d_low_ge3 = sum_from(d.d_low, 3);
  d.d_high_ge3 = sum_from(d.d_high, 3);
  d.estimation_ran = true;
  d.estimation = estimation.decide_counts({d.p_low, d.p_high});
  const bool no_single = dec.at(0) == 0 && dec.at(1) == 0;
  out.verdict = d.estimation == Decision::kAccept && no_single ? GameVerdict::kFail
                                                               : GameVerdict::kSuccess;
  return out;
}

GameOutcome game_sim(const ProtocolParams& params, double delta0,
                     const AdversaryStrategy& adversary, RngStream& rng) {
  require_two_intensity(params);
  const auto& cls = params.labels.class_intensity;
  const TwoIntensityEstimator est(coefficients(cls[0], cls[1]), params.eta, params.n_pulses,
                                  delta0);
  return game_sim(params, est, adversary, rng);
}

namespace {

template <typename TrialFn>
MonteCarloSummary run_trials(const MonteCarloConfig& config, TrialFn&& trial) {
  struct Slot {
    bool event = false;
    bool ran = false;
    bool accepted = false;
  };
  std::vector<Slot> slots(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t i) {
    RngStream rng(config.seed, i);
    const GameOutcome o = trial(rng);
    slots[i] = {o.verdict == GameVerdict::kAbort || o.verdict == GameVerdict::kFail,
                o.diagnostics.estimation_ran,
                o.diagnostics.estimation_ran && o.diagnostics.estimation == Decision::kAccept};
  });
  MonteCarloSummary s;
  s.trials = config.trials;
  for (const Slot& slot : slots) {
    s.events += slot.event;
    s.estimation_runs += slot.ran;
    s.accepts += slot.accepted;
  }
  s.wilson = wilson_interval(s.events, s.trials);
  return s;
}

}  // namespace

MonteCarloSummary run_game_cor(const ProtocolParams& params,
                               const TwoIntensityEstimator& estimation,
                               const MonteCarloConfig& config) {
  MonteCarloSummary s = run_trials(
      config, [&](RngStream& rng) { return game_cor(params, estimation, rng, config.engine); });
  s.game = "game_cor";
  return s;
}

MonteCarloSummary run_game_sim(const ProtocolParams& params,
                               const TwoIntensityEstimator& estimation,
                               const AdversaryStrategy& adversary,
                               const MonteCarloConfig& config) {
  MonteCarloSummary s = run_trials(config, [&](RngStream& rng) {
    return game_sim(params, estimation, adversary, rng, config.engine);
  });
  s.game = "game_sim";
  s.adversary = adversary.name();
  return s;
}

void write_summary_csv_header(std::ostream& out) {
  out << "nu,nu_prime,eta,N,K,Delta0,game,adversary,trials,events,rate,wilson_lower,"
         "wilson_upper\n";
}

void write_summary_csv_row(std::ostream& out, const ProtocolParams& params,
                           const TwoIntensityEstimator& est, const MonteCarloSummary& s) {
  const auto quote = [](const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  out << format_number(est.coeffs().nu) << ',' << format_number(est.coeffs().nu_prime) << ','
      << format_number(params.eta) << ',' << params.n_pulses << ',' << params.batch_size << ','
      << format_number(est.delta0()) << ',' << s.game << ',' << quote(s.adversary) << ','
      << s.trials << ',' << s.events << ',' << format_number(s.rate()) << ','
      << format_number(s.wilson.lower) << ',' << format_number(s.wilson.upper) << '\n';
}

}  // namespace wcprsp

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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wcprsp/bounds.hpp"

namespace wcprsp {

// ---- optimizer -------------------------------------------------------------

// What the optimizer may vary besides the six slacks.
//   alpha set, nu_prime unset: nu' free, nu = alpha nu'.
//   alpha set, nu_prime set:   both intensities fixed.
//   alpha unset:               nu' and the ratio nu/nu' both free.
struct OptimizeConfig {
  double eta = 1.0;
  std::uint64_t n_pulses = 0;
  std::optional<double> alpha = 0.5;
  std::optional<double> nu_prime;
  BoundOptions bounds;
  int max_iterations = 4000;  // per local search
  int restarts = 2;
  int seeds_refined = 3;
};

struct OptimizationResult {
  SlackParams best_slack;
  double nu = 0.0;
  double nu_prime = 0.0;
  ErrorBudget budget;  // epsilon_ac at (best_slack, nu, nu_prime)
  std::uint64_t evaluations = 0;
  bool converged = false;  // constraints hold and eps_AC < 1
};

// Minimizes log eps_AC: a log-grid of seeds (Delta0 = eta/3, the other slacks
// proportional to eta), then Nelder-Mead in log coordinates from the best
// feasible seeds. Infeasible points score a constant above every feasible
// one. Deterministic.
OptimizationResult optimize(const OptimizeConfig& config);

// ---- scaling sweep -----------------------------------------------------------

enum class NuPrimePolicy {
  kPerEta,  // nu' optimized with the slacks at every (eta, N)
  kShared,  // one nu' for the whole grid: the optimum at the smallest eta
};

struct ScalingConfig {
  std::vector<double> eta_grid{0.1, 0.05, 0.02, 0.01, 0.005};
  double eps_target = 1e-6;
  double alpha = 0.5;
  NuPrimePolicy policy = NuPrimePolicy::kPerEta;
  std::optional<double> nu_prime;  // overrides the shared nu' when set
  double grid_ratio = 1.2;
  std::uint64_t n_start = 100;
  std::uint64_t n_max = 1'000'000'000'000'000ULL;
  unsigned threads = 0;
  BoundOptions bounds;
};

struct ScalingPoint {
  double eta = 0.0;
  std::uint64_t n_min = 0;
  OptimizationResult optimum;  // at n_min
};

struct ScalingFit {
  std::vector<ScalingPoint> grid;
  std::vector<double> dropped;  // etas with no N <= n_max meeting the target
  double nu_prime = 0.0;        // shared value; 0 under kPerEta
  double slope = 0.0;           // of log N_min against log eta
  double intercept = 0.0;
  double r_squared = 0.0;
};

// The least N on the grid n_start * ratio^j whose optimized eps_AC meets the
// target, found by galloping then bisection over j. nullopt if none <= n_max.
std::optional<ScalingPoint> minimal_n(double eta, double eps_target, double alpha,
                                      std::optional<double> nu_prime,
                                      const ScalingConfig& config);

// Throws ParameterError for fewer than two etas, etas outside (0, 0.2] or a
// target outside (0,1); InfeasibleError when fewer than two points survive.
ScalingFit scaling_sweep(const ScalingConfig& config);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
// Least squares; throws ParameterError on fewer than two points.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// ---- maximal intensities -----------------------------------------------------

// nu* such that 1 - e^{-eta0 nu} = 1 - e^{-nu}(1 + nu), via W_{-1}.
double nu_star_dkl(double eta0);
// Same root by bisection on (1 - eta0) nu - log(1 + nu), for cross-checks.
double nu_star_dkl_bisection(double eta0);

struct GlmoRoot {
  double nu_prime = 0.0;  // the root in nu'
  double bracket_low = 0.0, bracket_high = 0.0;
  int sign_changes = 0;   // > 1 flags multiple roots; the smallest is returned
};

// g(nu') = c'(1 - e^{-eta0 alpha nu'}) - c(1 - e^{-eta0 nu'}) - c'(1 - a - b - c)
// with nu = alpha nu'.
double glmo_margin(double nu_prime, double eta0, double alpha);

// Smallest + to - sign change of g on a log grid over [1e-4, 1e3], refined by
// bisection. Throws InfeasibleError when g never changes sign there.
GlmoRoot nu_star_glmo_root(double eta0, double alpha);
double nu_star_glmo(double eta0, double alpha);

enum class Winner { kGlmo, kDkl, kNone };
const char* to_string(Winner w);

struct NuStarPoint {
  double eta0 = 0.0;
  double alpha = 0.0;
  double nu_star_glmo = 0.0;  // NaN when no root was found
  double nu_star_dkl = 0.0;
  Winner winner = Winner::kNone;
  bool multiple_roots = false;
};

NuStarPoint nu_star_point(double eta0, double alpha);

enum class FigureKind { kFigEta, kFigAlpha, kDensity };

// eta0 axis: 100 log-spaced points over about [1e-3, 0.95], placed so that
// 0.2 is a node. alpha axis: 100 uniform points in (0, 1) containing 0.5.
std::vector<double> figure_eta0_grid();
std::vector<double> figure_alpha_grid();

// fig_eta: alpha = 0.5 along the eta0 axis. fig_alpha: eta0 = 0.2 along the
// alpha axis. density: every (alpha, eta0) pair, alpha-major.
std::vector<NuStarPoint> figure_data(FigureKind which, unsigned threads = 0);

void write_figure_csv(std::ostream& out, FigureKind which, const std::vector<NuStarPoint>& rows);

}  // namespace wcprsp

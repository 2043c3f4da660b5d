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

#include "wcprsp/analysis.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>

#include "wcprsp/errors.hpp"
#include "wcprsp/format.hpp"
#include "wcprsp/lambert_w.hpp"
#include "wcprsp/parallel.hpp"

namespace wcprsp {

namespace {

constexpr double kInfeasibleScore = 1.0e3;
constexpr double kMaxNuPrime = 50.0;

// ---- local search ----------------------------------------------------------

struct LocalResult {
  std::vector<double> x;
  double f = 0.0;
};

using Objective = std::function<double(const std::vector<double>&)>;

double gsl_trampoline(const gsl_vector* v, void* params) {
  const auto& fn = *static_cast<const Objective*>(params);
  std::vector<double> x(v->size);
  for (std::size_t i = 0; i < v->size; ++i) x[i] = gsl_vector_get(v, i);
  return fn(x);
}

LocalResult nelder_mead(const Objective& fn, const std::vector<double>& x0, double step,
                        int max_iterations) {
  const std::size_t n = x0.size();
  using Minimizer = std::unique_ptr<gsl_multimin_fminimizer, void (*)(gsl_multimin_fminimizer*)>;
  using Vector = std::unique_ptr<gsl_vector, void (*)(gsl_vector*)>;
  Minimizer s(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n),
              gsl_multimin_fminimizer_free);
  Vector x(gsl_vector_alloc(n), gsl_vector_free);
  Vector steps(gsl_vector_alloc(n), gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(steps.get(), step);

  gsl_multimin_function f;
  f.n = n;
  f.f = gsl_trampoline;
  f.params = const_cast<Objective*>(&fn);
  gsl_multimin_fminimizer_set(s.get(), &f, x.get(), steps.get());
  for (int it = 0; it < max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), 1e-10) == GSL_SUCCESS) break;
  }
  LocalResult r;
  r.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.x[i] = gsl_vector_get(s->x, i);
  r.f = s->fval;
  return r;
}

struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
};

// ---- parametrization ---------------------------------------------------------

struct Point {
  SlackParams slack;
  double nu = 0.0;
  double nu_prime = 0.0;
};

class Layout {
 public:
  explicit Layout(const OptimizeConfig& c) : config_(c) {
    if (c.alpha && !(*c.alpha > 0.0 && *c.alpha < 1.0)) {
      throw ParameterError("optimize: alpha must lie in (0, 1)");
    }
    if (c.nu_prime && !(*c.nu_prime > 0.0)) throw ParameterError("optimize: nu' must be positive");
    if (!c.alpha && c.nu_prime) throw ParameterError("optimize: fixed nu' needs a fixed alpha");
  }

  bool free_nu_prime() const { return !config_.nu_prime; }
  bool free_alpha() const { return !config_.alpha; }
  std::size_t dims() const { return 6 + (free_nu_prime() ? 1 : 0) + (free_alpha() ? 1 : 0); }

  std::vector<double> encode(const SlackParams& s, double nu_prime, double alpha) const {
    std::vector<double> x{std::log(s.delta),       std::log(s.delta0),
                          std::log(s.delta0_small), std::log(s.delta0_small_prime),
                          std::log(s.gamma0),      std::log(s.gamma0_prime)};
    if (free_nu_prime()) x.push_back(std::log(nu_prime));
    if (free_alpha()) x.push_back(std::log(alpha / (1.0 - alpha)));
    return x;
  }

  Point decode(const std::vector<double>& x) const {
    Point p;
    p.slack = {std::exp(x[0]), std::exp(x[1]), std::exp(x[2]),
               std::exp(x[3]), std::exp(x[4]), std::exp(x[5])};
    std::size_t i = 6;
    p.nu_prime = free_nu_prime() ? std::exp(x[i++]) : *config_.nu_prime;
    const double alpha = free_alpha() ? 1.0 / (1.0 + std::exp(-x[i])) : *config_.alpha;
    p.nu = alpha * p.nu_prime;
    return p;
  }

 private:
  const OptimizeConfig& config_;
};

std::optional<ErrorBudget> evaluate(const Point& p, const OptimizeConfig& c) {
  if (!(p.nu > 0.0 && p.nu < p.nu_prime && p.nu_prime <= kMaxNuPrime)) return std::nullopt;
  return epsilon_ac(coefficients(p.nu, p.nu_prime), c.eta, c.n_pulses, p.slack, c.bounds);
}

double score(const std::optional<ErrorBudget>& b) {
  if (!b || !b->constraints_satisfied || !std::isfinite(b->eps_ac.log)) return kInfeasibleScore;
  return b->eps_ac.log;
}

}  // namespace

OptimizationResult optimize(const OptimizeConfig& config) {
  static const GslQuiet quiet;
  if (!(config.eta > 0.0 && config.eta <= 1.0)) throw ParameterError("optimize: eta must lie in (0, 1]");
  if (config.n_pulses < 2) throw ParameterError("optimize: N must be at least 2");
  const Layout layout(config);

  std::uint64_t evaluations = 0;
  const Objective objective = [&](const std::vector<double>& x) {
    ++evaluations;
    for (double v : x) {
      if (!std::isfinite(v) || std::abs(v) > 700.0) return kInfeasibleScore;
    }
    return score(evaluate(layout.decode(x), config));
  };

  // Seeds: Delta0 = eta/3 and the remaining slacks proportional to eta.
  std::vector<double> nu_primes = layout.free_nu_prime()
                                      ? std::vector<double>{0.05, 0.1, 0.2, 0.5, 1.0, 2.0}
                                      : std::vector<double>{*config.nu_prime};
  std::vector<double> alphas = layout.free_alpha() ? std::vector<double>{0.25, 0.5, 0.75}
                                                   : std::vector<double>{*config.alpha};
  struct Seed {
    std::vector<double> x;
    double f;
  };
  std::vector<Seed> seeds;
  const double eta = config.eta;
  for (double np : nu_primes) {
    for (double alpha : alphas) {
      const Coefficients k = coefficients(alpha * np, np);
      const double ceiling = (k.detect(eta) + k.detect_prime(eta)) / 2.0;
      for (double s : {0.01, 0.03, 0.1, 0.3}) {
        SlackParams slack;
        slack.delta = s * ceiling;
        slack.delta0 = eta / 3.0;
        slack.delta0_small = slack.delta0_small_prime = std::min(0.5, s * eta / np);
        slack.gamma0 = std::min(k.c / 2.0, s * eta * np * alpha * (1.0 - alpha));
        slack.gamma0_prime = std::min(k.c_prime / 2.0, slack.gamma0);
        auto x = layout.encode(slack, np, alpha);
        const double f = objective(x);
        seeds.push_back({std::move(x), f});
      }
    }
  }
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const Seed& a, const Seed& b) { return a.f < b.f; });

  LocalResult best{seeds.front().x, seeds.front().f};
  const std::size_t refine = std::min<std::size_t>(seeds.size(),
                                                   static_cast<std::size_t>(config.seeds_refined));
  for (std::size_t i = 0; i < refine; ++i) {
    if (seeds[i].f >= kInfeasibleScore) break;
    LocalResult r = nelder_mead(objective, seeds[i].x, 0.5, config.max_iterations);
    for (int k = 0; k < config.restarts; ++k) {
      LocalResult again = nelder_mead(objective, r.x, 0.1, config.max_iterations);
      if (!(again.f < r.f)) break;
      r = std::move(again);
    }
    if (r.f < best.f) best = std::move(r);
  }

  OptimizationResult out;
  const Point p = layout.decode(best.x);
  out.best_slack = p.slack;
  out.nu = p.nu;
  out.nu_prime = p.nu_prime;
  out.budget = epsilon_ac(coefficients(p.nu, p.nu_prime), config.eta, config.n_pulses, p.slack,
                          config.bounds);
  out.evaluations = evaluations;
  out.converged = out.budget.constraints_satisfied && out.budget.eps_ac.value < 1.0;
  return out;
}

// ---- scaling ---------------------------------------------------------------

namespace {

std::uint64_t grid_n(const ScalingConfig& c, int j) {
  return static_cast<std::uint64_t>(
      std::ceil(static_cast<double>(c.n_start) * std::pow(c.grid_ratio, j)));
}

}  // namespace

std::optional<ScalingPoint> minimal_n(double eta, double eps_target, double alpha,
                                      std::optional<double> nu_prime,
                                      const ScalingConfig& config) {
  if (!(config.grid_ratio > 1.0)) throw ParameterError("scaling: grid ratio must exceed 1");
  const double log_target = std::log(eps_target);
  auto run = [&](int j) {
    OptimizeConfig oc;
    oc.eta = eta;
    oc.n_pulses = grid_n(config, j);
    oc.alpha = alpha;
    oc.nu_prime = nu_prime;
    oc.bounds = config.bounds;
    return optimize(oc);
  };
  auto meets = [&](const OptimizationResult& r) {
    return r.converged && r.budget.eps_ac.log <= log_target;
  };

  int lo = -1;  // last grid index known to miss the target
  int hi = 0;
  OptimizationResult at_hi = run(hi);
  for (int step = 1; !meets(at_hi); step *= 2) {
    lo = hi;
    hi = lo + step;
    if (grid_n(config, hi) > config.n_max) {
      hi = lo + 1;
      while (grid_n(config, hi) <= config.n_max) {
        at_hi = run(hi);
        if (meets(at_hi)) break;
        lo = hi++;
      }
      if (grid_n(config, hi) > config.n_max) return std::nullopt;
      break;
    }
    at_hi = run(hi);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    OptimizationResult r = run(mid);
    if (meets(r)) {
      hi = mid;
      at_hi = std::move(r);
    } else {
      lo = mid;
    }
  }
  return ScalingPoint{eta, grid_n(config, hi), std::move(at_hi)};
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParameterError("fit: x and y differ in length");
  if (x.size() < 2) throw ParameterError("fit: a slope needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("fit: all x values coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

ScalingFit scaling_sweep(const ScalingConfig& config) {
  if (config.eta_grid.size() < 2) throw ParameterError("scaling: a slope needs at least two etas");
  for (double eta : config.eta_grid) {
    if (!(eta > 0.0 && eta <= 0.2)) throw ParameterError("scaling: eta must lie in (0, 0.2]");
  }
  if (!(config.eps_target > 0.0 && config.eps_target < 1.0)) {
    throw ParameterError("scaling: eps_target must lie in (0, 1)");
  }

  ScalingFit fit;
  std::optional<double> nu_prime;
  if (config.policy == NuPrimePolicy::kShared) {
    if (config.nu_prime) {
      nu_prime = config.nu_prime;
    } else {
      const double smallest = *std::min_element(config.eta_grid.begin(), config.eta_grid.end());
      const auto anchor = minimal_n(smallest, config.eps_target, config.alpha, std::nullopt, config);
      if (!anchor) throw InfeasibleError("scaling: no feasible N at the smallest eta");
      nu_prime = anchor->optimum.nu_prime;
    }
    fit.nu_prime = *nu_prime;
  }

  std::vector<std::optional<ScalingPoint>> points(config.eta_grid.size());
  parallel_for(
      points.size(), config.threads,
      [&](std::size_t i) {
        points[i] = minimal_n(config.eta_grid[i], config.eps_target, config.alpha, nu_prime, config);
      },
      1);

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i]) {
      fit.dropped.push_back(config.eta_grid[i]);
      continue;
    }
    lx.push_back(std::log(points[i]->eta));
    ly.push_back(std::log(static_cast<double>(points[i]->n_min)));
    fit.grid.push_back(std::move(*points[i]));
  }
  if (fit.grid.size() < 2) throw InfeasibleError("scaling: fewer than two feasible grid points");
  const LinearFit line = fit_line(lx, ly);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  return fit;
}

// ---- maximal intensities ---------------------------------------------------

double nu_star_dkl(double eta0) {
  if (!(eta0 > 0.0 && eta0 < 1.0)) throw DomainError("nu_star_dkl: eta0 must lie in (0, 1)");
  const double m = eta0 - 1.0;
  return lambert_w_minus1(m * std::exp(m)) / m - 1.0;
}

double nu_star_dkl_bisection(double eta0) {
  if (!(eta0 > 0.0 && eta0 < 1.0)) throw DomainError("nu_star_dkl: eta0 must lie in (0, 1)");
  auto h = [eta0](double nu) { return (1.0 - eta0) * nu - std::log1p(nu); };
  double lo = 0.0, hi = 1.0;
  while (h(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InfeasibleError("nu_star_dkl: no bracket below 1e12");
  }
  for (int i = 0; i < 400 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double glmo_margin(double nu_prime, double eta0, double alpha) {
  const double nu = alpha * nu_prime;
  const double c = nu * nu * std::exp(-nu) / 2.0;
  const double cp = nu_prime * nu_prime * std::exp(-nu_prime) / 2.0;
  return cp * -std::expm1(-eta0 * nu) - c * -std::expm1(-eta0 * nu_prime) -
         cp * multiphoton_tail(nu);
}

GlmoRoot nu_star_glmo_root(double eta0, double alpha) {
  if (!(eta0 > 0.0 && eta0 < 1.0)) throw DomainError("nu_star_glmo: eta0 must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("nu_star_glmo: alpha must lie in (0, 1)");
  constexpr double kLow = 1e-4, kHigh = 1e3;
  constexpr int kPoints = 1401;  // 200 per decade
  const double step = std::log(kHigh / kLow) / (kPoints - 1);

  GlmoRoot root;
  bool found = false;
  int prev_sign = 0;
  double prev_x = kLow;
  for (int i = 0; i < kPoints; ++i) {
    const double x = kLow * std::exp(step * i);
    const double g = glmo_margin(x, eta0, alpha);
    const int sign = g > 0.0 ? 1 : (g < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (prev_sign != 0 && sign != prev_sign) {
      ++root.sign_changes;
      if (!found && prev_sign > 0) {
        found = true;
        root.bracket_low = prev_x;
        root.bracket_high = x;
      }
    }
    prev_sign = sign;
    prev_x = x;
  }
  if (!found) {
    throw InfeasibleError("nu_star_glmo: no sign change of g over nu' in [1e-4, 1e3] (eta0=" +
                          std::to_string(eta0) + ", alpha=" + std::to_string(alpha) + ")");
  }
  double lo = root.bracket_low, hi = root.bracket_high;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (glmo_margin(mid, eta0, alpha) > 0.0 ? lo : hi) = mid;
  }
  root.nu_prime = 0.5 * (lo + hi);
  return root;
}

double nu_star_glmo(double eta0, double alpha) { return nu_star_glmo_root(eta0, alpha).nu_prime; }

const char* to_string(Winner w) {
  switch (w) {
    case Winner::kGlmo:
      return "GLMO";
    case Winner::kDkl:
      return "DKL";
    case Winner::kNone:
      return "none";
  }
  return "?";
}

NuStarPoint nu_star_point(double eta0, double alpha) {
  NuStarPoint p;
  p.eta0 = eta0;
  p.alpha = alpha;
  p.nu_star_dkl = nu_star_dkl(eta0);
  try {
    const GlmoRoot r = nu_star_glmo_root(eta0, alpha);
    p.nu_star_glmo = r.nu_prime;
    p.multiple_roots = r.sign_changes > 1;
    p.winner = p.nu_star_glmo > p.nu_star_dkl ? Winner::kGlmo : Winner::kDkl;
  } catch (const InfeasibleError&) {
    p.nu_star_glmo = std::numeric_limits<double>::quiet_NaN();
    p.winner = Winner::kNone;
  }
  return p;
}

std::vector<double> figure_eta0_grid() {
  constexpr int kPoints = 100;
  const double ratio = std::pow(0.95 / 1e-3, 1.0 / (kPoints - 1));
  const int anchor = static_cast<int>(std::ceil(std::log(0.2 / 1e-3) / std::log(ratio)));
  std::vector<double> g(kPoints);
  for (int i = 0; i < kPoints; ++i) g[i] = i == anchor ? 0.2 : 0.2 * std::pow(ratio, i - anchor);
  return g;
}

std::vector<double> figure_alpha_grid() {
  std::vector<double> g(100);
  for (int i = 0; i < 100; ++i) g[i] = i == 50 ? 0.5 : 0.5 + (i - 50) / 101.0;
  return g;
}

std::vector<NuStarPoint> figure_data(FigureKind which, unsigned threads) {
  const auto etas = figure_eta0_grid();
  const auto alphas = figure_alpha_grid();
  std::vector<std::pair<double, double>> cells;  // (eta0, alpha)
  switch (which) {
    case FigureKind::kFigEta:
      for (double e : etas) cells.emplace_back(e, 0.5);
      break;
    case FigureKind::kFigAlpha:
      for (double a : alphas) cells.emplace_back(0.2, a);
      break;
    case FigureKind::kDensity:
      for (double a : alphas) {
        for (double e : etas) cells.emplace_back(e, a);
      }
      break;
  }
  std::vector<NuStarPoint> rows(cells.size());
  parallel_for(cells.size(), threads,
               [&](std::size_t i) { rows[i] = nu_star_point(cells[i].first, cells[i].second); });
  return rows;
}

void write_figure_csv(std::ostream& out, FigureKind which, const std::vector<NuStarPoint>& rows) {
  if (which == FigureKind::kDensity) {
    out << "alpha,eta0,winner\n";
    for (const auto& r : rows) {
      out << format_number(r.alpha) << ',' << format_number(r.eta0) << ',' << to_string(r.winner)
          << '\n';
    }
  } else {
    out << "eta0,alpha,nu_star_GLMO,nu_star_DKL,winner,multiple_roots\n";
    for (const auto& r : rows) {
      out << format_number(r.eta0) << ',' << format_number(r.alpha) << ','
          << format_number(r.nu_star_glmo) << ',' << format_number(r.nu_star_dkl) << ',' << to_string(r.winner) << ','
          << (r.multiple_roots ? 1 : 0) << '\n';
    }
  }
}

}  // namespace wcprsp

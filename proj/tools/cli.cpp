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

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "wcprsp/analysis.hpp"
#include "wcprsp/bounds.hpp"
#include "wcprsp/errors.hpp"
#include "wcprsp/format.hpp"
#include "wcprsp/games.hpp"
#include "wcprsp/params.hpp"
#include "wcprsp/protocol.hpp"
#include "wcprsp/transcript_io.hpp"

namespace wcprsp::cli {

namespace {

using nlohmann::json;

std::string num(double v) { return format_number(v); }

template <typename T>
std::string num(T v) requires std::is_integral_v<T> {
  return std::to_string(v);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

struct Settings {
  double nu = 0.1, nu_prime = 0.2, eta = 0.5;
  std::uint64_t n = 2000;
  std::uint32_t k = 0;
  double delta = 0.01, Delta0 = 0.01;
  double delta0 = 1e-3, delta0p = 1e-3, gamma0 = 1e-3, gamma0p = 1e-3;
  double union_factor = 32.0;
  std::uint64_t seed = 1, trials = 20000, runs = 1000;
  unsigned threads = 0;
  std::string format;
  std::string output;
  std::string engine = "per-pulse";
  std::string adversary = "pns";
  double beta = 0.5;
  double mimic_eta = -1.0;
  std::string receiver = "honest";
  std::string transcript;
  double alpha = 0.5;
  bool free_intensities = false;
  double fix_nu_prime = 0.0;
  std::uint64_t n_pulses = 100000;
  std::vector<double> etas{0.1, 0.05, 0.02, 0.01, 0.005};
  double eps_target = 1e-6;
  std::string policy = "per-eta";
  double grid_ratio = 1.2;
  std::uint64_t n_start = 100;
  std::string mode = "fig_eta";
  double eta0 = 0.2;
  std::string output_dir = ".";
};

// Ordered (key, value) record of the settings a command depends on. Written
// as "# key = value" lines; stripping the "# " prefix yields a --config file
// that reproduces the run.
using Record = std::vector<std::pair<std::string, std::string>>;

struct Context {
  Settings s;
  CLI::App* app = nullptr;
  CLI::Option* k_opt = nullptr;
  std::ostream* summary = nullptr;
  std::ostream* artifact = nullptr;
  std::unique_ptr<std::ofstream> file;
  std::string command;

  bool k_given() const { return k_opt->count() > 0; }
};

void write_record_comments(std::ostream& out, const std::string& command, const Record& r) {
  out << "# wcprsp " << command << '\n';
  for (const auto& [key, value] : r) out << "# " << key << " = " << value << '\n';
}

json record_json(const std::string& command, const Record& r) {
  json cfg = json::object();
  for (const auto& [key, value] : r) cfg[key] = value;
  return {{"command", command}, {"config", cfg}};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

Coefficients coeffs_of(const Settings& s) {
  require(s.nu > 0.0 && s.nu < s.nu_prime, "--nu/--nu-prime: need 0 < nu < nu-prime");
  return coefficients(s.nu, s.nu_prime);
}

void check_eta(double eta) { require(eta > 0.0 && eta <= 1.0, "--eta: must lie in (0, 1]"); }

ProtocolParams params_of(const Context& c) {
  const Settings& s = c.s;
  coeffs_of(s);
  check_eta(s.eta);
  require(s.n >= 2 && s.n % 2 == 0, "--n: must be even and at least 2");
  require(s.n <= std::numeric_limits<std::uint32_t>::max(), "--n: simulations need N < 2^32");
  const auto n = static_cast<std::uint32_t>(s.n);
  if (c.k_given()) return ProtocolParams::two_intensity(s.nu, s.nu_prime, s.eta, n, s.k);
  return ProtocolParams::two_intensity_from_delta(s.nu, s.nu_prime, s.eta, n, s.delta);
}

Record protocol_record(const Context& c) {
  const Settings& s = c.s;
  Record r{{"nu", num(s.nu)}, {"nu-prime", num(s.nu_prime)}, {"eta", num(s.eta)}, {"n", num(s.n)}};
  if (c.k_given()) {
    r.emplace_back("k", num(s.k));
  } else {
    r.emplace_back("delta", num(s.delta));
  }
  r.emplace_back("Delta0", num(s.Delta0));
  return r;
}

std::string format_of(const Context& c, const std::string& fallback) {
  const std::string f = c.s.format.empty() ? fallback : c.s.format;
  require(f == "csv" || f == "json", "--format: expected csv or json");
  return f;
}

// ---- commands --------------------------------------------------------------

int cmd_coeffs(Context& c) {
  const Coefficients k = coeffs_of(c.s);
  check_eta(c.s.eta);
  const std::string fmt = format_of(c, "csv");
  const Record rec{{"nu", num(c.s.nu)}, {"nu-prime", num(c.s.nu_prime)}, {"eta", num(c.s.eta)},
                   {"format", fmt}};
  const std::vector<std::pair<std::string, double>> cols{
      {"nu", k.nu},
      {"nu_prime", k.nu_prime},
      {"a", k.a},
      {"b", k.b},
      {"c", k.c},
      {"a_prime", k.a_prime},
      {"b_prime", k.b_prime},
      {"c_prime", k.c_prime},
      {"discriminant", k.discriminant},
      {"a_eta", k.a_eta(c.s.eta)},
      {"a_prime_eta", k.a_prime_eta(c.s.eta)},
      {"tail_ge3", multiphoton_tail(k.nu)},
      {"tail_ge3_prime", multiphoton_tail(k.nu_prime)}};
  std::ostream& out = *c.artifact;
  if (fmt == "json") {
    json j = record_json(c.command, rec);
    for (const auto& [name, v] : cols) j["result"][name] = v;
    out << j.dump(2) << '\n';
  } else {
    write_record_comments(out, c.command, rec);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].first;
    out << '\n';
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << num(cols[i].second);
    out << '\n';
  }
  *c.summary << "bc'-b'c = " << num(k.discriminant) << "\n";
  return kOk;
}

SlackParams slack_of(const Settings& s) {
  return {s.delta, s.Delta0, s.delta0, s.delta0p, s.gamma0, s.gamma0p};
}

int cmd_bounds(Context& c) {
  const Settings& s = c.s;
  const Coefficients k = coeffs_of(s);
  check_eta(s.eta);
  require(s.n >= 1, "--n: must be positive");
  require(s.union_factor > 0.0, "--union-factor: must be positive");
  const std::string fmt = format_of(c, "json");
  const ErrorBudget b = epsilon_ac(k, s.eta, s.n, slack_of(s), {s.union_factor});
  const Record rec{{"nu", num(s.nu)},         {"nu-prime", num(s.nu_prime)},
                   {"eta", num(s.eta)},       {"n", num(s.n)},
                   {"delta", num(s.delta)},   {"Delta0", num(s.Delta0)},
                   {"delta0", num(s.delta0)}, {"delta0p", num(s.delta0p)},
                   {"gamma0", num(s.gamma0)}, {"gamma0p", num(s.gamma0p)},
                   {"union-factor", num(s.union_factor)}, {"format", fmt}};
  std::ostream& out = *c.artifact;
  if (fmt == "json") {
    json j = record_json(c.command, rec);
    j["result"] = to_json(b);
    out << j.dump(2) << '\n';
  } else {
    write_record_comments(out, c.command, rec);
    out << "eps_corr,eps_sec,eps_AC,log_eps_corr,log_eps_sec,log_eps_AC,Delta0p,Delta0pp,Gamma,C,"
           "constraints_satisfied,pik_branch\n"
        << num(b.eps_corr.value) << ',' << num(b.eps_sec.value) << ',' << num(b.eps_ac.value) << ','
        << num(b.eps_corr.log) << ',' << num(b.eps_sec.log) << ',' << num(b.eps_ac.log) << ','
        << num(b.Delta0p) << ',' << num(b.Delta0pp) << ',' << num(b.Gamma) << ',' << num(b.C) << ','
        << (b.constraints_satisfied ? 1 : 0) << ',' << (b.pik_branch ? 1 : 0) << '\n';
  }
  *c.summary << "eps_AC = " << num(b.eps_ac.value) << " (log " << num(b.eps_ac.log) << ")";
  if (!b.constraints_satisfied) {
    *c.summary << "; violated:";
    for (const auto& v : b.violations) *c.summary << ' ' << v;
  }
  *c.summary << '\n';
  return kOk;
}

std::unique_ptr<Receiver> make_receiver(const std::string& name) {
  if (name == "honest") return std::make_unique<HonestReceiver>();
  if (name == "first") return std::make_unique<FirstNonEmptyReceiver>();
  if (name == "pns") return std::make_unique<PnsReceiver>();
  throw ParameterError("--receiver: expected honest, first or pns, got '" + name + "'");
}

int cmd_simulate(Context& c) {
  const Settings& s = c.s;
  const ProtocolParams p = params_of(c);
  const std::string fmt = format_of(c, "csv");
  const TwoIntensityEstimator est(coeffs_of(s), s.eta, s.n, s.Delta0);
  make_receiver(s.receiver);
  require(s.runs >= 1, "--runs: must be positive");

  Record rec = protocol_record(c);
  rec.insert(rec.end(), {{"receiver", s.receiver}, {"runs", num(s.runs)}, {"seed", num(s.seed)},
                         {"format", fmt}});

  struct Row {
    RunOutcome outcome;
    AcceptedCounts counts;
    double T = std::nan("");
    bool cheated = false;
    bool matches = false;
  };
  std::vector<Row> rows(s.runs);
  std::optional<Transcript> first;
  for (std::uint64_t r = 0; r < s.runs; ++r) {
    RngStream rng(s.seed, r);
    RngStream target_rng = rng.split(4);
    std::vector<GroupElement> targets(p.batch_size);
    for (auto& t : targets) t = sample_group_element(target_rng);
    auto receiver = make_receiver(s.receiver);
    ProtocolRun run = run_with_receiver(p, targets, est, *receiver, rng);
    Row& row = rows[r];
    row.outcome = run.transcript.outcome();
    if (run.sender.estimation) {
      row.counts = est.tally(run.sender.accepted_original, p.labels);
      row.T = statistic_T(row.counts, est.coeffs());
    }
    row.cheated = receiver_cheated(run);
    row.matches = run.transcript.output && *run.transcript.output == ideal_batch(targets);
    if (r == 0) first = std::move(run.transcript);
  }
  if (!s.transcript.empty()) {
    std::ofstream t(s.transcript);
    if (!t) throw ParameterError("--transcript: cannot open '" + s.transcript + "' for writing");
    write_transcript_jsonl(*first, t);
  }

  std::uint64_t completed = 0, cheats = 0, matches = 0;
  for (const Row& row : rows) {
    completed += row.outcome == RunOutcome::kCompleted;
    cheats += row.cheated;
    matches += row.matches;
  }
  std::ostream& out = *c.artifact;
  if (fmt == "json") {
    json j = record_json(c.command, rec);
    j["result"] = {{"K", p.batch_size},           {"t", est.reference()},
                   {"threshold", est.threshold()}, {"runs", s.runs},
                   {"completed", completed},       {"cheated", cheats},
                   {"output_matches_ideal", matches}};
    json list = json::array();
    for (const Row& row : rows) {
      list.push_back({{"outcome", to_string(row.outcome)},
                      {"P", row.counts.p_low},
                      {"P_prime", row.counts.p_high},
                      {"T", std::isnan(row.T) ? json() : json(row.T)},
                      {"cheated", row.cheated},
                      {"output_matches_ideal", row.matches}});
    }
    j["result"]["rows"] = list;
    out << j.dump(2) << '\n';
  } else {
    write_record_comments(out, c.command, rec);
    out << "run,outcome,K,P,P_prime,T,t,threshold,cheated,output_matches_ideal\n";
    for (std::uint64_t r = 0; r < s.runs; ++r) {
      const Row& row = rows[r];
      out << r << ',' << to_string(row.outcome) << ',' << p.batch_size << ',' << row.counts.p_low
          << ',' << row.counts.p_high << ',' << num(row.T) << ',' << num(est.reference()) << ','
          << num(est.threshold()) << ',' << row.cheated << ',' << row.matches << '\n';
    }
  }
  *c.summary << "runs " << s.runs << ", completed " << completed << ", output == ideal "
             << matches << ", receiver cheated " << cheats << " (K = " << p.batch_size << ")\n";
  return kOk;
}

GameEngine engine_of(const std::string& e) {
  if (e == "per-pulse") return GameEngine::kPerPulse;
  if (e == "census") return GameEngine::kCensus;
  throw ParameterError("--engine: expected per-pulse or census, got '" + e + "'");
}

std::unique_ptr<AdversaryStrategy> adversary_of(const Settings& s) {
  if (s.adversary == "pns") return adversary_pns_greedy();
  if (s.adversary == "beta") {
    require(s.beta >= 0.0 && s.beta <= 1.0, "--beta: must lie in [0, 1]");
    return adversary_beta(Probability(s.beta));
  }
  if (s.adversary == "honest-mimic") {
    const double e = s.mimic_eta < 0.0 ? s.eta : s.mimic_eta;
    require(e >= 0.0 && e <= 1.0, "--mimic-eta: must lie in [0, 1]");
    return adversary_honest_mimic(e);
  }
  throw ParameterError("--adversary: expected pns, beta or honest-mimic, got '" + s.adversary + "'");
}

void write_summary(Context& c, const Record& rec, const std::string& fmt, const ProtocolParams& p,
                   const TwoIntensityEstimator& est, const MonteCarloSummary& m) {
  std::ostream& out = *c.artifact;
  if (fmt == "json") {
    json j = record_json(c.command, rec);
    j["result"] = {{"game", m.game},       {"adversary", m.adversary},
                   {"K", p.batch_size},    {"trials", m.trials},
                   {"events", m.events},   {"accepts", m.accepts},
                   {"rate", m.rate()},     {"wilson_lower", m.wilson.lower},
                   {"wilson_upper", m.wilson.upper}};
    out << j.dump(2) << '\n';
  } else {
    write_record_comments(out, c.command, rec);
    write_summary_csv_header(out);
    write_summary_csv_row(out, p, est, m);
  }
  *c.summary << m.game << (m.adversary.empty() ? "" : " " + m.adversary) << ": " << m.events
             << '/' << m.trials << (m.game == "game_cor" ? " Abort" : " Fail") << ", rate "
             << num(m.rate()) << " [99.9% Wilson " << num(m.wilson.lower) << ", "
             << num(m.wilson.upper) << "]\n";
}

int cmd_game(Context& c, bool security) {
  const Settings& s = c.s;
  const ProtocolParams p = params_of(c);
  const std::string fmt = format_of(c, "csv");
  const TwoIntensityEstimator est(coeffs_of(s), s.eta, s.n, s.Delta0);
  require(s.trials >= 1, "--trials: must be positive");
  MonteCarloConfig mc;
  mc.trials = s.trials;
  mc.seed = s.seed;
  mc.threads = s.threads;
  mc.engine = engine_of(s.engine);

  Record rec = protocol_record(c);
  rec.insert(rec.end(), {{"trials", num(s.trials)}, {"seed", num(s.seed)}, {"engine", s.engine}});
  MonteCarloSummary m;
  if (security) {
    const auto adv = adversary_of(s);
    rec.emplace_back("adversary", s.adversary);
    if (s.adversary == "beta") rec.emplace_back("beta", num(s.beta));
    if (s.adversary == "honest-mimic") {
      rec.emplace_back("mimic-eta", num(s.mimic_eta < 0.0 ? s.eta : s.mimic_eta));
    }
    m = run_game_sim(p, est, *adv, mc);
  } else {
    m = run_game_cor(p, est, mc);
  }
  rec.emplace_back("format", fmt);
  write_summary(c, rec, fmt, p, est, m);
  return kOk;
}

json optimization_json(const OptimizationResult& r) {
  return {{"nu", r.nu},
          {"nu_prime", r.nu_prime},
          {"slack", to_json(r.best_slack)},
          {"budget", to_json(r.budget)},
          {"evaluations", r.evaluations},
          {"converged", r.converged}};
}

int cmd_optimize(Context& c) {
  const Settings& s = c.s;
  check_eta(s.eta);
  require(s.n_pulses >= 2, "--pulses: must be at least 2");
  const std::string fmt = format_of(c, "json");
  OptimizeConfig oc;
  oc.eta = s.eta;
  oc.n_pulses = s.n_pulses;
  oc.bounds.domain_union_factor = s.union_factor;
  Record rec{{"eta", num(s.eta)}, {"pulses", num(s.n_pulses)}};
  if (s.free_intensities) {
    oc.alpha.reset();
    rec.emplace_back("free-intensities", "true");
  } else {
    oc.alpha = s.alpha;
    rec.emplace_back("alpha", num(s.alpha));
    if (s.fix_nu_prime > 0.0) {
      oc.nu_prime = s.fix_nu_prime;
      rec.emplace_back("fix-nu-prime", num(s.fix_nu_prime));
    }
  }
  rec.emplace_back("union-factor", num(s.union_factor));
  rec.emplace_back("format", fmt);
  const OptimizationResult r = optimize(oc);

  std::ostream& out = *c.artifact;
  if (fmt == "json") {
    json j = record_json(c.command, rec);
    j["result"] = optimization_json(r);
    out << j.dump(2) << '\n';
  } else {
    write_record_comments(out, c.command, rec);
    const SlackParams& k = r.best_slack;
    out << "nu,nu_prime,delta,Delta0,delta0,delta0p,gamma0,gamma0p,Delta0p,Delta0pp,eps_corr,"
           "eps_sec,eps_AC,log_eps_AC,evaluations,converged\n"
        << num(r.nu) << ',' << num(r.nu_prime) << ',' << num(k.delta) << ',' << num(k.delta0)
        << ',' << num(k.delta0_small) << ',' << num(k.delta0_small_prime) << ','
        << num(k.gamma0) << ',' << num(k.gamma0_prime) << ',' << num(r.budget.Delta0p) << ','
        << num(r.budget.Delta0pp) << ',' << num(r.budget.eps_corr.value) << ','
        << num(r.budget.eps_sec.value) << ',' << num(r.budget.eps_ac.value) << ','
        << num(r.budget.eps_ac.log) << ',' << r.evaluations << ',' << r.converged << '\n';
  }
  *c.summary << "eps_AC = " << num(r.budget.eps_ac.value) << " at nu = " << num(r.nu)
             << ", nu' = " << num(r.nu_prime) << (r.converged ? "" : " (not converged)") << '\n';
  return r.converged ? kOk : kInfeasible;
}

int cmd_scaling(Context& c) {
  const Settings& s = c.s;
  const std::string fmt = format_of(c, "csv");
  ScalingConfig sc;
  sc.eta_grid = s.etas;
  sc.eps_target = s.eps_target;
  sc.alpha = s.alpha;
  require(s.policy == "per-eta" || s.policy == "shared", "--policy: expected per-eta or shared");
  sc.policy = s.policy == "shared" ? NuPrimePolicy::kShared : NuPrimePolicy::kPerEta;
  if (s.fix_nu_prime > 0.0) sc.nu_prime = s.fix_nu_prime;
  sc.grid_ratio = s.grid_ratio;
  sc.n_start = s.n_start;
  sc.threads = s.threads;
  sc.bounds.domain_union_factor = s.union_factor;
  Record rec{{"etas", join(s.etas)},        {"eps-target", num(s.eps_target)},
             {"alpha", num(s.alpha)},       {"policy", s.policy},
             {"grid-ratio", num(s.grid_ratio)}, {"n-start", num(s.n_start)},
             {"union-factor", num(s.union_factor)}};
  if (sc.nu_prime) rec.emplace_back("fix-nu-prime", num(*sc.nu_prime));
  rec.emplace_back("format", fmt);
  const ScalingFit fit = scaling_sweep(sc);

  std::ostream& out = *c.artifact;
  if (fmt == "json") {
    json j = record_json(c.command, rec);
    json grid = json::array();
    for (const auto& p : fit.grid) {
      grid.push_back({{"eta", p.eta}, {"N_min", p.n_min}, {"optimum", optimization_json(p.optimum)}});
    }
    j["result"] = {{"grid", grid},           {"dropped", fit.dropped},
                   {"slope", fit.slope},     {"intercept", fit.intercept},
                   {"r_squared", fit.r_squared}, {"shared_nu_prime", fit.nu_prime}};
    out << j.dump(2) << '\n';
  } else {
    write_record_comments(out, c.command, rec);
    out << "eta,N_min,nu,nu_prime,delta,Delta0,delta0,delta0p,gamma0,gamma0p,eps_AC\n";
    for (const auto& p : fit.grid) {
      const SlackParams& k = p.optimum.best_slack;
      out << num(p.eta) << ',' << p.n_min << ',' << num(p.optimum.nu) << ','
          << num(p.optimum.nu_prime) << ',' << num(k.delta) << ',' << num(k.delta0) << ','
          << num(k.delta0_small) << ',' << num(k.delta0_small_prime) << ',' << num(k.gamma0)
          << ',' << num(k.gamma0_prime) << ',' << num(p.optimum.budget.eps_ac.value) << '\n';
    }
    out << "# slope = " << num(fit.slope) << ", intercept = " << num(fit.intercept)
        << ", r_squared = " << num(fit.r_squared) << ", dropped = " << join(fit.dropped) << '\n';
  }
  *c.summary << "log N_min vs log eta: slope " << num(fit.slope) << ", r^2 " << num(fit.r_squared)
             << " over " << fit.grid.size() << " points";
  if (!fit.dropped.empty()) *c.summary << " (dropped eta: " << join(fit.dropped) << ")";
  *c.summary << '\n';
  return kOk;
}

FigureKind figure_of(const std::string& mode) {
  if (mode == "fig_eta") return FigureKind::kFigEta;
  if (mode == "fig_alpha") return FigureKind::kFigAlpha;
  if (mode == "density") return FigureKind::kDensity;
  throw ParameterError("--mode: expected fig_eta, fig_alpha, density or point, got '" + mode + "'");
}

std::size_t count_winner(const std::vector<NuStarPoint>& rows, Winner w) {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [w](const NuStarPoint& p) { return p.winner == w; }));
}

int cmd_nustar(Context& c) {
  const Settings& s = c.s;
  format_of(c, "csv");
  require(c.s.format.empty() || c.s.format == "csv", "--format: nustar writes csv only");
  std::ostream& out = *c.artifact;
  if (s.mode == "point") {
    const Record rec{{"mode", s.mode}, {"eta0", num(s.eta0)}, {"alpha", num(s.alpha)}};
    const NuStarPoint p = nu_star_point(s.eta0, s.alpha);
    write_record_comments(out, c.command, rec);
    write_figure_csv(out, FigureKind::kFigEta, {p});
    *c.summary << "nu*_GLMO = " << num(p.nu_star_glmo) << ", nu*_DKL = " << num(p.nu_star_dkl)
               << ", winner " << to_string(p.winner) << '\n';
    return kOk;
  }
  const FigureKind kind = figure_of(s.mode);
  const auto rows = figure_data(kind, s.threads);
  write_record_comments(out, c.command, {{"mode", s.mode}});
  write_figure_csv(out, kind, rows);
  *c.summary << s.mode << ": " << rows.size() << " rows, GLMO wins " << count_winner(rows, Winner::kGlmo)
             << ", DKL wins " << count_winner(rows, Winner::kDkl) << ", no root "
             << count_winner(rows, Winner::kNone) << '\n';
  return kOk;
}

int cmd_figures(Context& c) {
  const std::filesystem::path dir(c.s.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  for (const auto& [name, kind] : {std::pair{"fig_eta", FigureKind::kFigEta},
                                   std::pair{"fig_alpha", FigureKind::kFigAlpha},
                                   std::pair{"density", FigureKind::kDensity}}) {
    const auto path = dir / (std::string(name) + ".csv");
    std::ofstream f(path);
    if (!f) throw ParameterError("--output-dir: cannot write '" + path.string() + "'");
    const auto rows = figure_data(kind, c.s.threads);
    write_record_comments(f, "nustar", {{"mode", name}});
    write_figure_csv(f, kind, rows);
    *c.summary << path.string() << ": " << rows.size() << " rows\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context c;
  Settings& s = c.s;
  CLI::App app{"Weak-coherent-pulse batch remote state preparation toolkit", "wcprsp"};
  c.app = &app;
  app.set_config("--config", "", "Read settings from a file of 'key = value' lines");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--nu", s.nu, "Low intensity nu")->capture_default_str();
  app.add_option("--nu-prime", s.nu_prime, "High intensity nu'")->capture_default_str();
  app.add_option("--eta", s.eta, "Channel transmittance")->capture_default_str();
  app.add_option("--n", s.n, "Number of pulses N (even)")->capture_default_str();
  c.k_opt = app.add_option("--k", s.k, "Batch size K (default: derived from --delta)");
  app.add_option("--delta", s.delta, "Slack delta")->capture_default_str();
  app.add_option("--Delta0", s.Delta0, "Estimator margin Delta0")->capture_default_str();
  app.add_option("--delta0", s.delta0, "Slack delta0")->capture_default_str();
  app.add_option("--delta0p", s.delta0p, "Slack delta0'")->capture_default_str();
  app.add_option("--gamma0", s.gamma0, "Slack gamma0")->capture_default_str();
  app.add_option("--gamma0p", s.gamma0p, "Slack gamma0'")->capture_default_str();
  app.add_option("--union-factor", s.union_factor, "Multiplier on M (32, or 1 for the literal form)")
      ->capture_default_str();
  app.add_option("--seed", s.seed, "Master seed")->capture_default_str();
  app.add_option("--trials", s.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--runs", s.runs, "Protocol runs for simulate")->capture_default_str();
  app.add_option("--threads", s.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--format", s.format, "Output format: csv or json");
  app.add_option("--output", s.output, "Artifact path (default: standard output)");
  app.add_option("--engine", s.engine, "Game engine: per-pulse or census")->capture_default_str();
  app.add_option("--adversary", s.adversary, "pns, beta or honest-mimic")->capture_default_str();
  app.add_option("--beta", s.beta, "Two-photon ratio for the beta adversary")->capture_default_str();
  app.add_option("--mimic-eta", s.mimic_eta, "Transmittance imitated by honest-mimic (default --eta)");
  app.add_option("--receiver", s.receiver, "simulate: honest, first or pns")->capture_default_str();
  app.add_option("--transcript", s.transcript, "simulate: write run 0 as JSON lines here");
  app.add_option("--alpha", s.alpha, "Intensity ratio nu/nu'")->capture_default_str();
  app.add_flag("--free-intensities", s.free_intensities, "optimize: let nu/nu' vary too");
  app.add_option("--fix-nu-prime", s.fix_nu_prime, "Hold nu' at this value (0 = optimize it)")
      ->capture_default_str();
  app.add_option("--pulses", s.n_pulses, "optimize: N (64-bit)")->capture_default_str();
  app.add_option("--etas", s.etas, "scaling: eta grid")->delimiter(',')->capture_default_str();
  app.add_option("--eps-target", s.eps_target, "scaling: eps_AC target")->capture_default_str();
  app.add_option("--policy", s.policy, "scaling: per-eta or shared nu'")->capture_default_str();
  app.add_option("--grid-ratio", s.grid_ratio, "scaling: N grid ratio")->capture_default_str();
  app.add_option("--n-start", s.n_start, "scaling: first N on the grid")->capture_default_str();
  app.add_option("--mode", s.mode, "nustar: fig_eta, fig_alpha, density or point")
      ->capture_default_str();
  app.add_option("--eta0", s.eta0, "nustar point: eta0")->capture_default_str();
  app.add_option("--output-dir", s.output_dir, "figures: directory for the CSV files")
      ->capture_default_str();

  std::map<std::string, std::function<int(Context&)>> commands{
      {"coeffs", cmd_coeffs},
      {"bounds", cmd_bounds},
      {"simulate", cmd_simulate},
      {"game-cor", [](Context& ctx) { return cmd_game(ctx, false); }},
      {"game-sim", [](Context& ctx) { return cmd_game(ctx, true); }},
      {"optimize", cmd_optimize},
      {"scaling", cmd_scaling},
      {"nustar", cmd_nustar},
      {"figures", cmd_figures}};
  const std::map<std::string, std::string> help{
      {"coeffs", "Photon-number coefficients a, b, c, a', b', c'"},
      {"bounds", "Finite-size error budget eps_AC"},
      {"simulate", "Run the protocol end to end"},
      {"game-cor", "Monte Carlo of the correctness game"},
      {"game-sim", "Monte Carlo of the security game"},
      {"optimize", "Minimize eps_AC over the slack parameters"},
      {"scaling", "Minimal N against eta and the fitted slope"},
      {"nustar", "Maximal intensities nu*_GLMO and nu*_DKL"},
      {"figures", "Write the three figure tables"}};
  for (const auto& [name, text] : help) app.add_subcommand(name, text);

  std::vector<std::string> argv_store{"wcprsp"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParameterError;
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    if (!s.output.empty()) {
      c.file = std::make_unique<std::ofstream>(s.output);
      if (!*c.file) throw ParameterError("--output: cannot open '" + s.output + "' for writing");
      c.artifact = c.file.get();
      c.summary = &out;
    } else {
      c.artifact = &out;
      c.summary = &err;
    }
    const int code = commands.at(c.command)(c);
    c.artifact->flush();
    return code;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConstraintError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  } catch (const Error& e) {
    err << "parameter error: " << e.what() << '\n';
    return kParameterError;
  }
}

}  // namespace wcprsp::cli

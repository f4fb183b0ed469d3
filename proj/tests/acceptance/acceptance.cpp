/*
 * Copyright 2026 The corelearn Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
//
//   acceptance [--out DIR] [criterion numbers...]

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../test_support.hpp"
#include "corelearn/baselines.hpp"
#include "corelearn/eval.hpp"
#include "corelearn/experiment.hpp"
#include "corelearn/learner.hpp"
#include "corelearn/queries.hpp"
#include "corelearn/theory.hpp"

namespace fs = std::filesystem;
using namespace corelearn;
namespace t = corelearn::testing;

namespace {

// Pinned tolerances.
constexpr double kGradRel = 1e-4;
constexpr double kGradFloor = 1e-8;
constexpr double kFdStep = 1e-6;
constexpr int kGradConfigs = 100;
constexpr double kClaimDelta = 0.05;
constexpr std::size_t kClaim1Trials = 2000;
constexpr double kArithmeticSlack = 1e-10;
constexpr double kUnbiasedRel = 0.01;
constexpr int kUnbiasedSeeds = 10000;
constexpr double kErrOptLimit = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Gradients vs central differences.

struct GradCounter {
  int configs = 0;
  int failures = 0;
  double worst = 0.0;

  void compare(double analytic, double numeric) {
    if (!t::close(analytic, numeric, kGradRel, kGradFloor)) {
      ++failures;
      worst = std::max(worst, std::abs(analytic - numeric) /
                                  std::max(std::abs(numeric), kGradFloor));
    }
  }
};

void pointwise_gradients(const LossModel& loss, Rng& rng, GradCounter& out) {
  const std::size_t d = 3;
  while (out.configs < kGradConfigs) {
    Vector p = t::gaussian_vector(d, rng);
    Vector q = t::gaussian_vector(loss.query_dim(d), rng);
    double b = t::gaussian_vector(1, rng)[0];
    if (loss.kind() == LossKind::logistic_regression) b = b >= 0 ? 1.0 : -1.0;
    double u = std::abs(t::gaussian_vector(1, rng)[0]) + 0.1;
    const auto g = loss_gradients(loss, {p.data(), d}, b, u, {q.data(), static_cast<std::size_t>(q.size())});
    auto f = [&] { return u * loss.value({p.data(), d}, b, {q.data(), static_cast<std::size_t>(q.size())}); };
    for (std::size_t k = 0; k < d; ++k)
      out.compare(g.point[k], t::central_difference(f, p[static_cast<Eigen::Index>(k)], kFdStep));
    for (Eigen::Index k = 0; k < q.size(); ++k)
      out.compare(g.query[static_cast<std::size_t>(k)], t::central_difference(f, q[k], kFdStep));
    out.compare(g.weight, t::central_difference(f, u, kFdStep));
    if (loss.kind() == LossKind::linear_regression)
      out.compare(g.label, t::central_difference(f, b, kFdStep));
    ++out.configs;
  }
}

// Draws coresets away from the |.| kinks of the objective.
void objective_gradients(const LossModel& loss, bool practical, Rng& rng, GradCounter& out) {
  const std::size_t d = 2, m = 4, k = 12;
  const auto set = t::planted_set(30, d, loss.kind(), rng());
  const auto queries = t::gaussian_queries(k, loss.query_dim(d), rng());
  const auto full = total_costs(set, loss, queries);
  const double full_mean = pairwise_sum(full) / static_cast<double>(k);
  const double wsum = set.weight_sum();
  const double lambda = 0.7;
  auto eval = [&](const Coreset& c) {
    return practical ? practical_objective(c, queries, full, loss, wsum, lambda)
                     : average_objective(c, queries, loss, full_mean, wsum, lambda);
  };
  auto smooth = [&](const Coreset& c) {
    if (std::abs(wsum - c.weight_sum()) < 1e-3) return false;
    const auto core = total_costs(c, loss, queries);
    if (!practical) return std::abs(full_mean - pairwise_sum(core) / static_cast<double>(k)) > 1e-3;
    for (std::size_t i = 0; i < k; ++i)
      if (std::abs(1.0 - core[i] / full[i]) < 1e-4) return false;
    return true;
  };
  while (out.configs < kGradConfigs) {
    Coreset c{t::gaussian_matrix(m, d, rng), t::gaussian_vector(m, rng).cwiseAbs(),
              t::gaussian_vector(m, rng)};
    if (loss.kind() == LossKind::logistic_regression)
      for (auto& y : c.labels) y = y >= 0 ? 1.0 : -1.0;
    if (!smooth(c)) continue;
    const auto g = eval(c).gradient;
    auto f = [&] { return eval(c).value; };
    for (Eigen::Index i = 0; i < c.points.size(); ++i)
      out.compare(g.points.data()[i], t::central_difference(f, c.points.data()[i], kFdStep));
    for (Eigen::Index i = 0; i < c.weights.size(); ++i)
      out.compare(g.weights[i], t::central_difference(f, c.weights[i], kFdStep));
    if (loss.kind() == LossKind::linear_regression)
      for (Eigen::Index i = 0; i < c.labels.size(); ++i)
        out.compare(g.labels[i], t::central_difference(f, c.labels[i], kFdStep));
    ++out.configs;
  }
}

Outcome criterion_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1);
  int failures = 0, suites = 0;
  double worst = 0.0;
  std::string counts;
  for (auto kind : {LossKind::linear_regression, LossKind::logistic_regression}) {
    for (bool intercept : {false, true}) {
      GradCounter c;
      pointwise_gradients(LossModel(kind, intercept), rng, c);
      failures += c.failures;
      worst = std::max(worst, c.worst);
      ++suites;
    }
    for (bool practical : {false, true}) {
      GradCounter c;
      objective_gradients(LossModel(kind), practical, rng, c);
      failures += c.failures;
      worst = std::max(worst, c.worst);
      ++suites;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {failures == 0 && secs < 10.0,
          std::to_string(suites) + " suites x " + std::to_string(kGradConfigs) + " configs, " +
              std::to_string(failures) + " mismatches" +
              (failures ? ", worst rel " + fmt("%.3g", worst) : "") + ", " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------------------
// 2. C = P is a fixed point with zero error.

Outcome criterion_fixed_point() {
  bool ok = true;
  std::string detail;
  for (auto kind : {LossKind::linear_regression, LossKind::logistic_regression}) {
    const LossModel loss(kind);
    const auto set = t::planted_set(200, 3, kind, 5, 1.0);
    const Coreset c = Coreset::from_set(set);
    const auto queries = t::gaussian_queries(50, 3, 6);
    const auto full = total_costs(set, loss, queries);
    const double mean = pairwise_sum(full) / 50.0;
    const double avg = average_objective(c, queries, loss, mean, set.weight_sum(), 1.0).value;
    const double prac = practical_objective(c, queries, full, loss, set.weight_sum(), 1.0).value;
    const double eo = err_opt(set, c, loss);
    const double ea = err_avg(set, c, loss, queries).value;
    ok = ok && avg == 0.0 && prac == 0.0 && eo == 0.0 && ea == 0.0;
    detail += std::string(to_string(kind)) + ": objectives " + fmt("%g", avg) + "/" +
              fmt("%g", prac) + ", Err_opt " + fmt("%g", eo) + ", Err_avg " + fmt("%g", ea) + "; ";
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// 3. Sample-mean bound on finite universes.

Outcome criterion_claim1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double allowed = kClaimDelta + 3.0 * std::sqrt(kClaimDelta * (1 - kClaimDelta) / kClaim1Trials);
  bool ok = true;
  std::string detail;
  for (std::size_t size : {2u, 5u, 10u}) {
    const auto set = t::planted_set(20, 2, LossKind::linear_regression, size);
    const auto universe = t::gaussian_queries(size, 2, 100 + size);
    Rng rng(size);
    Vector mu = t::gaussian_vector(size, rng).cwiseAbs().array() + 0.05;
    mu /= mu.sum();
    const MeasurableQuerySpace space(set, LossModel(), universe, mu);
    double M = 0.0;
    for (double f : total_costs(set, LossModel(), universe)) M = std::max(M, std::abs(f));
    const auto r = verify_claim1(space, 0.1 * M, kClaimDelta, kClaim1Trials, 7 * size);
    ok = ok && r.M == M && r.violation_rate <= allowed;
    detail += "|U|=" + std::to_string(size) + " rate " + fmt("%.4f", r.violation_rate) + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && secs < 60.0, detail + "allowed " + fmt("%.4f", allowed) + ", " + fmt("%.2f s", secs)};
}

// ---------------------------------------------------------------------------
// 4. Coreset transfer bound for learned coresets on a finite universe.

// Bounded design: features in [-1, 1]^d, so the point-level M stays small
// enough for the sampling term of the slack to be informative.
WeightedLabeledSet bounded_set(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  RowMatrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = unit(rng);
  Vector w(static_cast<Eigen::Index>(d));
  for (auto& v : w) v = unit(rng);
  Vector y = x * w + t::gaussian_vector(n, rng, 0.1);
  return normalize_weights(WeightedLabeledSet(std::move(x), std::move(y)));
}

Outcome criterion_claim2() {
  const LossModel loss;
  const auto set = bounded_set(400, 3, 31);
  TrajectoryOptions traj;
  traj.n_starts = 10;
  traj.steps_per_start = 59;
  traj.init_scale = 0.5;
  traj.seed = 32;
  const auto universe = trajectory_queries(set, loss, traj).queries;
  const MeasurableQuerySpace space(set, loss, universe);
  const auto full_u = total_costs(set, loss, universe);
  const double expected_full = expected_cost(space.measure(), full_u);

  bool ok = true;
  int checked = 0;
  double tightest = INFINITY, eps_min = INFINITY, eps_max = 0.0;
  for (std::size_t m : {10u, 20u, 40u}) {
    for (std::uint64_t seed : {1u, 2u}) {
      // Training sample: k i.i.d. draws from the universe's measure.
      const auto sample = iid_sample(space, 20000, 1000 * m + seed).queries;
      TrainConfig cfg;
      cfg.coreset_size = m;
      cfg.epochs = 5;
      cfg.seed = seed;
      const auto learned = learn_coreset(set, sample, {}, loss, cfg).coreset;
      const double M = std::max(estimate_M(set, loss, universe), estimate_M(learned, loss, universe)) /
                       kMSafetyFactor;
      const auto slack = claim2_slack(set, learned, loss, sample, kClaimDelta, M);
      const double gap =
          std::abs(expected_full - expected_cost(space.measure(), total_costs(learned, loss, universe)));
      ok = ok && std::isfinite(slack.eps) && gap < 3.0 * slack.eps + kArithmeticSlack;
      tightest = std::min(tightest, 3.0 * slack.eps - gap);
      eps_min = std::min(eps_min, slack.eps);
      eps_max = std::max(eps_max, slack.eps);
      // Same check through the sampled-premise pipeline at eps = measured slack.
      if (std::isfinite(slack.eps)) {
        const auto v = verify_claim2(set, learned, space, slack.eps, kClaimDelta, 50, seed);
        ok = ok && v.status == Claim2Result::Status::ok && v.violations == 0;
      }
      ++checked;
    }
  }
  return {ok, std::to_string(checked) + " learned coresets, eps_hat in [" + fmt("%.4g", eps_min) +
                  ", " + fmt("%.4g", eps_max) + "], min margin 3*eps_hat - gap = " +
                  fmt("%.4g", tightest)};
}

// ---------------------------------------------------------------------------
// 5. Average-ratio bound implies the average-difference bound.

Outcome criterion_ratio_chain() {
  bool ok = true;
  int checked = 0;
  double worst = -INFINITY;
  for (auto kind : {LossKind::linear_regression, LossKind::logistic_regression}) {
    const LossModel loss(kind);
    const auto set = t::planted_set(500, 3, kind, 41, 1.0);
    TrajectoryOptions traj;
    traj.n_starts = 5;
    traj.steps_per_start = 99;
    traj.seed = 42;
    const auto train = trajectory_queries(set, loss, traj).queries;
    for (std::size_t m : {10u, 30u}) {
      TrainConfig cfg = TrainConfig::defaults_for(kind);
      cfg.coreset_size = m;
      cfg.epochs = 20;
      const auto c = learn_coreset(set, train, {}, loss, cfg).coreset;
      // Direct recomputation.
      const auto fp = total_costs(set, loss, train);
      const auto fc = total_costs(c, loss, train);
      double eps_prime = 0.0, M = 0.0, sp = 0.0, sc = 0.0;
      for (std::size_t i = 0; i < train.size(); ++i) {
        eps_prime += std::abs(1.0 - fc[i] / fp[i]);
        M = std::max(M, fp[i]);
        sp += fp[i];
        sc += fc[i];
      }
      const double k = static_cast<double>(train.size());
      eps_prime /= k;
      const double gap = std::abs(sp / k - sc / k);
      const double eps = relate_eps(eps_prime, M);
      const auto chain = check_ratio_chain(set, c, loss, train);
      ok = ok && gap <= eps + kArithmeticSlack && chain.holds &&
           std::abs(chain.eps - eps) <= kArithmeticSlack * std::max(1.0, eps);
      worst = std::max(worst, gap - eps);
      ++checked;
    }
  }
  return {ok, std::to_string(checked) + " learned coresets, max (gap - eps'M) = " + fmt("%.4g", worst)};
}

// ---------------------------------------------------------------------------
// 6. Sample-size calculators.

Outcome criterion_bounds() {
  const auto k1 = hoeffding_k(0.1, 0.05, 1.0);
  const auto k2 = claim2_k(0.1, 0.05, 1.0);
  // Oracles: 2 ln(40) / 0.01 and 2 * 1.21 * ln(40) / 0.01, rounded up.
  const auto o1 = static_cast<std::uint64_t>(std::ceil(200.0 * std::log(40.0)));
  const auto o2 = static_cast<std::uint64_t>(std::ceil(242.0 * std::log(40.0)));
  bool mono = true;
  Rng rng(6);
  std::uniform_real_distribution<double> e(0.01, 2.0), dl(0.001, 0.9), mm(0.1, 10.0), step(1.0, 2.0);
  for (int i = 0; i < 10000; ++i) {
    const double eps = e(rng), delta = dl(rng), M = mm(rng), s = step(rng);
    for (auto f : {&hoeffding_k_real, &claim2_k_real}) {
      mono = mono && f(eps * s, delta, M) <= f(eps, delta, M);
      mono = mono && f(eps, std::min(0.999, delta * s), M) <= f(eps, delta, M);
      mono = mono && f(eps, delta, M * s) >= f(eps, delta, M);
    }
  }
  return {k1 == 738 && k2 == 893 && k1 == o1 && k2 == o2 && mono,
          "k1 " + std::to_string(k1) + ", k2 " + std::to_string(k2) + ", monotonicity " +
              (mono ? "holds" : "violated") + " on 10000 draws"};
}

// ---------------------------------------------------------------------------
// 7. Uniform sampling is unbiased.

Outcome criterion_unbiased() {
  const LossModel loss;
  const auto set = t::planted_set(100, 3, LossKind::linear_regression, 71);
  const auto queries = t::gaussian_queries(10, 3, 72);
  const auto full = total_costs(set, loss, queries);
  std::vector<double> acc(queries.size(), 0.0);
  for (int s = 0; s < kUnbiasedSeeds; ++s) {
    const Coreset c = uniform_coreset(set, 10, static_cast<std::uint64_t>(s));
    for (std::size_t j = 0; j < queries.size(); ++j) acc[j] += total_cost(c, loss, queries[j]);
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < queries.size(); ++j)
    worst = std::max(worst, std::abs(acc[j] / kUnbiasedSeeds - full[j]) / full[j]);
  return {worst <= kUnbiasedRel, "max relative bias " + fmt("%.4f", worst) + " over 10 queries"};
}

// ---------------------------------------------------------------------------
// 8, 10, 11. Synthetic linear regression sweep.

ExperimentConfig linreg_config(const fs::path& dir) {
  ExperimentConfig c;
  c.seed = 2024;
  c.loss = LossModel(LossKind::linear_regression);
  c.dataset.synth.n = 5000;
  c.dataset.synth.d = 3;
  c.dataset.synth.noise = 0.1;
  c.queries.n_starts = 20;
  c.queries.steps_per_start = 119;  // 20 * 120 = 2400
  c.queries.split = {2000, 200, 200};
  c.learner = TrainConfig::defaults_for(LossKind::linear_regression);
  c.learner.epochs = 100;
  c.learner.batch_size = 25;
  c.learner.learning_rate = 0.01;
  c.learner.lambda = 1.0;
  c.learner.early_stop_on_validation = true;
  c.sweep.sizes = {50, 80, 110, 140};
  c.sweep.methods = {Method::learned, Method::uniform, Method::leverage};
  c.sweep.trials = 5;
  c.output.dir = dir;
  return c;
}

ExperimentConfig logreg_config(const fs::path& dir) {
  ExperimentConfig c;
  c.seed = 2025;
  c.loss = LossModel(LossKind::logistic_regression);
  c.dataset.synth.n = 5000;
  c.dataset.synth.d = 8;
  c.dataset.synth.noise = 1.0;
  c.queries.n_starts = 20;
  c.queries.steps_per_start = 119;
  c.queries.split = {2000, 200, 200};
  c.learner = TrainConfig::defaults_for(LossKind::logistic_regression);
  c.learner.epochs = 100;
  c.learner.learning_rate = 0.001;
  c.learner.learn_weights = false;
  c.learner.early_stop_on_validation = true;
  c.sweep.sizes = {100, 300, 500};
  c.sweep.methods = {Method::learned, Method::uniform};
  c.sweep.trials = 3;
  c.output.dir = dir;
  return c;
}

struct SweepRun {
  ExperimentResult result;
  double seconds = 0.0;
};

SweepRun timed_run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRun r{run_experiment(cfg), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string cell_table(const ResultTable& table, const std::vector<std::size_t>& sizes,
                       const std::vector<Method>& methods) {
  std::string s;
  for (auto size : sizes) {
    s += "\n      m=" + std::to_string(size) + ":";
    for (auto m : methods) {
      const auto* c = table.cell(size, m);
      s += " " + std::string(to_string(m)) + " " + (c ? fmt("%.4f", c->err_avg_mean) : "n/a");
    }
  }
  return s;
}

Outcome criterion_linreg(const SweepRun& run) {
  const auto& table = run.result.table;
  int beat_uniform = 0, beat_leverage = 0;
  for (std::size_t size : {50u, 80u, 110u, 140u}) {
    const auto* l = table.cell(size, Method::learned);
    const auto* u = table.cell(size, Method::uniform);
    const auto* v = table.cell(size, Method::leverage);
    if (!l || !u || !v || l->flagged) continue;
    beat_uniform += l->err_avg_mean < u->err_avg_mean ? 1 : 0;
    beat_leverage += l->err_avg_mean < v->err_avg_mean ? 1 : 0;
  }
  return {beat_uniform >= 3 && beat_leverage >= 2 && run.seconds < 600.0,
          "learned < uniform at " + std::to_string(beat_uniform) + "/4, < leverage at " +
              std::to_string(beat_leverage) + "/4, " + fmt("%.1f s", run.seconds) + "; mean Err_avg:" +
              cell_table(table, {50, 80, 110, 140}, {Method::learned, Method::uniform, Method::leverage})};
}

Outcome criterion_err_opt(const SweepRun& run) {
  const auto* c = run.result.table.cell(140, Method::learned);
  if (!c) return {false, "no learned cell at size 140"};
  const bool ok = c->successes == c->trials && c->err_opt_mean <= kErrOptLimit;
  std::string detail = "mean Err_opt " + fmt("%.5f", c->err_opt_mean) + " (limit " +
                       fmt("%.2f", kErrOptLimit) + ")";
  if (!ok && run.result.train_reports)
    detail += "; training reports: " + run.result.train_reports->string();
  return {ok, detail};
}

Outcome criterion_logreg(const SweepRun& run) {
  const auto& table = run.result.table;
  int beat = 0;
  for (std::size_t size : {100u, 300u, 500u}) {
    const auto* l = table.cell(size, Method::learned);
    const auto* u = table.cell(size, Method::uniform);
    if (l && u && !l->flagged) beat += l->err_avg_mean < u->err_avg_mean ? 1 : 0;
  }
  return {beat >= 2 && run.seconds < 900.0,
          "learned < uniform at " + std::to_string(beat) + "/3, " + fmt("%.1f s", run.seconds) +
              "; mean Err_avg:" + cell_table(table, {100, 300, 500}, {Method::learned, Method::uniform})};
}

Outcome criterion_determinism(const SweepRun& first, const fs::path& dir) {
  auto cfg = linreg_config(dir);
  const auto second = run_experiment(cfg);
  const std::string a = slurp(first.result.aggregate_csv);
  const std::string b = slurp(second.aggregate_csv);
  return {!a.empty() && a == b,
          std::string("aggregate CSVs ") + (a == b ? "byte-identical" : "differ") + " (" +
              std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corelearn acceptance suite"};
  std::string out = "acceptance_out";
  std::vector<int> only;
  app.add_option("--out", out, "Scratch directory for experiment outputs");
  app.add_option("criteria", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const fs::path root(out);
  fs::remove_all(root);
  auto wanted = [&](int n) { return only.empty() || std::count(only.begin(), only.end(), n) > 0; };

  std::optional<SweepRun> linreg;
  auto linreg_run = [&]() -> const SweepRun& {
    if (!linreg) linreg = timed_run(linreg_config(root / "linreg_a"));
    return *linreg;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient suite", criterion_gradients},
      {"fixed point", criterion_fixed_point},
      {"sample-mean bound on finite universes", criterion_claim1},
      {"transfer bound for learned coresets", criterion_claim2},
      {"ratio bound implies difference bound", criterion_ratio_chain},
      {"sample-size calculators", criterion_bounds},
      {"uniform coreset unbiasedness", criterion_unbiased},
      {"synthetic linreg ordering", [&] { return criterion_linreg(linreg_run()); }},
      {"synthetic logreg ordering",
       [&] { return criterion_logreg(timed_run(logreg_config(root / "logreg"))); }},
      {"learned linreg Err_opt at size 140", [&] { return criterion_err_opt(linreg_run()); }},
      {"experiment determinism", [&] { return criterion_determinism(linreg_run(), root / "linreg_b"); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (!wanted(n)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

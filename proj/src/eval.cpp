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

#include "corelearn/eval.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

FullOptimum full_optimum(const WeightedLabeledSet& set, const LossModel& loss) {
  const SolveResult s = solve_optimal(set, loss, default_solve_method(loss));
  return {s.optimum, total_cost(set, loss, s.optimum), s.converged};
}

ErrOptResult err_opt_detail(const WeightedLabeledSet& set, const Coreset& coreset,
                            const LossModel& loss, const FullOptimum& full) {
  if (!(full.cost > kRatioFloor))
    throw MetricUndefinedError("err_opt: full-data optimum has zero loss");
  const SolveResult sc = solve_optimal(coreset, loss, default_solve_method(loss));
  ErrOptResult r;
  r.full_converged = full.converged;
  r.coreset_converged = sc.converged;
  r.value = std::abs(1.0 - total_cost(set, loss, sc.optimum) / full.cost);
  return r;
}

double err_opt(const WeightedLabeledSet& set, const Coreset& coreset, const LossModel& loss) {
  return err_opt_detail(set, coreset, loss, full_optimum(set, loss)).value;
}

ErrAvgResult err_avg(std::span<const double> full_costs, const Coreset& coreset,
                     const LossModel& loss, std::span<const Query> queries) {
  if (queries.empty()) throw ContractError("err_avg: no test queries");
  const auto core = total_costs(coreset, loss, queries);
  const RatioDeviation dev = mean_ratio_deviation(full_costs, core);
  if (dev.used == 0)
    throw MetricUndefinedError("err_avg: every test query has zero full-data cost");
  return {dev.mean, dev.used, dev.filtered};
}

ErrAvgResult err_avg(const WeightedLabeledSet& set, const Coreset& coreset,
                     const LossModel& loss, std::span<const Query> queries) {
  return err_avg(total_costs(set, loss, queries), coreset, loss, queries);
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::learned:
      return "learned";
    case Method::uniform:
      return "uniform";
    case Method::leverage:
      return "leverage";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "learned") return Method::learned;
  if (name == "uniform") return Method::uniform;
  if (name == "leverage") return Method::leverage;
  throw ContractError("unknown method '" + std::string(name) + "'");
}

const CellSummary* ResultTable::cell(std::size_t size, Method method) const {
  for (const auto& c : cells)
    if (c.size == size && c.method == method) return &c;
  return nullptr;
}

namespace {

void mean_and_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (xs.empty()) return;
  mean = pairwise_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return;
  std::vector<double> sq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - mean) * (xs[i] - mean);
  sd = std::sqrt(pairwise_sum(sq) / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<CellSummary> summarize(std::span<const TrialRow> rows) {
  std::vector<CellSummary> cells;
  std::size_t i = 0;
  while (i < rows.size()) {
    CellSummary c;
    c.size = rows[i].size;
    c.method = rows[i].method;
    std::vector<double> opt, avg, filt;
    for (; i < rows.size() && rows[i].size == c.size && rows[i].method == c.method; ++i) {
      ++c.trials;
      if (!rows[i].ok) continue;
      ++c.successes;
      opt.push_back(rows[i].err_opt);
      avg.push_back(rows[i].err_avg);
      filt.push_back(static_cast<double>(rows[i].filtered_queries));
    }
    mean_and_std(opt, c.err_opt_mean, c.err_opt_std);
    mean_and_std(avg, c.err_avg_mean, c.err_avg_std);
    double unused = 0.0;
    mean_and_std(filt, c.filtered_mean, unused);
    c.flagged = 2 * c.successes < c.trials;
    cells.push_back(c);
  }
  return cells;
}

namespace {

struct SweepContext {
  const WeightedLabeledSet& set;
  const LossModel& loss;
  const SweepSpec& spec;
  const QuerySplit& queries;
  FullOptimum optimum;
  std::vector<double> test_costs;
};

Coreset build_coreset(const SweepContext& ctx, TrialRow& row, std::uint64_t seed) {
  switch (row.method) {
    case Method::uniform:
      return uniform_coreset(ctx.set, row.size, seed);
    case Method::leverage:
      return leverage_coreset(ctx.set, ctx.loss, row.size, seed).coreset;
    case Method::learned: {
      TrainConfig cfg = ctx.spec.learner;
      cfg.coreset_size = row.size;
      cfg.seed = seed;
      LearnResult r = learn_coreset(ctx.set, ctx.queries.train.queries,
                                    ctx.queries.validation.queries, ctx.loss, cfg);
      row.report = std::move(r.report);
      return std::move(r.coreset);
    }
  }
  throw ContractError("unknown method");
}

void run_trial(const SweepContext& ctx, TrialRow& row) {
  const auto start = std::chrono::steady_clock::now();
  const std::string label = "size=" + std::to_string(row.size) + "/trial=" +
                            std::to_string(row.trial) + "/method=" +
                            std::string(to_string(row.method));
  try {
    const Coreset c = build_coreset(ctx, row, derive_seed(ctx.spec.seed, label));
    row.err_opt = err_opt_detail(ctx.set, c, ctx.loss, ctx.optimum).value;
    const ErrAvgResult avg = err_avg(ctx.test_costs, c, ctx.loss, ctx.queries.test.queries);
    row.err_avg = avg.value;
    row.filtered_queries = avg.filtered;
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ResultTable sweep(const WeightedLabeledSet& set, const LossModel& loss, const SweepSpec& spec,
                  const QuerySplit& queries) {
  if (spec.sizes.empty() || spec.methods.empty())
    throw ContractError("sweep: sizes and methods must be non-empty");
  if (spec.trials < 1) throw ContractError("sweep: trials must be >= 1");
  if (queries.test.empty()) throw ContractError("sweep: test queries required");

  SweepContext ctx{set, loss, spec, queries, full_optimum(set, loss),
                   total_costs(set, loss, queries.test.queries)};
  ResultTable table;
  for (std::size_t size : spec.sizes)
    for (Method m : spec.methods)
      for (std::size_t t = 0; t < spec.trials; ++t) {
        TrialRow row;
        row.size = size;
        row.method = m;
        row.trial = t;
        table.rows.push_back(std::move(row));
      }

  const std::size_t threads = std::max<std::size_t>(1, std::min(spec.threads, table.rows.size()));
  if (threads == 1) {
    for (auto& row : table.rows) run_trial(ctx, row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < table.rows.size(); i = next++) run_trial(ctx, table.rows[i]);
      });
    for (auto& th : pool) th.join();
  }
  table.cells = summarize(table.rows);
  return table;
}

void write_trials_csv(std::ostream& out, const ResultTable& table) {
  out << "size,method,trial,err_opt,err_avg,filtered_queries,wall_time_s\n"
      << std::setprecision(17);
  for (const auto& r : table.rows) {
    out << r.size << ',' << to_string(r.method) << ',' << r.trial << ',';
    if (r.ok)
      out << r.err_opt << ',' << r.err_avg << ',' << r.filtered_queries;
    else
      out << "nan,nan,";
    out << ',' << std::setprecision(6) << r.wall_time_s << std::setprecision(17) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const ResultTable& table) {
  out << "size,method,trials,successes,err_opt_mean,err_opt_std,err_avg_mean,err_avg_std,"
         "filtered_queries_mean,flagged\n"
      << std::setprecision(17);
  for (const auto& c : table.cells)
    out << c.size << ',' << to_string(c.method) << ',' << c.trials << ',' << c.successes << ','
        << c.err_opt_mean << ',' << c.err_opt_std << ',' << c.err_avg_mean << ','
        << c.err_avg_std << ',' << c.filtered_mean << ',' << (c.flagged ? 1 : 0) << '\n';
}

}  // namespace corelearn

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corelearn/baselines.hpp"
#include "corelearn/core.hpp"
#include "corelearn/learner.hpp"
#include "corelearn/queries.hpp"

namespace corelearn {

struct FullOptimum {
  Query q;
  double cost = 0.0;
  bool converged = true;
};

FullOptimum full_optimum(const WeightedLabeledSet& set, const LossModel& loss);

struct ErrOptResult {
  double value = 0.0;
  bool full_converged = true;
  bool coreset_converged = true;
};

/// |1 - f(P, w, q*_C) / f(P, w, q*)| where q*_C minimizes the coreset cost.
/// Throws MetricUndefinedError when f(P, w, q*) is at the ratio floor.
double err_opt(const WeightedLabeledSet& set, const Coreset& coreset, const LossModel& loss);
ErrOptResult err_opt_detail(const WeightedLabeledSet& set, const Coreset& coreset,
                            const LossModel& loss, const FullOptimum& full);

struct ErrAvgResult {
  double value = 0.0;
  std::size_t used = 0;
  std::size_t filtered = 0;
};

/// Mean over test queries of |1 - f(C, u, y, q) / f(P, w, b, q)|. Queries at
/// the ratio floor are skipped and counted; throws MetricUndefinedError when
/// every query is skipped.
ErrAvgResult err_avg(const WeightedLabeledSet& set, const Coreset& coreset,
                     const LossModel& loss, std::span<const Query> queries);
ErrAvgResult err_avg(std::span<const double> full_costs, const Coreset& coreset,
                     const LossModel& loss, std::span<const Query> queries);

enum class Method { learned, uniform, leverage };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct SweepSpec {
  std::vector<std::size_t> sizes;
  std::vector<Method> methods;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  // coreset_size and seed are overwritten per trial.
  TrainConfig learner;
  std::size_t threads = 1;
};

struct TrialRow {
  std::size_t size = 0;
  Method method = Method::uniform;
  std::size_t trial = 0;
  bool ok = false;
  double err_opt = 0.0;
  double err_avg = 0.0;
  std::size_t filtered_queries = 0;
  double wall_time_s = 0.0;
  std::string error;
  std::optional<TrainReport> report;  // learned trials only
};

struct CellSummary {
  std::size_t size = 0;
  Method method = Method::uniform;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double err_opt_mean = 0.0;
  double err_opt_std = 0.0;  // sample (n - 1) standard deviation; 0 below two successes
  double err_avg_mean = 0.0;
  double err_avg_std = 0.0;
  double filtered_mean = 0.0;
  bool flagged = false;  // fewer than half of the trials succeeded
};

struct ResultTable {
  std::vector<TrialRow> rows;  // (size, method, trial) order
  std::vector<CellSummary> cells;

  const CellSummary* cell(std::size_t size, Method method) const;
};

std::vector<CellSummary> summarize(std::span<const TrialRow> rows);

/// Builds one coreset per (size, method, trial), scored with Err_opt and with
/// Err_avg on the test split. Trial failures are recorded, not thrown.
/// Results do not depend on `threads`.
ResultTable sweep(const WeightedLabeledSet& set, const LossModel& loss, const SweepSpec& spec,
                  const QuerySplit& queries);

// size,method,trial,err_opt,err_avg,filtered_queries,wall_time_s
void write_trials_csv(std::ostream& out, const ResultTable& table);
// size,method,trials,successes,err_opt_mean,err_opt_std,err_avg_mean,err_avg_std,
// filtered_queries_mean,flagged
void write_aggregate_csv(std::ostream& out, const ResultTable& table);

}  // namespace corelearn

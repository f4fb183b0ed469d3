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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corelearn/core.hpp"

namespace corelearn {

enum class Algorithm {
  average,    // |mean f_P - mean f_C| + lambda |sum w - sum u|, full batch per epoch
  practical,  // sum over a minibatch of |1 - f_C/f_P| + lambda |sum w - sum u|
};

enum class InitStrategy { subsample, gaussian };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(InitStrategy s);
InitStrategy parse_init_strategy(std::string_view name);

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  std::size_t coreset_size = 1;
  std::size_t epochs = 10;
  double learning_rate = 0.01;
  double lambda = 1.0;
  std::size_t batch_size = 25;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::practical;
  bool learn_weights = true;
  // Ignored (treated as false) for logistic regression, whose labels are +-1.
  bool learn_labels = true;
  bool early_stop_on_validation = false;
  InitStrategy init = InitStrategy::subsample;
  // Global-norm gradient clipping threshold.
  double clip_norm = 1e3;
  AdamHyper adam;

  // Throws ContractError.
  void validate() const;

  // Hyperparameters of the reference regression experiments: linear
  // regression 10 epochs / batch 25 / lr 0.01 / lambda 1; logistic regression
  // 1000 epochs / batch 100 / lr 0.001 with weights frozen at 1/m.
  static TrainConfig defaults_for(LossKind kind);
};

struct AdamMoments {
  Vector first;
  Vector second;

  AdamMoments() = default;
  explicit AdamMoments(std::size_t n) : first(Vector::Zero(n)), second(Vector::Zero(n)) {}
};

// One bias-corrected Adam update of `params` in place. `step` is the 1-based
// index of this update.
void adam_update(AdamMoments& moments, std::span<double> params, std::span<const double> grads,
                 double learning_rate, std::int64_t step, const AdamHyper& hyper);

struct OptimizerState {
  AdamHyper hyper;
  AdamMoments points;
  AdamMoments labels;
  AdamMoments weights;
  std::int64_t step = 0;

  static OptimizerState for_coreset(const Coreset& c, AdamHyper hyper = {});
};

struct CoresetGradient {
  RowMatrix points;
  Vector labels;
  Vector weights;

  static CoresetGradient zeros(std::size_t m, std::size_t d);
  double norm() const;
  void scale(double s);
};

struct LearnMask {
  bool points = true;
  bool labels = true;
  bool weights = true;
};

// Adam update on every unmasked tensor, then weights := max(0, weights).
void adam_step(OptimizerState& state, Coreset& params, const CoresetGradient& grads,
               double learning_rate, LearnMask mask = {});

Vector project_weights(const Vector& u);

// m rows (weights 1/m). subsample: rows of P in a seeded random order,
// without replacement while m <= n. gaussian: per-feature normal noise
// around P's weighted mean.
Coreset init_coreset(const WeightedLabeledSet& set, std::size_t m, std::uint64_t seed,
                     InitStrategy strategy, const LossModel& loss);

struct ObjectiveEval {
  double value = 0.0;
  CoresetGradient gradient;
};

// Average-loss objective and its (sub)gradient. full_mean is the mean of
// f(P, w, q) over `queries`, computed the same way as the coreset side.
ObjectiveEval average_objective(const Coreset& c, std::span<const Query> queries,
                                const LossModel& loss, double full_mean,
                                double full_weight_sum, double lambda);

// Minibatch ratio objective sum_q |1 - f_C(q)/f_P(q)| + lambda |sum w - sum u|.
// full_costs[i] is f(P, w, batch[i]) and must exceed kRatioFloor.
ObjectiveEval practical_objective(const Coreset& c, std::span<const Query> batch,
                                  std::span<const double> full_costs, const LossModel& loss,
                                  double full_weight_sum, double lambda);

// Convenience forms that compute the full-data side directly.
double average_objective_value(const WeightedLabeledSet& set, const Coreset& c,
                               std::span<const Query> queries, const LossModel& loss,
                               double lambda);
double practical_objective_value(const WeightedLabeledSet& set, const Coreset& c,
                                 std::span<const Query> queries, const LossModel& loss,
                                 double lambda);

struct TrainReport {
  std::vector<double> train_loss;    // objective on the full training set after each epoch
  std::vector<double> val_err_avg;   // empty without validation queries
  std::size_t best_epoch = 0;
  double initial_loss = 0.0;
  std::int64_t steps = 0;
  std::size_t rejected_queries = 0;
  Coreset final_coreset;
  std::vector<std::string> warnings;
};

struct LearnResult {
  Coreset coreset;
  TrainReport report;
};

struct LearnOptions {
  std::span<const Query> validation;
  // Replaces init_coreset when set.
  std::optional<Coreset> initial;
};

LearnResult autocl_average(const WeightedLabeledSet& set, std::span<const Query> train,
                           const LossModel& loss, const TrainConfig& cfg,
                           const LearnOptions& options = {});

LearnResult autocl_practical(const WeightedLabeledSet& set, std::span<const Query> train,
                             std::span<const Query> validation, const LossModel& loss,
                             const TrainConfig& cfg, const LearnOptions& options = {});

// Dispatches on cfg.algorithm.
LearnResult learn_coreset(const WeightedLabeledSet& set, std::span<const Query> train,
                          std::span<const Query> validation, const LossModel& loss,
                          const TrainConfig& cfg, const LearnOptions& options = {});

}  // namespace corelearn

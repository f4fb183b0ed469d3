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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "corelearn/losses.hpp"

namespace corelearn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Queries whose full-data cost falls below this are excluded from every
// ratio |1 - f_C / f_P|.
inline constexpr double kRatioFloor = 1e-12;

/// A model parameter vector evaluated against the data.
struct Query {
  Vector params;

  Query() = default;
  explicit Query(Vector p) : params(std::move(p)) {}
  Query(std::initializer_list<double> values);

  std::size_t dim() const { return static_cast<std::size_t>(params.size()); }
  std::span<const double> span() const { return {params.data(), dim()}; }

  friend bool operator==(const Query& a, const Query& b) {
    return a.params.size() == b.params.size() && a.params == b.params;
  }
};

/// Input data (P, w, b): n points in R^d, nonnegative weights and real labels.
/// Immutable once constructed; the constructor validates every invariant.
class WeightedLabeledSet {
 public:
  WeightedLabeledSet(RowMatrix points, Vector weights, Vector labels);
  // Unit weights.
  WeightedLabeledSet(RowMatrix points, Vector labels);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.cols()); }

  const RowMatrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  const Vector& labels() const { return labels_; }

  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim(), dim()};
  }

  double weight_sum() const;

 private:
  RowMatrix points_;
  Vector weights_;
  Vector labels_;
};

/// The learnable summary (C, u, y). Fields are public because the learner
/// updates them in place; call validate() at observation points.
struct Coreset {
  RowMatrix points;
  Vector weights;
  Vector labels;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim(), dim()};
  }
  double weight_sum() const;

  // Throws ContractError on shape mismatch, negative weight, non-finite entry.
  void validate() const;

  static Coreset from_set(const WeightedLabeledSet& set);
};

/// (P, w, Q', f, mu) with a finite universe standing in for Q'.
class MeasurableQuerySpace {
 public:
  MeasurableQuerySpace(WeightedLabeledSet ground, LossModel loss, std::vector<Query> universe,
                       Vector measure);
  // Uniform measure over the universe.
  MeasurableQuerySpace(WeightedLabeledSet ground, LossModel loss, std::vector<Query> universe);

  const WeightedLabeledSet& ground() const { return ground_; }
  const LossModel& loss() const { return loss_; }
  const std::vector<Query>& universe() const { return universe_; }
  const Vector& measure() const { return measure_; }

 private:
  WeightedLabeledSet ground_;
  LossModel loss_;
  std::vector<Query> universe_;
  Vector measure_;
};

// f(S, v, q) = sum_i v_i f(s_i, b_i, q), pairwise-summed.
double total_cost(const RowMatrix& points, const Vector& weights, const Vector& labels,
                  const LossModel& loss, const Query& q);
double total_cost(const WeightedLabeledSet& set, const LossModel& loss, const Query& q);
double total_cost(const Coreset& set, const LossModel& loss, const Query& q);

// Gradient of f(S, v, q) with respect to q.
Vector cost_gradient(const RowMatrix& points, const Vector& weights, const Vector& labels,
                     const LossModel& loss, const Query& q);
Vector cost_gradient(const WeightedLabeledSet& set, const LossModel& loss, const Query& q);

// One total_cost per query, in query order.
std::vector<double> total_costs(const WeightedLabeledSet& set, const LossModel& loss,
                                std::span<const Query> queries);
std::vector<double> total_costs(const Coreset& set, const LossModel& loss,
                                std::span<const Query> queries);

// E_mu f(S, v, q) over the space's finite universe.
double expected_cost(const MeasurableQuerySpace& space, const WeightedLabeledSet& set);
double expected_cost(const MeasurableQuerySpace& space, const Coreset& set);
// Expectation of precomputed per-universe costs.
double expected_cost(const Vector& measure, std::span<const double> costs);

WeightedLabeledSet normalize_weights(const WeightedLabeledSet& set);

// Mean over `queries` of |1 - f_C(q) / f_P(q)|, skipping queries whose full
// cost is at or below kRatioFloor.
struct RatioDeviation {
  double mean = 0.0;
  std::size_t used = 0;
  std::size_t filtered = 0;
};
RatioDeviation mean_ratio_deviation(std::span<const double> full_costs,
                                    std::span<const double> coreset_costs);

}  // namespace corelearn

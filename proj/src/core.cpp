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

#include "corelearn/core.hpp"

#include <cmath>
#include <string>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

namespace {

constexpr double kMeasureTolerance = 1e-12;

bool all_finite(const auto& m) { return m.allFinite(); }

}  // namespace

Query::Query(std::initializer_list<double> values) : params(static_cast<Eigen::Index>(values.size())) {
  Eigen::Index i = 0;
  for (double v : values) params[i++] = v;
}

WeightedLabeledSet::WeightedLabeledSet(RowMatrix points, Vector weights, Vector labels)
    : points_(std::move(points)), weights_(std::move(weights)), labels_(std::move(labels)) {
  if (points_.rows() < 1) throw ContractError("weighted set needs at least one point");
  if (points_.cols() < 1) throw ContractError("weighted set needs at least one feature");
  if (weights_.size() != points_.rows() || labels_.size() != points_.rows())
    throw ContractError("weights and labels must have one entry per point");
  if (!all_finite(points_) || !all_finite(weights_) || !all_finite(labels_))
    throw ContractError("weighted set contains non-finite entries");
  if ((weights_.array() < 0.0).any()) throw ContractError("weights must be nonnegative");
}

WeightedLabeledSet::WeightedLabeledSet(RowMatrix points, Vector labels)
    : WeightedLabeledSet(points, Vector::Ones(points.rows()), std::move(labels)) {}

double WeightedLabeledSet::weight_sum() const {
  return pairwise_sum({weights_.data(), size()});
}

double Coreset::weight_sum() const {
  return pairwise_sum({weights.data(), static_cast<std::size_t>(weights.size())});
}

void Coreset::validate() const {
  if (points.rows() < 1) throw ContractError("coreset needs at least one point");
  if (weights.size() != points.rows() || labels.size() != points.rows())
    throw ContractError("coreset weights and labels must have one entry per point");
  if (!all_finite(points) || !all_finite(weights) || !all_finite(labels))
    throw ContractError("coreset contains non-finite entries");
  if ((weights.array() < 0.0).any()) throw ContractError("coreset weights must be nonnegative");
}

Coreset Coreset::from_set(const WeightedLabeledSet& set) {
  return Coreset{set.points(), set.weights(), set.labels()};
}

MeasurableQuerySpace::MeasurableQuerySpace(WeightedLabeledSet ground, LossModel loss,
                                           std::vector<Query> universe, Vector measure)
    : ground_(std::move(ground)),
      loss_(loss),
      universe_(std::move(universe)),
      measure_(std::move(measure)) {
  if (universe_.empty()) throw ContractError("query universe is empty");
  if (measure_.size() != static_cast<Eigen::Index>(universe_.size()))
    throw ContractError("measure must have one entry per query");
  if ((measure_.array() < 0.0).any() || !all_finite(measure_))
    throw ContractError("measure entries must be finite and nonnegative");
  const double total = pairwise_sum({measure_.data(), universe_.size()});
  if (std::abs(total - 1.0) > kMeasureTolerance)
    throw ContractError("measure must sum to 1, got " + std::to_string(total));
  const std::size_t qdim = loss_.query_dim(ground_.dim());
  for (const auto& q : universe_)
    if (q.dim() != qdim) throw ContractError("query dimension does not match the ground set");
}

MeasurableQuerySpace::MeasurableQuerySpace(WeightedLabeledSet ground, LossModel loss,
                                           std::vector<Query> universe)
    : MeasurableQuerySpace(std::move(ground), loss, universe,
                           Vector::Constant(static_cast<Eigen::Index>(universe.size()),
                                            universe.empty() ? 0.0 : 1.0 / universe.size())) {}

double total_cost(const RowMatrix& points, const Vector& weights, const Vector& labels,
                  const LossModel& loss, const Query& q) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = static_cast<std::size_t>(points.cols());
  if (weights.size() != points.rows() || labels.size() != points.rows())
    throw ContractError("total_cost: weights and labels must have one entry per point");
  if (q.dim() != loss.query_dim(d))
    throw ContractError("total_cost: query has " + std::to_string(q.dim()) +
                        " coordinates, expected " + std::to_string(loss.query_dim(d)));
  std::vector<double> terms(n);
  const auto qs = q.span();
  for (std::size_t i = 0; i < n; ++i) {
    const double b = labels[static_cast<Eigen::Index>(i)];
    loss.check_label(b);
    const std::span<const double> p{points.data() + i * d, d};
    terms[i] = weights[static_cast<Eigen::Index>(i)] * loss.value_at_score(loss.score(p, qs), b);
    if (!std::isfinite(terms[i])) throw NumericError("total_cost: non-finite loss term", i);
  }
  return pairwise_sum(terms);
}

double total_cost(const WeightedLabeledSet& set, const LossModel& loss, const Query& q) {
  return total_cost(set.points(), set.weights(), set.labels(), loss, q);
}

double total_cost(const Coreset& set, const LossModel& loss, const Query& q) {
  return total_cost(set.points, set.weights, set.labels, loss, q);
}

Vector cost_gradient(const RowMatrix& points, const Vector& weights, const Vector& labels,
                     const LossModel& loss, const Query& q) {
  const auto d = points.cols();
  if (q.dim() != loss.query_dim(static_cast<std::size_t>(d)))
    throw ContractError("cost_gradient: query dimension does not match the points");
  Vector scores = points * q.params.head(d);
  if (loss.intercept()) scores.array() += q.params[d];
  Vector coef(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    coef[i] = weights[i] * loss.dscore(scores[i], labels[i]);
  Vector g(q.params.size());
  g.head(d) = points.transpose() * coef;
  if (loss.intercept()) g[d] = coef.sum();
  return g;
}

Vector cost_gradient(const WeightedLabeledSet& set, const LossModel& loss, const Query& q) {
  return cost_gradient(set.points(), set.weights(), set.labels(), loss, q);
}

std::vector<double> total_costs(const WeightedLabeledSet& set, const LossModel& loss,
                                std::span<const Query> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(total_cost(set, loss, q));
  return out;
}

std::vector<double> total_costs(const Coreset& set, const LossModel& loss,
                                std::span<const Query> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(total_cost(set, loss, q));
  return out;
}

double expected_cost(const Vector& measure, std::span<const double> costs) {
  if (static_cast<std::size_t>(measure.size()) != costs.size())
    throw ContractError("expected_cost: measure and costs differ in length");
  std::vector<double> terms(costs.size());
  for (std::size_t j = 0; j < costs.size(); ++j)
    terms[j] = measure[static_cast<Eigen::Index>(j)] * costs[j];
  return pairwise_sum(terms);
}

double expected_cost(const MeasurableQuerySpace& space, const WeightedLabeledSet& set) {
  return expected_cost(space.measure(), total_costs(set, space.loss(), space.universe()));
}

double expected_cost(const MeasurableQuerySpace& space, const Coreset& set) {
  return expected_cost(space.measure(), total_costs(set, space.loss(), space.universe()));
}

WeightedLabeledSet normalize_weights(const WeightedLabeledSet& set) {
  const double total = set.weight_sum();
  if (!(total > 0.0)) throw DegenerateInputError("cannot normalize: weights sum to zero");
  return WeightedLabeledSet(set.points(), set.weights() / total, set.labels());
}

RatioDeviation mean_ratio_deviation(std::span<const double> full_costs,
                                    std::span<const double> coreset_costs) {
  if (full_costs.size() != coreset_costs.size())
    throw ContractError("mean_ratio_deviation: cost vectors differ in length");
  std::vector<double> terms;
  terms.reserve(full_costs.size());
  RatioDeviation r;
  for (std::size_t j = 0; j < full_costs.size(); ++j) {
    if (full_costs[j] <= kRatioFloor) {
      ++r.filtered;
      continue;
    }
    terms.push_back(std::abs(1.0 - coreset_costs[j] / full_costs[j]));
  }
  r.used = terms.size();
  if (r.used > 0) r.mean = pairwise_sum(terms) / static_cast<double>(r.used);
  return r;
}

}  // namespace corelearn

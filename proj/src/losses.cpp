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

#include "corelearn/losses.hpp"

#include <cmath>

#include "corelearn/errors.hpp"

namespace corelearn {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::linear_regression:
      return "linear_regression";
    case LossKind::logistic_regression:
      return "logistic_regression";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "linear_regression" || name == "linreg") return LossKind::linear_regression;
  if (name == "logistic_regression" || name == "logreg") return LossKind::logistic_regression;
  throw ContractError("unknown loss kind '" + std::string(name) + "'");
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void check_same_size(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw ContractError("point has " + std::to_string(p.size()) + " features but query has " +
                        std::to_string(q.size()) + " coordinates");
}

}  // namespace

double linreg_loss(std::span<const double> p, double b, std::span<const double> q) {
  check_same_size(p, q);
  const double r = dot(p, q) - b;
  return r * r;
}

double logreg_loss(std::span<const double> p, double b, std::span<const double> q) {
  check_same_size(p, q);
  LossModel(LossKind::logistic_regression).check_label(b);
  return softplus(-b * dot(p, q));
}

double LossModel::score(std::span<const double> p, std::span<const double> q) const {
  if (q.size() != query_dim(p.size()))
    throw ContractError("query has " + std::to_string(q.size()) + " coordinates, expected " +
                        std::to_string(query_dim(p.size())));
  double z = dot(p, q.first(p.size()));
  if (intercept_) z += q[p.size()];
  return z;
}

double LossModel::value_at_score(double z, double b) const {
  if (kind_ == LossKind::linear_regression) {
    const double r = z - b;
    return r * r;
  }
  return softplus(-b * z);
}

double LossModel::dscore(double z, double b) const {
  if (kind_ == LossKind::linear_regression) return 2.0 * (z - b);
  return -b * sigmoid(-b * z);
}

double LossModel::dlabel(double z, double b) const {
  if (kind_ == LossKind::linear_regression) return -2.0 * (z - b);
  return -z * sigmoid(-b * z);
}

void LossModel::check_label(double b) const {
  if (kind_ == LossKind::logistic_regression && b != 1.0 && b != -1.0)
    throw ContractError("logistic regression label must be -1 or +1, got " + std::to_string(b));
}

double LossModel::value(std::span<const double> p, double b, std::span<const double> q) const {
  check_label(b);
  return value_at_score(score(p, q), b);
}

LossGradient loss_gradients(const LossModel& loss, std::span<const double> p, double b,
                            double u_weight, std::span<const double> q) {
  const double z = loss.score(p, q);
  const double dz = loss.dscore(z, b);
  LossGradient g;
  g.point.resize(p.size());
  g.query.resize(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    g.point[i] = u_weight * dz * q[i];
    g.query[i] = u_weight * dz * p[i];
  }
  if (loss.intercept()) g.query[p.size()] = u_weight * dz;
  g.label = u_weight * loss.dlabel(z, b);
  g.weight = loss.value_at_score(z, b);
  return g;
}

}  // namespace corelearn

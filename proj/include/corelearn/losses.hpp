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
#include <string>
#include <string_view>
#include <vector>

namespace corelearn {

enum class LossKind { linear_regression, logistic_regression };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

// Numerically stable log(1 + exp(x)).
double softplus(double x);
// Numerically stable 1 / (1 + exp(-x)).
double sigmoid(double x);

// (<p,q> - b)^2. p and q must have equal length.
double linreg_loss(std::span<const double> p, double b, std::span<const double> q);
// log(1 + exp(-b <p,q>)) for b in {-1, +1}.
double logreg_loss(std::span<const double> p, double b, std::span<const double> q);

// Gradients of u * f(p, b, q) with respect to each argument.
struct LossGradient {
  std::vector<double> point;  // d entries (the intercept feature is not learnable)
  double label = 0.0;
  double weight = 0.0;
  std::vector<double> query;  // query_dim entries
};

/// Per-point loss f(p, b, q) over a linear score z = <p, q>.
///
/// With `intercept` set, every point carries an implicit trailing constant 1
/// feature, so queries have d + 1 coordinates and the last one is the bias.
class LossModel {
 public:
  LossModel() = default;
  explicit LossModel(LossKind kind, bool intercept = false) : kind_(kind), intercept_(intercept) {}

  LossKind kind() const { return kind_; }
  bool intercept() const { return intercept_; }

  std::size_t query_dim(std::size_t point_dim) const { return point_dim + (intercept_ ? 1 : 0); }

  // Linear score <p, q> (plus bias). Throws ContractError on size mismatch.
  double score(std::span<const double> p, std::span<const double> q) const;

  double value(std::span<const double> p, double b, std::span<const double> q) const;

  // f as a function of the score z, and df/dz. No label check.
  double value_at_score(double z, double b) const;
  double dscore(double z, double b) const;
  // df/db at fixed score.
  double dlabel(double z, double b) const;

  // Throws ContractError if b is not an admissible label for this loss.
  void check_label(double b) const;

  friend bool operator==(const LossModel&, const LossModel&) = default;

 private:
  LossKind kind_ = LossKind::linear_regression;
  bool intercept_ = false;
};

LossGradient loss_gradients(const LossModel& loss, std::span<const double> p, double b,
                            double u_weight, std::span<const double> q);

}  // namespace corelearn

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
#include <string>
#include <string_view>
#include <vector>

#include "corelearn/core.hpp"

namespace corelearn {

// m rows drawn uniformly with replacement; row i gets weight w_i * n / m so
// f(C, u, q) is an unbiased estimate of f(P, w, q).
Coreset uniform_coreset(const WeightedLabeledSet& set, std::size_t m, std::uint64_t seed);

struct LeverageScores {
  Vector scores;
  std::size_t rank = 0;
  bool regularized = false;  // rank-deficient input, ridge fallback used
};

/// Statistical leverage of each row of [sqrt(w) x | sqrt(w) b], where x is the
/// loss's feature vector (with the constant column when the loss has an
/// intercept). Scores lie in [0, 1] and sum to the matrix rank.
LeverageScores leverage_scores(const WeightedLabeledSet& set, const LossModel& loss);

struct LeverageCoreset {
  Coreset coreset;
  std::vector<std::string> warnings;
};

// Importance sampling with probability proportional to leverage, with
// replacement; row i gets weight w_i / (m p_i). Linear regression only.
LeverageCoreset leverage_coreset(const WeightedLabeledSet& set, const LossModel& loss,
                                 std::size_t m, std::uint64_t seed);

enum class SolveMethod { closed_form, gradient_descent };

struct SolveOptions {
  double gradient_tolerance = 1e-8;
  std::size_t max_iterations = 100000;
  double ridge = 1e-10;
};

struct SolveResult {
  Query optimum;
  bool converged = true;
  bool ridge_fallback = false;
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  std::vector<std::string> warnings;
};

/// argmin_q f(S, v, q). closed_form solves the weighted normal equations
/// (linear regression only); gradient_descent runs fixed-step descent with
/// step 1/L from the loss's curvature bound and reports non-convergence
/// instead of throwing. Descent at that step is monotone, so the returned last
/// iterate is also the lowest-cost one.
SolveResult solve_optimal(const RowMatrix& points, const Vector& weights, const Vector& labels,
                          const LossModel& loss, SolveMethod method, const SolveOptions& options = {});
SolveResult solve_optimal(const WeightedLabeledSet& set, const LossModel& loss, SolveMethod method,
                          const SolveOptions& options = {});
SolveResult solve_optimal(const Coreset& set, const LossModel& loss, SolveMethod method,
                          const SolveOptions& options = {});

// closed_form for linear regression, gradient_descent otherwise.
SolveMethod default_solve_method(const LossModel& loss);

}  // namespace corelearn

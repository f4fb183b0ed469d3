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
#include <span>
#include <string>
#include <vector>

#include "corelearn/core.hpp"

namespace corelearn {

// Sample sizes that make the empirical mean of k i.i.d. query costs bounded
// by M land within eps of its expectation with probability >= 1 - delta.
//   hoeffding_k: 2 M^2 ln(2/delta) / eps^2
//   claim2_k:    2 ((1 + eps) M)^2 ln(2/delta) / eps^2   (coreset costs are
//                bounded by (1 + eps) M once the weight sums agree to eps)
// The *_real forms return the value before rounding up.
double hoeffding_k_real(double eps, double delta, double M);
double claim2_k_real(double eps, double delta, double M);
std::uint64_t hoeffding_k(double eps, double delta, double M);
std::uint64_t claim2_k(double eps, double delta, double M);

// Smallest eps with claim2_k_real(eps, delta, M) <= k; +inf when no eps works.
double claim2_eps_for_k(std::size_t k, double delta, double M);

struct BoundSpec {
  double eps = 0.0;
  double delta = 0.0;
  double M = 0.0;
  std::uint64_t k_claim1 = 0;
  std::uint64_t k_claim2 = 0;

  static BoundSpec compute(double eps, double delta, double M);
  bool consistent() const;
};

void write_bound_table_csv(std::ostream& out, std::span<const BoundSpec> rows);

inline constexpr double kMSafetyFactor = 1.1;

// 1.1 * max over the pool and the rows of |f(p, b, q)|.
double estimate_M(const RowMatrix& points, const Vector& labels, const LossModel& loss,
                  std::span<const Query> pool);
double estimate_M(const WeightedLabeledSet& set, const LossModel& loss, std::span<const Query> pool);
double estimate_M(const Coreset& set, const LossModel& loss, std::span<const Query> pool);
// 1.1 * max over the pool of |f(P, w, q)|.
double estimate_M_set(const WeightedLabeledSet& set, const LossModel& loss,
                      std::span<const Query> pool);

// Binomial allowance for a Monte-Carlo check of a failure probability delta.
double violation_allowance(double delta, std::size_t trials);

struct Claim1Result {
  std::uint64_t k = 0;
  double M = 0.0;  // exact max |f(P, w, q)| over the universe
  double expected = 0.0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  double allowed_rate = 0.0;  // delta + 3 binomial standard deviations
};

// Draws `trials` samples of k = hoeffding_k(eps, delta, M) queries and counts
// how often the sample-average cost deviates from the exact expectation by
// more than eps.
Claim1Result verify_claim1(const MeasurableQuerySpace& space, double eps, double delta,
                           std::size_t trials, std::uint64_t seed);

struct Claim2Result {
  enum class Status { ok, premise1_failed, premise2_failed };
  Status status = Status::ok;
  std::uint64_t k = 0;
  double M = 0.0;           // max over universe and both point sets of |f(p, q)|
  double weight_gap = 0.0;  // |sum w - sum u|
  double expected_gap = 0.0;
  std::size_t trials = 0;
  std::size_t premise2_failures = 0;
  std::size_t evaluated = 0;  // trials whose sample met the sample-gap premise
  std::size_t violations = 0;
  double violation_rate = 0.0;
  std::string message;
};

// The weight-sum premise |sum w - sum u| <= eps is checked once and the
// sample-gap premise |mean f_P - mean f_C| <= eps on each sampled query
// set. Among trials where both hold, counts |E f(P) - E f(C)| >= 3 eps.
Claim2Result verify_claim2(const WeightedLabeledSet& set, const Coreset& coreset,
                           const MeasurableQuerySpace& space, double eps, double delta,
                           std::size_t trials, std::uint64_t seed);

// Smallest eps for which a learned coreset meets both premises on `sample`
// and |sample| satisfies the claim2_k requirement.
struct Claim2Slack {
  double weight_gap = 0.0;
  double sample_gap = 0.0;
  double sampling_eps = 0.0;
  double eps = 0.0;
};
Claim2Slack claim2_slack(const WeightedLabeledSet& set, const Coreset& coreset,
                         const LossModel& loss, std::span<const Query> sample, double delta,
                         double M);

// eps = eps' * M.
double relate_eps(double eps_prime, double M);

struct RatioChain {
  double eps_prime = 0.0;   // mean |1 - f_C/f_P| over the queries
  double M = 0.0;           // max f(P, w, q) over the queries
  double eps = 0.0;         // relate_eps(eps_prime, M)
  double average_gap = 0.0; // |mean f_P - mean f_C|
  bool holds = false;       // average_gap <= eps (up to 1e-10)
};
RatioChain check_ratio_chain(const WeightedLabeledSet& set, const Coreset& coreset,
                             const LossModel& loss, std::span<const Query> queries);

}  // namespace corelearn

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

#include "corelearn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"
#include "corelearn/queries.hpp"

namespace corelearn {

namespace {

void check_bound_args(double eps, double delta, double M) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ContractError("eps must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractError("delta must lie in (0, 1)");
  if (!(M > 0.0) || !std::isfinite(M)) throw ContractError("M must be > 0");
}

// Rounds up, absorbing a few ulps of error in the logarithm so that exact
// integers (e.g. 4 for eps = M, delta = 2/e^2) are not bumped.
std::uint64_t ceil_count(double x) {
  return static_cast<std::uint64_t>(std::ceil(x * (1.0 - 1e-12)));
}

}  // namespace

double hoeffding_k_real(double eps, double delta, double M) {
  check_bound_args(eps, delta, M);
  return 2.0 * M * M * std::log(2.0 / delta) / (eps * eps);
}

double claim2_k_real(double eps, double delta, double M) {
  check_bound_args(eps, delta, M);
  const double scaled = (1.0 + eps) * M;
  return 2.0 * scaled * scaled * std::log(2.0 / delta) / (eps * eps);
}

std::uint64_t hoeffding_k(double eps, double delta, double M) {
  return ceil_count(hoeffding_k_real(eps, delta, M));
}

std::uint64_t claim2_k(double eps, double delta, double M) {
  return ceil_count(claim2_k_real(eps, delta, M));
}

double claim2_eps_for_k(std::size_t k, double delta, double M) {
  check_bound_args(1.0, delta, M);
  // eps sqrt(k) = a M (1 + eps) with a = sqrt(2 ln(2/delta)).
  const double a = std::sqrt(2.0 * std::log(2.0 / delta));
  const double root_k = std::sqrt(static_cast<double>(k));
  if (root_k <= a * M) return std::numeric_limits<double>::infinity();
  return a * M / (root_k - a * M);
}

BoundSpec BoundSpec::compute(double eps, double delta, double M) {
  return {eps, delta, M, hoeffding_k(eps, delta, M), claim2_k(eps, delta, M)};
}

bool BoundSpec::consistent() const {
  return k_claim1 == hoeffding_k(eps, delta, M) && k_claim2 == claim2_k(eps, delta, M);
}

void write_bound_table_csv(std::ostream& out, std::span<const BoundSpec> rows) {
  out << "eps,delta,M,k_claim1,k_claim2\n";
  for (const auto& r : rows)
    out << format_double(r.eps) << ',' << format_double(r.delta) << ',' << format_double(r.M)
        << ',' << r.k_claim1 << ',' << r.k_claim2 << '\n';
}

double estimate_M(const RowMatrix& points, const Vector& labels, const LossModel& loss,
                  std::span<const Query> pool) {
  if (pool.empty()) throw ContractError("estimate_M: empty query pool");
  const auto d = static_cast<std::size_t>(points.cols());
  double best = 0.0;
  for (const auto& q : pool)
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const std::span<const double> p{points.data() + static_cast<std::size_t>(i) * d, d};
      best = std::max(best, std::abs(loss.value(p, labels[i], q.span())));
    }
  return kMSafetyFactor * best;
}

double estimate_M(const WeightedLabeledSet& set, const LossModel& loss, std::span<const Query> pool) {
  return estimate_M(set.points(), set.labels(), loss, pool);
}

double estimate_M(const Coreset& set, const LossModel& loss, std::span<const Query> pool) {
  return estimate_M(set.points, set.labels, loss, pool);
}

double estimate_M_set(const WeightedLabeledSet& set, const LossModel& loss,
                      std::span<const Query> pool) {
  if (pool.empty()) throw ContractError("estimate_M_set: empty query pool");
  double best = 0.0;
  for (const auto& q : pool) best = std::max(best, std::abs(total_cost(set, loss, q)));
  return kMSafetyFactor * best;
}

double violation_allowance(double delta, std::size_t trials) {
  return delta + 3.0 * std::sqrt(delta * (1.0 - delta) / static_cast<double>(trials));
}

namespace {

// Counts of each universe element in k iid draws from `measure`, drawn as
// sequential conditional binomials. Cost is linear in the universe size.
std::vector<std::uint64_t> multinomial_counts(const Vector& measure, std::size_t k, Rng& rng) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(measure.size()), 0);
  std::uint64_t left = k;
  double mass = measure.sum();
  for (Eigen::Index i = 0; i < measure.size() && left > 0; ++i) {
    const double p = mass > 0.0 ? std::clamp(measure[i] / mass, 0.0, 1.0) : 1.0;
    const std::uint64_t c =
        i + 1 == measure.size() ? left : std::binomial_distribution<std::uint64_t>(left, p)(rng);
    counts[static_cast<std::size_t>(i)] = c;
    left -= c;
    mass -= measure[i];
  }
  return counts;
}

double sample_mean(std::span<const double> costs, const std::vector<std::uint64_t>& counts,
                   std::size_t k, std::vector<double>& scratch) {
  scratch.resize(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i)
    scratch[i] = counts[i] == 0 ? 0.0 : static_cast<double>(counts[i]) * costs[i];
  return pairwise_sum(scratch) / static_cast<double>(k);
}

}  // namespace

Claim1Result verify_claim1(const MeasurableQuerySpace& space, double eps, double delta,
                           std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ContractError("verify_claim1: trials must be >= 1");
  const auto costs = total_costs(space.ground(), space.loss(), space.universe());
  Claim1Result r;
  for (double c : costs) r.M = std::max(r.M, std::abs(c));
  // With M = 0 every cost is zero and any sample size is exact.
  r.k = r.M > 0.0 ? hoeffding_k(eps, delta, r.M) : 1;
  if (r.M == 0.0) check_bound_args(eps, delta, 1.0);
  r.expected = expected_cost(space.measure(), costs);
  r.trials = trials;
  r.allowed_rate = violation_allowance(delta, trials);

  Rng rng = make_rng(seed, "verify_claim1");
  std::vector<double> scratch;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto counts = multinomial_counts(space.measure(), r.k, rng);
    if (std::abs(sample_mean(costs, counts, r.k, scratch) - r.expected) > eps) ++r.violations;
  }
  r.violation_rate = static_cast<double>(r.violations) / static_cast<double>(trials);
  return r;
}

Claim2Result verify_claim2(const WeightedLabeledSet& set, const Coreset& coreset,
                           const MeasurableQuerySpace& space, double eps, double delta,
                           std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw ContractError("verify_claim2: trials must be >= 1");
  check_bound_args(eps, delta, 1.0);
  coreset.validate();
  const LossModel& loss = space.loss();
  const auto& universe = space.universe();

  Claim2Result r;
  r.trials = trials;
  r.M = std::max(estimate_M(set, loss, universe), estimate_M(coreset, loss, universe)) /
        kMSafetyFactor;
  r.weight_gap = std::abs(set.weight_sum() - coreset.weight_sum());
  if (r.weight_gap > eps) {
    r.status = Claim2Result::Status::premise1_failed;
    r.message = "weight-sum premise failed: |sum w - sum u| = " + std::to_string(r.weight_gap) +
                " exceeds eps = " + std::to_string(eps);
    return r;
  }
  r.k = r.M > 0.0 ? claim2_k(eps, delta, r.M) : 1;

  const auto full = total_costs(set, loss, universe);
  const auto core = total_costs(coreset, loss, universe);
  r.expected_gap =
      std::abs(expected_cost(space.measure(), full) - expected_cost(space.measure(), core));

  Rng rng = make_rng(seed, "verify_claim2");
  std::vector<double> scratch;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto counts = multinomial_counts(space.measure(), r.k, rng);
    const double sample_gap = std::abs(sample_mean(full, counts, r.k, scratch) -
                                       sample_mean(core, counts, r.k, scratch));
    if (sample_gap > eps) {
      ++r.premise2_failures;
      continue;
    }
    ++r.evaluated;
    if (r.expected_gap >= 3.0 * eps) ++r.violations;
  }
  if (r.evaluated == 0) {
    r.status = Claim2Result::Status::premise2_failed;
    r.message = "sample-gap premise failed in every one of " + std::to_string(trials) +
                " sampled query sets";
    return r;
  }
  r.violation_rate = static_cast<double>(r.violations) / static_cast<double>(r.evaluated);
  return r;
}

Claim2Slack claim2_slack(const WeightedLabeledSet& set, const Coreset& coreset,
                         const LossModel& loss, std::span<const Query> sample, double delta,
                         double M) {
  if (sample.empty()) throw ContractError("claim2_slack: empty sample");
  Claim2Slack s;
  s.weight_gap = std::abs(set.weight_sum() - coreset.weight_sum());
  const auto full = total_costs(set, loss, sample);
  const auto core = total_costs(coreset, loss, sample);
  const double k = static_cast<double>(sample.size());
  s.sample_gap = std::abs(pairwise_sum(full) / k - pairwise_sum(core) / k);
  s.sampling_eps = claim2_eps_for_k(sample.size(), delta, M);
  s.eps = std::max({s.weight_gap, s.sample_gap, s.sampling_eps});
  return s;
}

double relate_eps(double eps_prime, double M) {
  if (!(eps_prime >= 0.0)) throw ContractError("relate_eps: eps' must be >= 0");
  if (!(M > 0.0)) throw ContractError("relate_eps: M must be > 0");
  return eps_prime * M;
}

RatioChain check_ratio_chain(const WeightedLabeledSet& set, const Coreset& coreset,
                             const LossModel& loss, std::span<const Query> queries) {
  if (queries.empty()) throw ContractError("check_ratio_chain: no queries");
  const auto full = total_costs(set, loss, queries);
  const auto core = total_costs(coreset, loss, queries);
  RatioChain c;
  const auto dev = mean_ratio_deviation(full, core);
  if (dev.filtered > 0)
    throw MetricUndefinedError("check_ratio_chain: a query has zero full-data cost");
  c.eps_prime = dev.mean;
  for (double f : full) c.M = std::max(c.M, std::abs(f));
  c.eps = relate_eps(c.eps_prime, c.M);
  const double k = static_cast<double>(queries.size());
  c.average_gap = std::abs(pairwise_sum(full) / k - pairwise_sum(core) / k);
  c.holds = c.average_gap <= c.eps + 1e-10;
  return c;
}

}  // namespace corelearn

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

#include <doctest.h>

#include <cmath>

#include "corelearn/core.hpp"
#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"
#include "test_support.hpp"

using namespace corelearn;

namespace {

const LossModel kLinreg(LossKind::linear_regression);
const LossModel kLogreg(LossKind::logistic_regression);

RowMatrix rows(std::initializer_list<std::initializer_list<double>> r) {
  RowMatrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("total_cost examples") {
  CHECK(total_cost(rows({{1}}), vec({1}), vec({2}), kLinreg, Query{2.0}) == 0.0);
  CHECK(total_cost(rows({{1}, {2}}), vec({0.5, 0.5}), vec({0, 0}), kLinreg, Query{1.0}) ==
        doctest::Approx(2.5).epsilon(1e-15));
  const double ln2 = std::log(2.0);
  CHECK(total_cost(rows({{3, -1}}), vec({1}), vec({1}), kLogreg, Query{0.0, 0.0}) ==
        doctest::Approx(ln2).epsilon(1e-15));
  CHECK(total_cost(rows({{3, -1}, {0.5, 2}}), vec({2, 0.5}), vec({1, -1}), kLogreg,
                   Query{0.0, 0.0}) == doctest::Approx(2.5 * ln2).epsilon(1e-15));
}

TEST_CASE("total_cost errors") {
  CHECK_THROWS_AS(total_cost(rows({{1, 2}}), vec({1}), vec({0}), kLinreg, Query{1.0}),
                  ContractError);
  CHECK_THROWS_AS(total_cost(rows({{1}}), vec({1, 1}), vec({0}), kLinreg, Query{1.0}),
                  ContractError);
  try {
    total_cost(rows({{1}, {1e200}}), vec({1, 1}), vec({0, 0}), kLinreg, Query{1e200});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(e.index() == 0);
  }
  CHECK_THROWS_AS(total_cost(rows({{1}}), vec({1}), vec({0.5}), kLogreg, Query{1.0}),
                  ContractError);
}

TEST_CASE("expected_cost over a finite universe") {
  // Point p = 1, label 0: cost at q is q^2.
  const WeightedLabeledSet set(rows({{1}}), vec({1}), vec({0}));
  const std::vector<Query> one{Query{2.0}};
  CHECK(expected_cost(MeasurableQuerySpace(set, kLinreg, one), set) ==
        total_cost(set, kLinreg, one[0]));

  const std::vector<Query> two{Query{1.0}, Query{std::sqrt(3.0)}};  // costs 1 and 3
  CHECK(expected_cost(MeasurableQuerySpace(set, kLinreg, two), set) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(expected_cost(MeasurableQuerySpace(set, kLinreg, two, vec({1, 0})), set) == 1.0);
}

TEST_CASE("measurable query space validates the measure") {
  const WeightedLabeledSet set(rows({{1}}), vec({1}), vec({0}));
  const std::vector<Query> two{Query{1.0}, Query{2.0}};
  CHECK_THROWS_AS(MeasurableQuerySpace(set, kLinreg, two, vec({0.5, 0.6})), ContractError);
  CHECK_THROWS_AS(MeasurableQuerySpace(set, kLinreg, two, vec({1.5, -0.5})), ContractError);
  CHECK_THROWS_AS(MeasurableQuerySpace(set, kLinreg, two, vec({1})), ContractError);
  CHECK_THROWS_AS(MeasurableQuerySpace(set, kLinreg, {Query{1.0, 2.0}}), ContractError);
}

TEST_CASE("normalize_weights") {
  auto w = [](std::initializer_list<double> ws) {
    const auto n = static_cast<Eigen::Index>(ws.size());
    return normalize_weights(WeightedLabeledSet(RowMatrix::Ones(n, 1), vec(ws), Vector::Zero(n)))
        .weights();
  };
  CHECK(w({2, 2}) == vec({0.5, 0.5}));
  CHECK(w({1}) == vec({1}));
  CHECK(w({3, 1}) == vec({0.75, 0.25}));
  CHECK_THROWS_AS(w({0, 0}), DegenerateInputError);

  Rng rng(5);
  std::uniform_real_distribution<double> unif(0.0, 10.0);
  for (int t = 0; t < 20; ++t) {
    Vector ws(37);
    for (auto& x : ws) x = unif(rng);
    const auto s = normalize_weights(WeightedLabeledSet(RowMatrix::Ones(37, 2), ws, Vector::Zero(37)));
    CHECK(std::abs(s.weight_sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("weighted set invariants") {
  CHECK_THROWS_AS(WeightedLabeledSet(RowMatrix(0, 2), Vector(0), Vector(0)), ContractError);
  CHECK_THROWS_AS(WeightedLabeledSet(rows({{1}}), vec({-1}), vec({0})), ContractError);
  CHECK_THROWS_AS(WeightedLabeledSet(rows({{NAN}}), vec({1}), vec({0})), ContractError);
  CHECK_THROWS_AS(WeightedLabeledSet(rows({{1}}), vec({1}), vec({INFINITY})), ContractError);
}

TEST_CASE("total_cost is linear in the weights") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto set = testing::planted_set(50, 3, LossKind::linear_regression, seed);
    const auto q = testing::gaussian_queries(1, 3, seed + 100)[0];
    for (double alpha : {0.0, 0.3, 2.0, 17.5}) {
      const WeightedLabeledSet scaled(set.points(), alpha * set.weights(), set.labels());
      CHECK(testing::close(total_cost(scaled, kLinreg, q), alpha * total_cost(set, kLinreg, q),
                           1e-10, 0.0));
    }
  }
}

TEST_CASE("uniform expected cost equals the mean total cost") {
  const auto set = testing::planted_set(40, 2, LossKind::linear_regression, 3);
  const auto universe = testing::gaussian_queries(9, 2, 4);
  const auto costs = total_costs(set, kLinreg, universe);
  double mean = 0.0;
  for (double c : costs) mean += c / 9.0;
  CHECK(std::abs(expected_cost(MeasurableQuerySpace(set, kLinreg, universe), set) - mean) <= 1e-12);
}

TEST_CASE("a coreset equal to the input reproduces the cost bit for bit") {
  const auto set = testing::planted_set(101, 4, LossKind::linear_regression, 8);
  const Coreset c = Coreset::from_set(set);
  for (const auto& q : testing::gaussian_queries(10, 4, 9))
    CHECK(total_cost(c, kLinreg, q) == total_cost(set, kLinreg, q));
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum({}) == 0.0);
  // Large cancellation-prone input: pairwise stays within a few ulps of the exact sum.
  std::vector<double> w(1 << 16, 1.0 / 3.0);
  CHECK(std::abs(pairwise_sum(w) - 65536.0 / 3.0) < 1e-10);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, "a") == derive_seed(1, "a"));
  CHECK(derive_seed(1, "a") != derive_seed(1, "b"));
  CHECK(derive_seed(1, "a") != derive_seed(2, "a"));
}

TEST_CASE("mean_ratio_deviation filters the floor") {
  const std::vector<double> full{2.0, 0.0, 4.0};
  const std::vector<double> core{3.0, 1.0, 4.0};
  const auto r = mean_ratio_deviation(full, core);
  CHECK(r.filtered == 1);
  CHECK(r.used == 2);
  CHECK(r.mean == doctest::Approx(0.25));
}

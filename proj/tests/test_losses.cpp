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
#include <vector>

#include "corelearn/errors.hpp"
#include "corelearn/losses.hpp"
#include "test_support.hpp"

using namespace corelearn;

using V = std::vector<double>;

TEST_CASE("linreg_loss examples") {
  CHECK(linreg_loss(V{1, 1}, 3, V{1, 2}) == 0.0);
  CHECK(linreg_loss(V{2}, 0, V{1}) == 4.0);
  CHECK(linreg_loss(V{1, 2}, 1, V{2, 0.5}) == 4.0);
  CHECK_THROWS_AS(linreg_loss(V{1, 2}, 1, V{2}), ContractError);
}

TEST_CASE("logreg_loss examples") {
  CHECK(logreg_loss(V{3, -2}, 1, V{0, 0}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(logreg_loss(V{3, -2}, -1, V{0, 0}) == doctest::Approx(0.693147).epsilon(1e-6));
  // Scalar oracle: ln(1 + e^-1).
  CHECK(logreg_loss(V{1}, 1, V{1}) == doctest::Approx(0.31326168751822286).epsilon(1e-14));
  CHECK_THROWS_AS(logreg_loss(V{1}, 0.5, V{1}), ContractError);
  CHECK_THROWS_AS(logreg_loss(V{1}, 0, V{1}), ContractError);

  double prev = logreg_loss(V{1}, 1, V{0});
  for (double z = 0.5; z < 40.0; z += 0.5) {
    const double cur = logreg_loss(V{1}, 1, V{z});
    CHECK(cur < prev);
    CHECK(cur >= 0.0);
    prev = cur;
  }
}

TEST_CASE("logreg_loss is stable at large scores") {
  for (double z : {1e3, -1e3, 1e6, -1e6}) {
    const double a = logreg_loss(V{1}, 1, V{z});
    const double b = logreg_loss(V{1}, -1, V{z});
    CHECK(std::isfinite(a));
    CHECK(std::isfinite(b));
    CHECK(a >= 0.0);
  }
  CHECK(logreg_loss(V{1}, -1, V{1e3}) == doctest::Approx(1e3));
}

TEST_CASE("loss_gradients examples") {
  const LossModel lin(LossKind::linear_regression);
  const LossModel log(LossKind::logistic_regression);
  const auto g = loss_gradients(lin, V{1}, 0, 1, V{1});
  CHECK(g.query == V{2});

  const auto exact = loss_gradients(lin, V{1, 1}, 3, 0.7, V{1, 2});
  CHECK(exact.point == V{0, 0});
  CHECK(exact.query == V{0, 0});
  CHECK(exact.label == 0.0);
  CHECK(exact.weight == 0.0);

  const auto lg = loss_gradients(log, V{1}, 1, 1, V{0});
  CHECK(lg.query[0] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("nonnegativity and sign symmetry") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const Vector p = testing::gaussian_vector(4, rng, 3.0);
    const Vector q = testing::gaussian_vector(4, rng, 3.0);
    const double b = testing::gaussian_vector(1, rng, 5.0)[0];
    const std::span<const double> ps{p.data(), 4}, qs{q.data(), 4};
    const Vector np = -p;
    CHECK(linreg_loss(ps, b, qs) >= 0.0);
    CHECK(linreg_loss(ps, b, qs) == linreg_loss({np.data(), 4}, -b, qs));
    CHECK(logreg_loss(ps, b >= 0 ? 1.0 : -1.0, qs) >= 0.0);
  }
}

namespace {

// Finite-difference check of every gradient of u * f(p, b, q). For the
// logistic label derivative the loss is extended to real b through softplus.
void check_fd(const LossModel& loss, std::uint64_t seed, int draws) {
  Rng rng(seed);
  const std::size_t d = 3;
  const std::size_t qd = loss.query_dim(d);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  int checked = 0;
  for (int t = 0; t < draws; ++t) {
    Vector p = testing::gaussian_vector(d, rng);
    Vector q = testing::gaussian_vector(qd, rng);
    double b = testing::gaussian_vector(1, rng, 2.0)[0];
    if (loss.kind() == LossKind::logistic_regression) b = b >= 0 ? 1.0 : -1.0;
    double u = weight(rng);

    auto value = [&] {
      double z = 0.0;
      for (std::size_t i = 0; i < d; ++i) z += p[i] * q[i];
      if (loss.intercept()) z += q[d];
      if (loss.kind() == LossKind::linear_regression) return u * (z - b) * (z - b);
      return u * std::log1p(std::exp(-b * z));
    };
    const auto g = loss_gradients(loss, {p.data(), d}, b, u, {q.data(), qd});
    for (std::size_t i = 0; i < d; ++i)
      CHECK(testing::close(g.point[i], testing::central_difference(value, p[i]), 1e-5, 1e-8));
    for (std::size_t i = 0; i < qd; ++i)
      CHECK(testing::close(g.query[i], testing::central_difference(value, q[i]), 1e-5, 1e-8));
    CHECK(testing::close(g.label, testing::central_difference(value, b), 1e-5, 1e-8));
    CHECK(testing::close(g.weight, testing::central_difference(value, u), 1e-5, 1e-8));
    ++checked;
  }
  CHECK(checked == draws);
}

}  // namespace

TEST_CASE("gradients agree with central differences") {
  check_fd(LossModel(LossKind::linear_regression), 1, 100);
  check_fd(LossModel(LossKind::linear_regression, true), 2, 100);
  check_fd(LossModel(LossKind::logistic_regression), 3, 100);
  check_fd(LossModel(LossKind::logistic_regression, true), 4, 100);
}

TEST_CASE("intercept appends a bias coordinate") {
  const LossModel lin(LossKind::linear_regression, true);
  CHECK(lin.query_dim(2) == 3);
  CHECK(lin.value(V{1, 2}, 6, V{1, 1, 3}) == 0.0);
  CHECK_THROWS_AS(lin.value(V{1, 2}, 6, V{1, 1}), ContractError);
}

TEST_CASE("loss kind names round-trip") {
  for (auto k : {LossKind::linear_regression, LossKind::logistic_regression})
    CHECK(parse_loss_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_loss_kind("svm"), ContractError);
}

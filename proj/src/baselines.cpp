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

#include "corelearn/baselines.hpp"

#include <cmath>
#include <random>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

Coreset uniform_coreset(const WeightedLabeledSet& set, std::size_t m, std::uint64_t seed) {
  const std::size_t n = set.size();
  if (m < 1 || m > n) throw ContractError("uniform_coreset: need 1 <= m <= n");
  Rng rng = make_rng(seed, "uniform_coreset");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const double scale = static_cast<double>(n) / static_cast<double>(m);
  Coreset c{RowMatrix(static_cast<Eigen::Index>(m), set.points().cols()),
            Vector(static_cast<Eigen::Index>(m)), Vector(static_cast<Eigen::Index>(m))};
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
    const auto i = static_cast<Eigen::Index>(pick(rng));
    c.points.row(j) = set.points().row(i);
    c.labels[j] = set.labels()[i];
    c.weights[j] = set.weights()[i] * scale;
  }
  return c;
}

namespace {

RowMatrix design_matrix(const RowMatrix& points, const LossModel& loss) {
  if (!loss.intercept()) return points;
  RowMatrix x(points.rows(), points.cols() + 1);
  x.leftCols(points.cols()) = points;
  x.col(points.cols()).setOnes();
  return x;
}

}  // namespace

LeverageScores leverage_scores(const WeightedLabeledSet& set, const LossModel& loss) {
  const RowMatrix x = design_matrix(set.points(), loss);
  Eigen::MatrixXd a(x.rows(), x.cols() + 1);
  const Vector root_w = set.weights().cwiseSqrt();
  a.leftCols(x.cols()) = root_w.asDiagonal() * x;
  a.col(x.cols()) = root_w.cwiseProduct(set.labels());

  LeverageScores out;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  out.rank = static_cast<std::size_t>(qr.rank());
  if (qr.rank() == a.cols()) {
    // Rows of the thin orthonormal factor carry the leverage.
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
    out.scores = q.rowwise().squaredNorm();
  } else {
    // Ridge-regularized hat diagonal a_i^T (A^T A + r I)^{-1} a_i.
    out.regularized = true;
    const double ridge = 1e-10 * std::max(1.0, a.squaredNorm());
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += ridge;
    const Eigen::MatrixXd solved = gram.ldlt().solve(a.transpose());
    out.scores = (a.array() * solved.transpose().array()).rowwise().sum();
  }
  out.scores = out.scores.cwiseMax(0.0).cwiseMin(1.0);
  return out;
}

LeverageCoreset leverage_coreset(const WeightedLabeledSet& set, const LossModel& loss,
                                 std::size_t m, std::uint64_t seed) {
  if (loss.kind() != LossKind::linear_regression)
    throw ContractError("leverage_coreset: linear regression only");
  if (m < 1) throw ContractError("leverage_coreset: m must be >= 1");
  if (loss.query_dim(set.dim()) > set.size())
    throw ContractError("leverage_coreset: more features than points");
  LeverageCoreset out;
  const LeverageScores lev = leverage_scores(set, loss);
  if (lev.regularized)
    out.warnings.emplace_back("rank-deficient design matrix: ridge-regularized leverage used");
  const double total = lev.scores.sum();
  if (!(total > 0.0)) throw DegenerateInputError("leverage_coreset: all leverage scores are zero");
  const Vector prob = lev.scores / total;

  Rng rng = make_rng(seed, "leverage_coreset");
  std::discrete_distribution<Eigen::Index> pick(prob.data(), prob.data() + prob.size());
  Coreset& c = out.coreset;
  c.points.resize(static_cast<Eigen::Index>(m), set.points().cols());
  c.weights.resize(static_cast<Eigen::Index>(m));
  c.labels.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(m); ++j) {
    const Eigen::Index i = pick(rng);
    c.points.row(j) = set.points().row(i);
    c.labels[j] = set.labels()[i];
    c.weights[j] = set.weights()[i] / (static_cast<double>(m) * prob[i]);
  }
  return out;
}

SolveMethod default_solve_method(const LossModel& loss) {
  return loss.kind() == LossKind::linear_regression ? SolveMethod::closed_form
                                                    : SolveMethod::gradient_descent;
}

namespace {

SolveResult solve_normal_equations(const RowMatrix& points, const Vector& weights,
                                   const Vector& labels, const LossModel& loss,
                                   const SolveOptions& options) {
  const RowMatrix x = design_matrix(points, loss);
  Eigen::MatrixXd gram = x.transpose() * weights.asDiagonal() * x;
  const Vector rhs = x.transpose() * weights.cwiseProduct(labels);
  SolveResult out;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  Vector q;
  if (lu.isInvertible()) {
    q = gram.ldlt().solve(rhs);
  } else {
    out.ridge_fallback = true;
    out.warnings.emplace_back("singular normal matrix: ridge fallback used");
    gram.diagonal().array() += options.ridge;
    q = gram.ldlt().solve(rhs);
  }
  out.optimum = Query(q);
  out.gradient_norm = (2.0 * (gram * q - rhs)).norm();
  return out;
}

// Lipschitz constant of the gradient of f(S, v, .): the loss's curvature
// bound times the largest eigenvalue of sum_i v_i x_i x_i^T.
double smoothness(const RowMatrix& points, const Vector& weights, const LossModel& loss) {
  const RowMatrix x = design_matrix(points, loss);
  const Eigen::MatrixXd gram = x.transpose() * weights.asDiagonal() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  const double curvature = loss.kind() == LossKind::linear_regression ? 2.0 : 0.25;
  return curvature * top;
}

SolveResult solve_gradient_descent(const RowMatrix& points, const Vector& weights,
                                   const Vector& labels, const LossModel& loss,
                                   const SolveOptions& options) {
  SolveResult out;
  const double lipschitz = smoothness(points, weights, loss);
  const auto qdim = static_cast<Eigen::Index>(loss.query_dim(static_cast<std::size_t>(points.cols())));
  Query q(Vector::Zero(qdim));
  if (!(lipschitz > 0.0)) {
    out.optimum = q;
    out.gradient_norm = 0.0;
    return out;
  }
  // Fixed step 1/L on an L-smooth convex objective decreases the cost
  // monotonically, so the last iterate is also the best one.
  const double step = 1.0 / lipschitz;
  out.converged = false;
  std::size_t it = 0;
  double gnorm = 0.0;
  for (; it < options.max_iterations; ++it) {
    const Vector g = cost_gradient(points, weights, labels, loss, q);
    gnorm = g.norm();
    if (gnorm <= options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    q.params -= step * g;
  }
  out.iterations = it;
  out.gradient_norm = gnorm;
  out.optimum = q;
  if (!out.converged)
    out.warnings.push_back("gradient descent did not converge in " +
                           std::to_string(options.max_iterations) +
                           " iterations (gradient norm " + std::to_string(gnorm) + ")");
  return out;
}

}  // namespace

SolveResult solve_optimal(const RowMatrix& points, const Vector& weights, const Vector& labels,
                          const LossModel& loss, SolveMethod method, const SolveOptions& options) {
  if (weights.size() != points.rows() || labels.size() != points.rows())
    throw ContractError("solve_optimal: weights and labels must have one entry per point");
  if (method == SolveMethod::closed_form) {
    if (loss.kind() != LossKind::linear_regression)
      throw ContractError("solve_optimal: closed form exists only for linear regression");
    return solve_normal_equations(points, weights, labels, loss, options);
  }
  return solve_gradient_descent(points, weights, labels, loss, options);
}

SolveResult solve_optimal(const WeightedLabeledSet& set, const LossModel& loss, SolveMethod method,
                          const SolveOptions& options) {
  return solve_optimal(set.points(), set.weights(), set.labels(), loss, method, options);
}

SolveResult solve_optimal(const Coreset& set, const LossModel& loss, SolveMethod method,
                          const SolveOptions& options) {
  return solve_optimal(set.points, set.weights, set.labels, loss, method, options);
}

}  // namespace corelearn

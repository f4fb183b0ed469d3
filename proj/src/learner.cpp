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

#include "corelearn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

std::string_view to_string(Algorithm a) {
  return a == Algorithm::average ? "average" : "practical";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "average") return Algorithm::average;
  if (name == "practical") return Algorithm::practical;
  throw ContractError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(InitStrategy s) {
  return s == InitStrategy::subsample ? "subsample" : "gaussian";
}

InitStrategy parse_init_strategy(std::string_view name) {
  if (name == "subsample") return InitStrategy::subsample;
  if (name == "gaussian") return InitStrategy::gaussian;
  throw ContractError("unknown init strategy '" + std::string(name) + "'");
}

void TrainConfig::validate() const {
  if (coreset_size < 1) throw ContractError("coreset_size must be >= 1");
  if (epochs < 1) throw ContractError("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ContractError("learning_rate must be > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ContractError("lambda must be >= 0");
  if (batch_size < 1) throw ContractError("batch_size must be >= 1");
  if (!(clip_norm > 0.0)) throw ContractError("clip_norm must be > 0");
}

TrainConfig TrainConfig::defaults_for(LossKind kind) {
  TrainConfig cfg;
  if (kind == LossKind::linear_regression) {
    cfg.epochs = 10;
    cfg.batch_size = 25;
    cfg.learning_rate = 0.01;
    cfg.lambda = 1.0;
  } else {
    cfg.epochs = 1000;
    cfg.batch_size = 100;
    cfg.learning_rate = 0.001;
    cfg.learn_weights = false;
    cfg.learn_labels = false;
  }
  return cfg;
}

void adam_update(AdamMoments& moments, std::span<double> params, std::span<const double> grads,
                 double learning_rate, std::int64_t step, const AdamHyper& hyper) {
  if (params.size() != grads.size() ||
      static_cast<std::size_t>(moments.first.size()) != params.size() ||
      static_cast<std::size_t>(moments.second.size()) != params.size())
    throw ContractError("adam_update: parameter, gradient and moment shapes differ");
  if (step < 1) throw ContractError("adam_update: step index is 1-based");
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    moments.first[k] = hyper.beta1 * moments.first[k] + (1.0 - hyper.beta1) * grads[i];
    moments.second[k] = hyper.beta2 * moments.second[k] + (1.0 - hyper.beta2) * grads[i] * grads[i];
    const double m_hat = moments.first[k] / c1;
    const double v_hat = moments.second[k] / c2;
    params[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

OptimizerState OptimizerState::for_coreset(const Coreset& c, AdamHyper hyper) {
  OptimizerState s;
  s.hyper = hyper;
  s.points = AdamMoments(static_cast<std::size_t>(c.points.size()));
  s.labels = AdamMoments(c.size());
  s.weights = AdamMoments(c.size());
  return s;
}

CoresetGradient CoresetGradient::zeros(std::size_t m, std::size_t d) {
  return {RowMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d)),
          Vector::Zero(static_cast<Eigen::Index>(m)), Vector::Zero(static_cast<Eigen::Index>(m))};
}

double CoresetGradient::norm() const {
  return std::sqrt(points.squaredNorm() + labels.squaredNorm() + weights.squaredNorm());
}

void CoresetGradient::scale(double s) {
  points *= s;
  labels *= s;
  weights *= s;
}

namespace {

std::span<double> as_span(auto& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<const double> as_cspan(const auto& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

void adam_step(OptimizerState& state, Coreset& params, const CoresetGradient& grads,
               double learning_rate, LearnMask mask) {
  ++state.step;
  if (mask.points)
    adam_update(state.points, as_span(params.points), as_cspan(grads.points), learning_rate,
                state.step, state.hyper);
  if (mask.labels)
    adam_update(state.labels, as_span(params.labels), as_cspan(grads.labels), learning_rate,
                state.step, state.hyper);
  if (mask.weights) {
    adam_update(state.weights, as_span(params.weights), as_cspan(grads.weights), learning_rate,
                state.step, state.hyper);
    params.weights = project_weights(params.weights);
  }
}

Vector project_weights(const Vector& u) { return u.cwiseMax(0.0); }

Coreset init_coreset(const WeightedLabeledSet& set, std::size_t m, std::uint64_t seed,
                     InitStrategy strategy, const LossModel& loss) {
  if (m < 1) throw ContractError("init_coreset: m must be >= 1");
  const std::size_t n = set.size();
  const std::size_t d = set.dim();
  if (n == 0) throw ContractError("init_coreset: empty input set");
  Rng rng = make_rng(seed, "init_coreset");
  Coreset c{RowMatrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d)),
            Vector::Constant(static_cast<Eigen::Index>(m), 1.0 / static_cast<double>(m)),
            Vector(static_cast<Eigen::Index>(m))};

  if (strategy == InitStrategy::subsample) {
    std::vector<std::size_t> order(n);
    std::size_t filled = 0;
    while (filled < m) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t i = 0; i < n && filled < m; ++i, ++filled) {
        c.points.row(static_cast<Eigen::Index>(filled)) =
            set.points().row(static_cast<Eigen::Index>(order[i]));
        c.labels[static_cast<Eigen::Index>(filled)] = set.labels()[static_cast<Eigen::Index>(order[i])];
      }
    }
    return c;
  }

  const double wsum = set.weight_sum();
  const Vector weights = wsum > 0.0 ? Vector(set.weights() / wsum)
                                    : Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / n);
  const Eigen::RowVectorXd mean = weights.transpose() * set.points();
  const Eigen::RowVectorXd var =
      weights.transpose() * (set.points().rowwise() - mean).array().square().matrix();
  const double label_mean = weights.dot(set.labels());
  const double label_sd =
      std::sqrt(weights.dot((set.labels().array() - label_mean).square().matrix()));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      c.points(static_cast<Eigen::Index>(i), jj) = mean[jj] + std::sqrt(var[jj]) * normal(rng);
    }
    c.labels[static_cast<Eigen::Index>(i)] =
        loss.kind() == LossKind::logistic_regression ? (coin(rng) ? 1.0 : -1.0)
                                                     : label_mean + label_sd * normal(rng);
  }
  return c;
}

namespace {

// Scratch for one coreset evaluation at one query.
struct QueryEval {
  std::vector<double> scores;
  std::vector<double> terms;
  double cost = 0.0;
};

// Same per-term expression and summation as total_cost, so C == P reproduces
// f(P, w, q) bit for bit.
void evaluate_coreset(const Coreset& c, const LossModel& loss, const Query& q, QueryEval& out) {
  const std::size_t m = c.size();
  out.scores.resize(m);
  out.terms.resize(m);
  const auto qs = q.span();
  for (std::size_t j = 0; j < m; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.scores[j] = loss.score(c.point(j), qs);
    out.terms[j] = c.weights[jj] * loss.value_at_score(out.scores[j], c.labels[jj]);
  }
  out.cost = pairwise_sum(out.terms);
}

// grad += coef * d f(C, u, q) / d(C, y, u)
void accumulate_gradient(const Coreset& c, const LossModel& loss, const Query& q,
                         const QueryEval& eval, double coef, CoresetGradient& grad) {
  if (coef == 0.0) return;
  const std::size_t m = c.size();
  const std::size_t d = c.dim();
  for (std::size_t j = 0; j < m; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double z = eval.scores[j];
    const double y = c.labels[jj];
    const double u = c.weights[jj];
    const double g = coef * u * loss.dscore(z, y);
    double* row = grad.points.data() + j * d;
    for (std::size_t k = 0; k < d; ++k) row[k] += g * q.params[static_cast<Eigen::Index>(k)];
    grad.labels[jj] += coef * u * loss.dlabel(z, y);
    grad.weights[jj] += coef * loss.value_at_score(z, y);
  }
}

void add_weight_penalty(const Coreset& c, double full_weight_sum, double lambda,
                        ObjectiveEval& out) {
  const double gap = full_weight_sum - c.weight_sum();
  out.value += lambda * std::abs(gap);
  const double g = -lambda * sign_of(gap);
  if (g != 0.0) out.gradient.weights.array() += g;
}

void check_queries(const Coreset& c, const LossModel& loss, std::span<const Query> queries) {
  const std::size_t qdim = loss.query_dim(c.dim());
  for (const auto& q : queries)
    if (q.dim() != qdim) throw ContractError("query dimension does not match the coreset");
  for (Eigen::Index j = 0; j < c.labels.size(); ++j) loss.check_label(c.labels[j]);
}

}  // namespace

ObjectiveEval average_objective(const Coreset& c, std::span<const Query> queries,
                                const LossModel& loss, double full_mean,
                                double full_weight_sum, double lambda) {
  if (queries.empty()) throw ContractError("average_objective: no queries");
  check_queries(c, loss, queries);
  const std::size_t k = queries.size();
  std::vector<QueryEval> evals(k);
  std::vector<double> costs(k);
  for (std::size_t i = 0; i < k; ++i) {
    evaluate_coreset(c, loss, queries[i], evals[i]);
    costs[i] = evals[i].cost;
  }
  const double coreset_mean = pairwise_sum(costs) / static_cast<double>(k);
  const double diff = full_mean - coreset_mean;

  ObjectiveEval out{std::abs(diff), CoresetGradient::zeros(c.size(), c.dim())};
  const double coef = -sign_of(diff) / static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i)
    accumulate_gradient(c, loss, queries[i], evals[i], coef, out.gradient);
  add_weight_penalty(c, full_weight_sum, lambda, out);
  return out;
}

ObjectiveEval practical_objective(const Coreset& c, std::span<const Query> batch,
                                  std::span<const double> full_costs, const LossModel& loss,
                                  double full_weight_sum, double lambda) {
  if (batch.size() != full_costs.size())
    throw ContractError("practical_objective: one full cost per query required");
  check_queries(c, loss, batch);
  ObjectiveEval out{0.0, CoresetGradient::zeros(c.size(), c.dim())};
  QueryEval eval;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double fp = full_costs[i];
    if (!(fp > kRatioFloor))
      throw ContractError("practical_objective: full cost at or below the ratio floor");
    evaluate_coreset(c, loss, batch[i], eval);
    const double dev = 1.0 - eval.cost / fp;
    out.value += std::abs(dev);
    accumulate_gradient(c, loss, batch[i], eval, -sign_of(dev) / fp, out.gradient);
  }
  add_weight_penalty(c, full_weight_sum, lambda, out);
  return out;
}

double average_objective_value(const WeightedLabeledSet& set, const Coreset& c,
                               std::span<const Query> queries, const LossModel& loss,
                               double lambda) {
  const auto full = total_costs(set, loss, queries);
  const double full_mean = pairwise_sum(full) / static_cast<double>(queries.size());
  return average_objective(c, queries, loss, full_mean, set.weight_sum(), lambda).value;
}

double practical_objective_value(const WeightedLabeledSet& set, const Coreset& c,
                                 std::span<const Query> queries, const LossModel& loss,
                                 double lambda) {
  const auto full = total_costs(set, loss, queries);
  return practical_objective(c, queries, full, loss, set.weight_sum(), lambda).value;
}

namespace {

constexpr double kNormalizedTolerance = 1e-9;

struct TrainingSetup {
  Coreset coreset;
  LearnMask mask;
  std::vector<double> val_full_costs;
};

TrainingSetup prepare(const WeightedLabeledSet& set, std::span<const Query> train,
                      std::span<const Query> validation, const LossModel& loss,
                      const TrainConfig& cfg, const LearnOptions& options, TrainReport& report) {
  cfg.validate();
  if (train.empty()) throw ContractError("no training queries");
  TrainingSetup s;
  s.coreset = options.initial ? *options.initial
                              : init_coreset(set, cfg.coreset_size, cfg.seed, cfg.init, loss);
  s.coreset.validate();
  if (s.coreset.dim() != set.dim())
    throw ContractError("initial coreset dimension does not match the input");
  check_queries(s.coreset, loss, train);
  s.mask.weights = cfg.learn_weights;
  s.mask.labels = cfg.learn_labels && loss.kind() == LossKind::linear_regression;
  if (cfg.learn_labels && !s.mask.labels)
    report.warnings.emplace_back("labels are not learned for logistic regression");
  if (!validation.empty()) s.val_full_costs = total_costs(set, loss, validation);
  return s;
}

// Coreset costs during training; an overflow is a training failure, not bad input.
std::vector<double> training_costs(const Coreset& c, const LossModel& loss,
                                   std::span<const Query> queries, std::size_t epoch,
                                   std::int64_t steps) {
  try {
    return total_costs(c, loss, queries);
  } catch (const NumericError& e) {
    throw TrainingError(std::string("non-finite coreset cost: ") + e.what(), epoch,
                        static_cast<std::size_t>(steps));
  }
}

void clip(CoresetGradient& g, double max_norm) {
  const double n = g.norm();
  if (n > max_norm) g.scale(max_norm / n);
}

bool gradient_finite(const CoresetGradient& g) {
  return g.points.allFinite() && g.labels.allFinite() && g.weights.allFinite();
}

// Per-epoch bookkeeping shared by both loops.
class EpochTracker {
 public:
  EpochTracker(const TrainConfig& cfg, std::span<const Query> validation,
               const std::vector<double>& val_full_costs, const LossModel& loss,
               TrainReport& report)
      : early_stop_(cfg.early_stop_on_validation && !validation.empty()),
        validation_(validation),
        val_full_costs_(val_full_costs),
        loss_(loss),
        report_(report) {}

  void record(std::size_t epoch, double train_loss, const Coreset& c) {
    if (!std::isfinite(train_loss))
      throw TrainingError("non-finite training loss", epoch, static_cast<std::size_t>(report_.steps));
    report_.train_loss.push_back(train_loss);
    double key = train_loss;
    if (!validation_.empty()) {
      const auto costs = training_costs(c, loss_, validation_, epoch, report_.steps);
      const double v = mean_ratio_deviation(val_full_costs_, costs).mean;
      report_.val_err_avg.push_back(v);
      if (early_stop_) key = v;
    }
    if (report_.train_loss.size() == 1 || key < best_key_) {
      best_key_ = key;
      report_.best_epoch = epoch;
      if (early_stop_) best_ = c;
    }
  }

  Coreset result(const Coreset& last) const { return early_stop_ ? best_ : last; }

 private:
  bool early_stop_;
  std::span<const Query> validation_;
  const std::vector<double>& val_full_costs_;
  const LossModel& loss_;
  TrainReport& report_;
  double best_key_ = 0.0;
  Coreset best_;
};

}  // namespace

LearnResult autocl_average(const WeightedLabeledSet& set, std::span<const Query> train,
                           const LossModel& loss, const TrainConfig& cfg,
                           const LearnOptions& options) {
  TrainReport report;
  TrainingSetup s = prepare(set, train, options.validation, loss, cfg, options, report);
  const double full_weight_sum = set.weight_sum();
  if (std::abs(full_weight_sum - 1.0) > kNormalizedTolerance)
    throw ContractError("autocl_average expects normalized input weights");
  const auto full = total_costs(set, loss, train);
  const double full_mean = pairwise_sum(full) / static_cast<double>(train.size());

  Coreset& c = s.coreset;
  OptimizerState state = OptimizerState::for_coreset(c, cfg.adam);
  EpochTracker tracker(cfg, options.validation, s.val_full_costs, loss, report);

  ObjectiveEval eval = average_objective(c, train, loss, full_mean, full_weight_sum, cfg.lambda);
  report.initial_loss = eval.value;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (!std::isfinite(eval.value) || !gradient_finite(eval.gradient))
      throw TrainingError("non-finite objective", epoch, static_cast<std::size_t>(report.steps));
    clip(eval.gradient, cfg.clip_norm);
    adam_step(state, c, eval.gradient, cfg.learning_rate, s.mask);
    ++report.steps;
    eval = average_objective(c, train, loss, full_mean, full_weight_sum, cfg.lambda);
    tracker.record(epoch, eval.value, c);
  }
  LearnResult out{tracker.result(c), std::move(report)};
  out.report.final_coreset = out.coreset;
  return out;
}

LearnResult autocl_practical(const WeightedLabeledSet& set, std::span<const Query> train,
                             std::span<const Query> validation, const LossModel& loss,
                             const TrainConfig& cfg, const LearnOptions& options) {
  TrainReport report;
  TrainingSetup s = prepare(set, train, validation, loss, cfg, options, report);
  if (train.size() < cfg.batch_size)
    throw ContractError("autocl_practical: fewer training queries than batch_size");
  const double full_weight_sum = set.weight_sum();

  // Queries whose full-data cost is at the ratio floor have an undefined ratio.
  std::vector<Query> accepted;
  std::vector<double> accepted_costs;
  accepted.reserve(train.size());
  for (const auto& q : train) {
    const double fp = total_cost(set, loss, q);
    if (fp > kRatioFloor) {
      accepted.push_back(q);
      accepted_costs.push_back(fp);
    } else {
      ++report.rejected_queries;
    }
  }
  if (report.rejected_queries > 0)
    report.warnings.push_back(std::to_string(report.rejected_queries) +
                              " training queries rejected: full-data cost below ratio floor");
  if (accepted.empty()) throw ContractError("autocl_practical: every training query was rejected");

  Coreset& c = s.coreset;
  OptimizerState state = OptimizerState::for_coreset(c, cfg.adam);
  EpochTracker tracker(cfg, validation, s.val_full_costs, loss, report);
  // Per-epoch training loss: mean ratio deviation over all accepted queries
  // plus the weight-sum penalty.
  auto epoch_loss = [&](const Coreset& cur, std::size_t epoch) {
    const auto costs = training_costs(cur, loss, accepted, epoch, report.steps);
    const double dev = mean_ratio_deviation(accepted_costs, costs).mean;
    return dev + cfg.lambda * std::abs(full_weight_sum - cur.weight_sum());
  };
  report.initial_loss = epoch_loss(c, 0);

  Rng rng = make_rng(cfg.seed, "practical_batches");
  std::vector<std::size_t> order(accepted.size());
  std::vector<Query> batch;
  std::vector<double> batch_costs;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      batch_costs.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(accepted[order[i]]);
        batch_costs.push_back(accepted_costs[order[i]]);
      }
      ObjectiveEval eval =
          practical_objective(c, batch, batch_costs, loss, full_weight_sum, cfg.lambda);
      if (!std::isfinite(eval.value) || !gradient_finite(eval.gradient))
        throw TrainingError("non-finite objective", epoch, static_cast<std::size_t>(report.steps));
      clip(eval.gradient, cfg.clip_norm);
      adam_step(state, c, eval.gradient, cfg.learning_rate, s.mask);
      ++report.steps;
    }
    tracker.record(epoch, epoch_loss(c, epoch), c);
  }
  LearnResult out{tracker.result(c), std::move(report)};
  out.report.final_coreset = out.coreset;
  return out;
}

LearnResult learn_coreset(const WeightedLabeledSet& set, std::span<const Query> train,
                          std::span<const Query> validation, const LossModel& loss,
                          const TrainConfig& cfg, const LearnOptions& options) {
  if (cfg.algorithm == Algorithm::average) {
    LearnOptions opts = options;
    opts.validation = validation;
    return autocl_average(set, train, loss, cfg, opts);
  }
  return autocl_practical(set, train, validation, loss, cfg, options);
}

}  // namespace corelearn

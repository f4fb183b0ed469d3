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

// corelearn command-line entry point.
//
//   corelearn synth --task linreg --n 5000 --d 3 --out data.csv
//   corelearn gen-queries --data data.csv --out queries.csv
//   corelearn learn --data data.csv --queries train.csv --size 50 --out coreset.csv
//   corelearn bounds --eps 0.1 --delta 0.05 --M 1
//   corelearn experiment --config experiment.json --out-dir results
//
// Exit status: 0 success, 1 invalid input or configuration, 2 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "corelearn/baselines.hpp"
#include "corelearn/dataset.hpp"
#include "corelearn/errors.hpp"
#include "corelearn/eval.hpp"
#include "corelearn/experiment.hpp"
#include "corelearn/learner.hpp"
#include "corelearn/queries.hpp"
#include "corelearn/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace corelearn;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

struct DataOptions {
  std::string path;
  std::vector<std::string> features;
  std::string label;
  std::string weight;
  bool no_header = false;
  bool binary_labels = false;
  bool standardize = false;
  std::string loss = "linear_regression";
  bool intercept = false;

  void add_to(CLI::App* cmd, bool required = true) {
    auto* d = cmd->add_option("--data", path, "Dataset CSV");
    if (required) d->required();
    cmd->add_option("--features", features, "Feature columns (names, or indices with --no-header)")
        ->delimiter(',');
    cmd->add_option("--label", label, "Label column");
    cmd->add_option("--weight", weight, "Weight column");
    cmd->add_flag("--no-header", no_header, "CSV has no header row");
    cmd->add_flag("--binary-labels", binary_labels, "Map {0,1} labels to {-1,+1}");
    cmd->add_flag("--standardize", standardize, "Standardize features");
    cmd->add_option("--loss", loss, "linear_regression | logistic_regression");
    cmd->add_flag("--intercept", intercept, "Append a constant feature");
  }

  LossModel loss_model() const { return LossModel(parse_loss_kind(loss), intercept); }

  // Without --features the file is assumed to be one written by synth.
  CsvSchema schema() const {
    CsvSchema s;
    if (features.empty()) {
      std::ifstream in(path);
      std::string header;
      if (!in || !std::getline(in, header)) throw ParseError("cannot read " + path, 0);
      std::size_t d = 0;
      while (header.find("x" + std::to_string(d) + ",") != std::string::npos) ++d;
      if (d == 0) throw ConfigError("--features is required for this file");
      s = written_dataset_schema(d);
    } else {
      s.feature_columns = features;
      s.label_column = label.empty() ? "label" : label;
      if (!weight.empty()) s.weight_column = weight;
      s.has_header = !no_header;
    }
    if (!label.empty()) s.label_column = label;
    if (binary_labels) s.label_mapping = LabelMapping::binary_pm1;
    s.standardize = standardize;
    return s;
  }

  WeightedLabeledSet load() const { return load_dataset(fs::path(path), schema()).set; }
};

void write_json(const std::string& path, const json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path + " for writing", 0);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned coresets for average-loss approximation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // synth
  SynthSpec synth;
  std::string synth_task = "linear_regression";
  std::string synth_out;
  auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  cmd_synth->add_option("--task", synth_task, "linear_regression | logistic_regression");
  cmd_synth->add_option("--n", synth.n, "Rows")->capture_default_str();
  cmd_synth->add_option("--d", synth.d, "Features")->capture_default_str();
  cmd_synth->add_option("--noise", synth.noise, "Noise level")->capture_default_str();
  cmd_synth->add_option("--seed", synth.seed, "Seed");
  cmd_synth->add_option("--out", synth_out, "Output CSV")->required();

  // gen-queries
  DataOptions gq_data;
  TrajectoryOptions traj;
  std::string gq_out;
  std::vector<std::size_t> gq_split;
  auto* cmd_gq = app.add_subcommand("gen-queries", "Sample queries from gradient-descent trajectories");
  gq_data.add_to(cmd_gq);
  cmd_gq->add_option("--starts", traj.n_starts, "Random starting points")->capture_default_str();
  cmd_gq->add_option("--steps", traj.steps_per_start, "Steps per start")->capture_default_str();
  cmd_gq->add_option("--gd-lr", traj.gd_lr, "Step size")->capture_default_str();
  cmd_gq->add_option("--init-scale", traj.init_scale, "Start scale")->capture_default_str();
  cmd_gq->add_option("--seed", traj.seed, "Seed");
  cmd_gq->add_option("--out", gq_out, "Output CSV, or prefix with --split")->required();
  cmd_gq->add_option("--split", gq_split, "train,validation,test sizes")->delimiter(',')->expected(3);

  // learn
  DataOptions ln_data;
  std::string ln_queries, ln_val, ln_out, ln_report, ln_algorithm, ln_init;
  std::optional<std::size_t> ln_epochs, ln_batch;
  std::optional<double> ln_lr, ln_lambda;
  std::size_t ln_size = 50;
  std::uint64_t ln_seed = 0;
  bool ln_freeze_weights = false, ln_learn_labels = false, ln_early = false;
  auto* cmd_learn = app.add_subcommand("learn", "Learn one coreset");
  ln_data.add_to(cmd_learn);
  cmd_learn->add_option("--queries", ln_queries, "Training query CSV")->required();
  cmd_learn->add_option("--validation", ln_val, "Validation query CSV");
  cmd_learn->add_option("--size", ln_size, "Coreset size")->capture_default_str();
  cmd_learn->add_option("--epochs", ln_epochs, "Epochs (task default if omitted)");
  cmd_learn->add_option("--lr", ln_lr, "Adam learning rate");
  cmd_learn->add_option("--lambda", ln_lambda, "Weight-sum penalty");
  cmd_learn->add_option("--batch", ln_batch, "Minibatch size");
  cmd_learn->add_option("--algorithm", ln_algorithm, "practical | average");
  cmd_learn->add_option("--init", ln_init, "subsample | gaussian");
  cmd_learn->add_flag("--freeze-weights", ln_freeze_weights, "Keep weights at 1/m");
  cmd_learn->add_flag("--learn-labels", ln_learn_labels, "Learn labels (linear regression)");
  cmd_learn->add_flag("--early-stop", ln_early, "Return the best validation epoch");
  cmd_learn->add_option("--seed", ln_seed, "Seed");
  cmd_learn->add_option("--out", ln_out, "Output coreset CSV")->required();
  cmd_learn->add_option("--report", ln_report, "Training report JSON");

  // baseline
  DataOptions bl_data;
  std::string bl_method = "uniform", bl_out;
  std::size_t bl_size = 50;
  std::uint64_t bl_seed = 0;
  auto* cmd_bl = app.add_subcommand("baseline", "Build a sampling-based coreset");
  bl_data.add_to(cmd_bl);
  cmd_bl->add_option("--method", bl_method, "uniform | leverage")->capture_default_str();
  cmd_bl->add_option("--size", bl_size, "Coreset size")->capture_default_str();
  cmd_bl->add_option("--seed", bl_seed, "Seed");
  cmd_bl->add_option("--out", bl_out, "Output coreset CSV")->required();

  // eval
  DataOptions ev_data;
  std::string ev_coreset, ev_queries, ev_out;
  auto* cmd_eval = app.add_subcommand("eval", "Score a coreset with Err_opt and Err_avg");
  ev_data.add_to(cmd_eval);
  cmd_eval->add_option("--coreset", ev_coreset, "Coreset CSV")->required();
  cmd_eval->add_option("--queries", ev_queries, "Test query CSV")->required();
  cmd_eval->add_option("--out", ev_out, "Output JSON (stdout if omitted)");

  // bounds
  std::optional<double> bd_M;
  double bd_eps = 0.1, bd_delta = 0.05;
  bool bd_estimate = false;
  std::string bd_queries, bd_csv;
  DataOptions bd_data;
  auto* cmd_bounds = app.add_subcommand("bounds", "Sample sizes for the mean-of-losses bounds");
  cmd_bounds->add_option("--eps", bd_eps, "Accuracy")->capture_default_str();
  cmd_bounds->add_option("--delta", bd_delta, "Failure probability")->capture_default_str();
  auto* opt_M = cmd_bounds->add_option("--M", bd_M, "Loss bound");
  auto* opt_est = cmd_bounds->add_flag("--estimate-M", bd_estimate, "Estimate M from data and queries");
  opt_M->excludes(opt_est);
  bd_data.add_to(cmd_bounds, false);
  cmd_bounds->add_option("--queries", bd_queries, "Query CSV for --estimate-M");
  cmd_bounds->add_option("--csv", bd_csv, "Also write the table as CSV");

  // verify
  DataOptions vf_data;
  std::string vf_queries, vf_coreset, vf_out;
  double vf_eps = 0.1, vf_delta = 0.05;
  std::size_t vf_trials = 1000;
  std::uint64_t vf_seed = 0;
  auto* cmd_verify = app.add_subcommand(
      "verify", "Check the sampling bounds on the finite universe given by --queries");
  vf_data.add_to(cmd_verify);
  cmd_verify->add_option("--queries", vf_queries, "Query universe CSV (uniform measure)")->required();
  cmd_verify->add_option("--coreset", vf_coreset, "Coreset CSV for the coreset checks");
  cmd_verify->add_option("--eps", vf_eps, "Accuracy")->capture_default_str();
  cmd_verify->add_option("--delta", vf_delta, "Failure probability")->capture_default_str();
  cmd_verify->add_option("--trials", vf_trials, "Monte-Carlo trials")->capture_default_str();
  cmd_verify->add_option("--seed", vf_seed, "Seed");
  cmd_verify->add_option("--out", vf_out, "Output JSON (stdout if omitted)");

  // experiment
  std::string ex_config;
  std::optional<std::uint64_t> ex_seed;
  std::optional<std::string> ex_out;
  std::optional<std::size_t> ex_threads;
  auto* cmd_exp = app.add_subcommand("experiment", "Run a full sweep from a JSON config");
  cmd_exp->add_option("--config", ex_config, "Experiment JSON")->required();
  cmd_exp->add_option("--seed", ex_seed, "Override the root seed");
  cmd_exp->add_option("--out-dir", ex_out, "Override the output directory");
  cmd_exp->add_option("--threads", ex_threads, "Override the worker count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (cmd_synth->parsed()) {
      synth.task = parse_loss_kind(synth_task);
      write_dataset_csv(fs::path(synth_out), synth_dataset(synth).set);
      std::cout << "wrote " << synth.n << " rows to " << synth_out << '\n';

    } else if (cmd_gq->parsed()) {
      const auto set = gq_data.load();
      const auto pool = trajectory_queries(set, gq_data.loss_model(), traj);
      for (const auto& w : pool.warnings) std::cerr << "warning: " << w << '\n';
      if (gq_split.empty()) {
        write_queries_csv(fs::path(gq_out), pool.queries);
        std::cout << "wrote " << pool.queries.size() << " queries to " << gq_out << '\n';
      } else {
        const auto split = split_queries(pool.queries, {gq_split[0], gq_split[1], gq_split[2]},
                                         derive_seed(traj.seed, "split"), pool.provenance);
        for (const auto* b : {&split.train, &split.validation, &split.test}) {
          const std::string path = gq_out + "_" + std::string(to_string(b->role)) + ".csv";
          write_queries_csv(fs::path(path), b->queries);
          std::cout << "wrote " << b->size() << " queries to " << path << '\n';
        }
      }

    } else if (cmd_learn->parsed()) {
      const auto set = ln_data.load();
      const auto loss = ln_data.loss_model();
      TrainConfig cfg = TrainConfig::defaults_for(loss.kind());
      cfg.coreset_size = ln_size;
      cfg.seed = ln_seed;
      if (ln_epochs) cfg.epochs = *ln_epochs;
      if (ln_lr) cfg.learning_rate = *ln_lr;
      if (ln_lambda) cfg.lambda = *ln_lambda;
      if (ln_batch) cfg.batch_size = *ln_batch;
      if (!ln_algorithm.empty()) cfg.algorithm = parse_algorithm(ln_algorithm);
      if (!ln_init.empty()) cfg.init = parse_init_strategy(ln_init);
      if (ln_freeze_weights) cfg.learn_weights = false;
      if (ln_learn_labels) cfg.learn_labels = true;
      cfg.early_stop_on_validation = ln_early;
      const auto train = read_queries_csv(fs::path(ln_queries));
      const auto val = ln_val.empty() ? std::vector<Query>{} : read_queries_csv(fs::path(ln_val));
      const auto result = learn_coreset(set, train, val, loss, cfg);
      for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << '\n';
      write_coreset_csv(fs::path(ln_out), result.coreset);
      if (!ln_report.empty()) write_json(ln_report, train_report_to_json(result.report));
      std::cout << "initial loss " << result.report.initial_loss << ", final loss "
                << result.report.train_loss.back() << ", best epoch " << result.report.best_epoch
                << '\n';

    } else if (cmd_bl->parsed()) {
      const auto set = bl_data.load();
      const Method m = parse_method(bl_method);
      Coreset c;
      if (m == Method::uniform) {
        c = uniform_coreset(set, bl_size, bl_seed);
      } else if (m == Method::leverage) {
        auto r = leverage_coreset(set, bl_data.loss_model(), bl_size, bl_seed);
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
        c = std::move(r.coreset);
      } else {
        throw ConfigError("baseline --method must be uniform or leverage");
      }
      write_coreset_csv(fs::path(bl_out), c);
      std::cout << "wrote " << c.size() << "-point " << bl_method << " coreset to " << bl_out << '\n';

    } else if (cmd_eval->parsed()) {
      const auto set = ev_data.load();
      const auto loss = ev_data.loss_model();
      const auto c = read_coreset_csv(fs::path(ev_coreset));
      const auto queries = read_queries_csv(fs::path(ev_queries));
      const auto avg = err_avg(set, c, loss, queries);
      json j = {{"err_avg", avg.value}, {"used_queries", avg.used}, {"filtered_queries", avg.filtered}};
      const auto opt = err_opt_detail(set, c, loss, full_optimum(set, loss));
      j["err_opt"] = opt.value;
      j["full_converged"] = opt.full_converged;
      j["coreset_converged"] = opt.coreset_converged;
      write_json(ev_out, j);

    } else if (cmd_bounds->parsed()) {
      double M = 0.0;
      if (bd_estimate) {
        if (bd_data.path.empty() || bd_queries.empty())
          throw ConfigError("--estimate-M needs --data and --queries");
        const auto set = bd_data.load();
        const auto pool = read_queries_csv(fs::path(bd_queries));
        M = estimate_M(set, bd_data.loss_model(), pool);
        std::cout << "M_hat " << M << '\n';
      } else if (bd_M) {
        M = *bd_M;
      } else {
        throw ConfigError("bounds needs --M or --estimate-M");
      }
      const BoundSpec b = BoundSpec::compute(bd_eps, bd_delta, M);
      std::cout << "eps " << b.eps << "\ndelta " << b.delta << "\nM " << b.M << "\nk_claim1 "
                << b.k_claim1 << "\nk_claim2 " << b.k_claim2 << '\n';
      if (!bd_csv.empty()) {
        std::ofstream out(bd_csv);
        if (!out) throw ParseError("cannot open " + bd_csv + " for writing", 0);
        const BoundSpec rows[] = {b};
        write_bound_table_csv(out, rows);
      }

    } else if (cmd_verify->parsed()) {
      const auto set = vf_data.load();
      const auto loss = vf_data.loss_model();
      const auto universe = read_queries_csv(fs::path(vf_queries));
      const MeasurableQuerySpace space(set, loss, universe);
      const auto c1 = verify_claim1(space, vf_eps, vf_delta, vf_trials, vf_seed);
      json j = {{"claim1",
                 {{"k", c1.k}, {"M", c1.M}, {"trials", c1.trials}, {"violations", c1.violations},
                  {"violation_rate", c1.violation_rate}, {"allowed_rate", c1.allowed_rate},
                  {"pass", c1.violation_rate <= c1.allowed_rate}}}};
      if (!vf_coreset.empty()) {
        const auto c = read_coreset_csv(fs::path(vf_coreset));
        const auto c2 = verify_claim2(set, c, space, vf_eps, vf_delta, vf_trials, vf_seed);
        const char* status = c2.status == Claim2Result::Status::ok               ? "ok"
                             : c2.status == Claim2Result::Status::premise1_failed ? "premise1_failed"
                                                                                  : "premise2_failed";
        j["claim2"] = {{"status", status},      {"message", c2.message},
                       {"k", c2.k},             {"M", c2.M},
                       {"weight_gap", c2.weight_gap}, {"expected_gap", c2.expected_gap},
                       {"evaluated", c2.evaluated},   {"violations", c2.violations}};
        const auto chain = check_ratio_chain(set, c, loss, universe);
        j["ratio_chain"] = {{"eps_prime", chain.eps_prime}, {"M", chain.M}, {"eps", chain.eps},
                            {"average_gap", chain.average_gap}, {"holds", chain.holds}};
      }
      write_json(vf_out, j);

    } else if (cmd_exp->parsed()) {
      ExperimentConfig cfg = load_config(fs::path(ex_config));
      RunOverrides o;
      o.seed = ex_seed;
      if (ex_out) o.out_dir = fs::path(*ex_out);
      o.threads = ex_threads;
      apply_overrides(cfg, o);
      const auto r = run_experiment(cfg);
      std::size_t failed = 0;
      for (const auto& row : r.table.rows) failed += row.ok ? 0 : 1;
      std::cout << "wrote " << r.aggregate_csv.string() << " (" << r.table.rows.size()
                << " trials, " << failed << " failed)\n";
    }
  } catch (const std::invalid_argument& e) {  // ConfigError, ContractError
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

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

#include "corelearn/experiment.hpp"

#include <algorithm>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& section) {
  if (!obj.is_object()) throw ConfigError("'" + section + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in '" + section + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& section) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
      if (!it->is_number_unsigned())
        throw ConfigError(section + "." + key + " must be a nonnegative integer");
    }
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(section + "." + key + ": " + e.what());
  }
}

std::string read_string(const json& obj, const char* key, const std::string& fallback,
                        const std::string& section) {
  std::string s = fallback;
  read(obj, key, s, section);
  return s;
}

std::string mapping_name(LabelMapping m) { return m == LabelMapping::none ? "none" : "binary_pm1"; }

LabelMapping parse_mapping(const std::string& s) {
  if (s == "none") return LabelMapping::none;
  if (s == "binary_pm1") return LabelMapping::binary_pm1;
  throw ConfigError("unknown label_mapping '" + s + "'");
}

template <typename F>
auto rethrow_as_config(F&& f) {
  try {
    return f();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (Method m : c.sweep.methods) methods.push_back(std::string(to_string(m)));
  json csv = {{"path", c.dataset.path.string()},
              {"features", c.dataset.schema.feature_columns},
              {"label", c.dataset.schema.label_column},
              {"weight", c.dataset.schema.weight_column ? json(*c.dataset.schema.weight_column)
                                                        : json(nullptr)},
              {"header", c.dataset.schema.has_header},
              {"label_mapping", mapping_name(c.dataset.schema.label_mapping)},
              {"standardize", c.dataset.schema.standardize}};
  return json{
      {"seed", c.seed},
      {"loss", {{"kind", std::string(to_string(c.loss.kind()))}, {"intercept", c.loss.intercept()}}},
      {"dataset",
       {{"source", c.dataset.source},
        {"synthetic", {{"n", c.dataset.synth.n}, {"d", c.dataset.synth.d}, {"noise", c.dataset.synth.noise}}},
        {"csv", csv}}},
      {"queries",
       {{"n_starts", c.queries.n_starts},
        {"steps_per_start", c.queries.steps_per_start},
        {"gd_lr", c.queries.gd_lr},
        {"init_scale", c.queries.init_scale},
        {"train", c.queries.split.train},
        {"validation", c.queries.split.validation},
        {"test", c.queries.split.test}}},
      {"learner",
       {{"algorithm", std::string(to_string(c.learner.algorithm))},
        {"epochs", c.learner.epochs},
        {"learning_rate", c.learner.learning_rate},
        {"lambda", c.learner.lambda},
        {"batch_size", c.learner.batch_size},
        {"learn_weights", c.learner.learn_weights},
        {"learn_labels", c.learner.learn_labels},
        {"early_stop_on_validation", c.learner.early_stop_on_validation},
        {"init", std::string(to_string(c.learner.init))},
        {"clip_norm", c.learner.clip_norm}}},
      {"sweep",
       {{"sizes", c.sweep.sizes}, {"methods", methods}, {"trials", c.sweep.trials}, {"threads", c.sweep.threads}}},
      {"output", {{"dir", c.output.dir.string()}, {"train_reports", c.output.train_reports}}}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  check_keys(j, {"seed", "loss", "dataset", "queries", "learner", "sweep", "output"}, "config");
  read(j, "seed", c.seed, "config");

  if (j.contains("loss")) {
    const json& l = j["loss"];
    check_keys(l, {"kind", "intercept"}, "loss");
    bool intercept = false;
    read(l, "intercept", intercept, "loss");
    const auto kind = rethrow_as_config(
        [&] { return parse_loss_kind(read_string(l, "kind", "linear_regression", "loss")); });
    c.loss = LossModel(kind, intercept);
    c.learner = TrainConfig::defaults_for(kind);
    if (kind != LossKind::linear_regression) c.sweep.methods = {Method::learned, Method::uniform};
  }

  if (j.contains("dataset")) {
    const json& d = j["dataset"];
    check_keys(d, {"source", "synthetic", "csv"}, "dataset");
    read(d, "source", c.dataset.source, "dataset");
    if (d.contains("synthetic")) {
      const json& s = d["synthetic"];
      check_keys(s, {"n", "d", "noise"}, "dataset.synthetic");
      read(s, "n", c.dataset.synth.n, "dataset.synthetic");
      read(s, "d", c.dataset.synth.d, "dataset.synthetic");
      read(s, "noise", c.dataset.synth.noise, "dataset.synthetic");
    }
    if (d.contains("csv")) {
      const json& s = d["csv"];
      check_keys(s, {"path", "features", "label", "weight", "header", "label_mapping", "standardize"},
                 "dataset.csv");
      c.dataset.path = read_string(s, "path", "", "dataset.csv");
      read(s, "features", c.dataset.schema.feature_columns, "dataset.csv");
      read(s, "label", c.dataset.schema.label_column, "dataset.csv");
      if (s.contains("weight") && !s["weight"].is_null())
        c.dataset.schema.weight_column = read_string(s, "weight", "", "dataset.csv");
      read(s, "header", c.dataset.schema.has_header, "dataset.csv");
      c.dataset.schema.label_mapping =
          parse_mapping(read_string(s, "label_mapping", "none", "dataset.csv"));
      read(s, "standardize", c.dataset.schema.standardize, "dataset.csv");
    }
  }

  if (j.contains("queries")) {
    const json& q = j["queries"];
    check_keys(q, {"n_starts", "steps_per_start", "gd_lr", "init_scale", "train", "validation", "test"},
               "queries");
    read(q, "n_starts", c.queries.n_starts, "queries");
    read(q, "steps_per_start", c.queries.steps_per_start, "queries");
    read(q, "gd_lr", c.queries.gd_lr, "queries");
    read(q, "init_scale", c.queries.init_scale, "queries");
    read(q, "train", c.queries.split.train, "queries");
    read(q, "validation", c.queries.split.validation, "queries");
    read(q, "test", c.queries.split.test, "queries");
  }

  if (j.contains("learner")) {
    const json& l = j["learner"];
    check_keys(l, {"algorithm", "epochs", "learning_rate", "lambda", "batch_size", "learn_weights",
                   "learn_labels", "early_stop_on_validation", "init", "clip_norm"},
               "learner");
    if (l.contains("algorithm"))
      c.learner.algorithm = rethrow_as_config(
          [&] { return parse_algorithm(read_string(l, "algorithm", "", "learner")); });
    read(l, "epochs", c.learner.epochs, "learner");
    read(l, "learning_rate", c.learner.learning_rate, "learner");
    read(l, "lambda", c.learner.lambda, "learner");
    read(l, "batch_size", c.learner.batch_size, "learner");
    read(l, "learn_weights", c.learner.learn_weights, "learner");
    read(l, "learn_labels", c.learner.learn_labels, "learner");
    read(l, "early_stop_on_validation", c.learner.early_stop_on_validation, "learner");
    if (l.contains("init"))
      c.learner.init = rethrow_as_config(
          [&] { return parse_init_strategy(read_string(l, "init", "", "learner")); });
    read(l, "clip_norm", c.learner.clip_norm, "learner");
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, {"sizes", "methods", "trials", "threads"}, "sweep");
    read(s, "sizes", c.sweep.sizes, "sweep");
    if (s.contains("methods")) {
      std::vector<std::string> names;
      read(s, "methods", names, "sweep");
      c.sweep.methods.clear();
      for (const auto& n : names)
        c.sweep.methods.push_back(rethrow_as_config([&] { return parse_method(n); }));
    }
    read(s, "trials", c.sweep.trials, "sweep");
    read(s, "threads", c.sweep.threads, "sweep");
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"dir", "train_reports"}, "output");
    c.output.dir = read_string(o, "dir", c.output.dir.string(), "output");
    read(o, "train_reports", c.output.train_reports, "output");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return config_to_json(a) == config_to_json(b);
}

void ExperimentConfig::validate() const {
  if (dataset.source == "synthetic") {
    if (dataset.synth.n < 1 || dataset.synth.d < 1)
      throw ConfigError("dataset.synthetic: n and d must be >= 1");
    if (!(dataset.synth.noise >= 0.0)) throw ConfigError("dataset.synthetic.noise must be >= 0");
  } else if (dataset.source == "csv") {
    if (dataset.path.empty()) throw ConfigError("dataset.csv.path is required");
    if (dataset.schema.feature_columns.empty()) throw ConfigError("dataset.csv.features is empty");
    if (dataset.schema.label_column.empty()) throw ConfigError("dataset.csv.label is required");
  } else {
    throw ConfigError("dataset.source must be 'synthetic' or 'csv'");
  }
  if (queries.n_starts < 1) throw ConfigError("queries.n_starts must be >= 1");
  if (!(queries.gd_lr > 0.0)) throw ConfigError("queries.gd_lr must be > 0");
  if (!(queries.init_scale >= 0.0)) throw ConfigError("queries.init_scale must be >= 0");
  if (queries.split.train < 1) throw ConfigError("queries.train must be >= 1");
  if (queries.split.test < 1) throw ConfigError("queries.test must be >= 1");
  const std::size_t pool = queries.n_starts * (queries.steps_per_start + 1);
  if (queries.split.train + queries.split.validation + queries.split.test > pool)
    throw ConfigError("query splits need " +
                      std::to_string(queries.split.train + queries.split.validation +
                                     queries.split.test) +
                      " queries but trajectories yield at most " + std::to_string(pool));
  rethrow_as_config([&] {
    TrainConfig probe = learner;
    probe.coreset_size = 1;
    probe.validate();
    return 0;
  });
  if (learner.algorithm == Algorithm::practical && learner.batch_size > queries.split.train)
    throw ConfigError("learner.batch_size exceeds the training split");
  if (sweep.sizes.empty()) throw ConfigError("sweep.sizes is empty");
  for (std::size_t s : sweep.sizes)
    if (s < 1) throw ConfigError("sweep.sizes entries must be >= 1");
  if (sweep.methods.empty()) throw ConfigError("sweep.methods is empty");
  if (loss.kind() != LossKind::linear_regression &&
      std::find(sweep.methods.begin(), sweep.methods.end(), Method::leverage) != sweep.methods.end())
    throw ConfigError("sweep.methods: leverage sampling requires linear_regression");
  if (sweep.trials < 1) throw ConfigError("sweep.trials must be >= 1");
  if (sweep.threads < 1) throw ConfigError("sweep.threads must be >= 1");
  if (output.dir.empty()) throw ConfigError("output.dir is required");
}

void apply_overrides(ExperimentConfig& cfg, const RunOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.out_dir) cfg.output.dir = *o.out_dir;
  if (o.threads) cfg.sweep.threads = *o.threads;
}

ExperimentSeeds experiment_seeds(std::uint64_t root) {
  return {derive_seed(root, "dataset"), derive_seed(root, "queries"), derive_seed(root, "split"),
          derive_seed(root, "sweep")};
}

Dataset prepare_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset.source == "csv") {
    CsvSchema schema = cfg.dataset.schema;
    schema.normalize = true;
    return load_dataset(cfg.dataset.path, schema);
  }
  SynthSpec spec = cfg.dataset.synth;
  spec.task = cfg.loss.kind();
  spec.seed = experiment_seeds(cfg.seed).dataset;
  return synth_dataset(spec);
}

QueryPool prepare_queries(const ExperimentConfig& cfg, const WeightedLabeledSet& set) {
  TrajectoryOptions t;
  t.n_starts = cfg.queries.n_starts;
  t.steps_per_start = cfg.queries.steps_per_start;
  t.gd_lr = cfg.queries.gd_lr;
  t.init_scale = cfg.queries.init_scale;
  t.seed = experiment_seeds(cfg.seed).queries;
  return trajectory_queries(set, cfg.loss, t);
}

QuerySplit prepare_split(const ExperimentConfig& cfg, const QueryPool& pool) {
  return split_queries(pool.queries, cfg.queries.split, experiment_seeds(cfg.seed).split,
                       pool.provenance);
}

json coreset_to_json(const Coreset& c) {
  json points = json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto p = c.point(i);
    points.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"points", points},
          {"weights", std::vector<double>(c.weights.data(), c.weights.data() + c.weights.size())},
          {"labels", std::vector<double>(c.labels.data(), c.labels.data() + c.labels.size())}};
}

json train_report_to_json(const TrainReport& r) {
  return {{"train_loss", r.train_loss},
          {"val_err_avg", r.val_err_avg},
          {"best_epoch", r.best_epoch},
          {"initial_loss", r.initial_loss},
          {"steps", r.steps},
          {"rejected_queries", r.rejected_queries},
          {"warnings", r.warnings},
          {"final_coreset", coreset_to_json(r.final_coreset)}};
}

namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ExperimentSeeds seeds = experiment_seeds(cfg.seed);
  const Dataset data = prepare_dataset(cfg);
  const QueryPool pool = prepare_queries(cfg, data.set);
  const QuerySplit split = prepare_split(cfg, pool);

  SweepSpec spec;
  spec.sizes = cfg.sweep.sizes;
  spec.methods = cfg.sweep.methods;
  spec.trials = cfg.sweep.trials;
  spec.threads = cfg.sweep.threads;
  spec.seed = seeds.sweep;
  spec.learner = cfg.learner;

  ExperimentResult out;
  out.table = sweep(data.set, cfg.loss, spec, split);

  std::filesystem::create_directories(cfg.output.dir);
  out.trials_csv = cfg.output.dir / "trials.csv";
  out.aggregate_csv = cfg.output.dir / "aggregate.csv";
  out.manifest = cfg.output.dir / "manifest.json";
  {
    std::ostringstream s;
    write_trials_csv(s, out.table);
    write_text(out.trials_csv, s.str());
  }
  {
    std::ostringstream s;
    write_aggregate_csv(s, out.table);
    write_text(out.aggregate_csv, s.str());
  }
  json outputs = {out.trials_csv.filename().string(), out.aggregate_csv.filename().string()};
  if (cfg.output.train_reports) {
    json reports = json::array();
    for (const auto& row : out.table.rows)
      if (row.report)
        reports.push_back({{"size", row.size},
                           {"trial", row.trial},
                           {"report", train_report_to_json(*row.report)}});
    out.train_reports = cfg.output.dir / "train_reports.json";
    write_text(*out.train_reports, reports.dump(1) + "\n");
    outputs.push_back(out.train_reports->filename().string());
  }

  json failures = json::array();
  for (const auto& row : out.table.rows)
    if (!row.ok)
      failures.push_back({{"size", row.size},
                          {"method", std::string(to_string(row.method))},
                          {"trial", row.trial},
                          {"error", row.error}});
  const json config = config_to_json(cfg);
  const json manifest = {
      {"tool", "corelearn"},
      {"version", kVersion},
      {"compiler", __VERSION__},
      {"config", config},
      {"config_hash", hex64(fnv1a64(config.dump()))},
      {"seeds",
       {{"root", cfg.seed}, {"dataset", seeds.dataset}, {"queries", seeds.queries},
        {"split", seeds.split}, {"sweep", seeds.sweep}}},
      {"dataset", {{"source", data.meta.source}, {"n", data.set.size()}, {"d", data.set.dim()}}},
      {"queries",
       {{"provenance", pool.provenance}, {"pool_size", pool.queries.size()}, {"warnings", pool.warnings}}},
      {"failures", failures},
      {"outputs", outputs}};
  write_text(out.manifest, manifest.dump(1) + "\n");
  return out;
}

}  // namespace corelearn

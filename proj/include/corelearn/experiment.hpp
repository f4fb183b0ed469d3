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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corelearn/dataset.hpp"
#include "corelearn/eval.hpp"
#include "corelearn/learner.hpp"
#include "corelearn/queries.hpp"

namespace corelearn {

struct DatasetConfig {
  std::string source = "synthetic";  // "synthetic" or "csv"
  std::filesystem::path path;
  CsvSchema schema;
  SynthSpec synth;  // task follows the configured loss; seed derives from the root seed
};

struct QueriesConfig {
  std::size_t n_starts = 20;
  std::size_t steps_per_start = 119;
  double gd_lr = 0.01;
  double init_scale = 1.0;
  SplitSizes split{2000, 200, 200};
};

struct SweepConfig {
  std::vector<std::size_t> sizes{50, 80, 110, 140};
  std::vector<Method> methods{Method::learned, Method::uniform, Method::leverage};
  std::size_t trials = 5;
  std::size_t threads = 1;
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  bool train_reports = true;
};

/// Everything one experiment needs. All randomness derives from `seed`
/// through named streams (dataset, queries, split, sweep).
struct ExperimentConfig {
  std::uint64_t seed = 0;
  LossModel loss;
  DatasetConfig dataset;
  QueriesConfig queries;
  TrainConfig learner = TrainConfig::defaults_for(LossKind::linear_regression);
  SweepConfig sweep;
  OutputConfig output;

  // Throws ConfigError.
  void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Unknown keys and wrongly typed values raise ConfigError; missing keys keep
// their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::size_t> threads;
};

void apply_overrides(ExperimentConfig& cfg, const RunOverrides& overrides);

// Derived per-stage seeds.
struct ExperimentSeeds {
  std::uint64_t dataset;
  std::uint64_t queries;
  std::uint64_t split;
  std::uint64_t sweep;
};
ExperimentSeeds experiment_seeds(std::uint64_t root);

Dataset prepare_dataset(const ExperimentConfig& cfg);
QueryPool prepare_queries(const ExperimentConfig& cfg, const WeightedLabeledSet& set);
QuerySplit prepare_split(const ExperimentConfig& cfg, const QueryPool& pool);

nlohmann::json train_report_to_json(const TrainReport& report);
nlohmann::json coreset_to_json(const Coreset& c);

struct ExperimentResult {
  ResultTable table;
  std::filesystem::path trials_csv;
  std::filesystem::path aggregate_csv;
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> train_reports;
};

/// Load, normalize, generate trajectory queries, split, sweep, then write
/// trials.csv, aggregate.csv, manifest.json and train_reports.json into the
/// output directory.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace corelearn

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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corelearn/core.hpp"

namespace corelearn {

enum class LabelMapping {
  none,
  binary_pm1,  // {0, 1} -> {-1, +1}; -1 and +1 pass through
};

/// Column selection for a CSV dataset. With a header, columns are named;
/// without one, they are zero-based indices written as strings ("0", "3").
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string label_column;
  std::optional<std::string> weight_column;
  bool has_header = true;
  LabelMapping label_mapping = LabelMapping::none;
  bool standardize = false;
  // Unit weights are scaled to sum to 1 after loading.
  bool normalize = true;
};

struct DatasetMetadata {
  std::string source;
  std::vector<std::string> feature_names;
  // Per-feature mean and standard deviation removed by standardization.
  std::vector<double> feature_means;
  std::vector<double> feature_stds;
  bool standardized = false;
};

struct Dataset {
  WeightedLabeledSet set;
  DatasetMetadata meta;
};

Dataset load_dataset(std::istream& in, const CsvSchema& schema, const std::string& source = "stream");
Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema);

struct SynthSpec {
  LossKind task = LossKind::linear_regression;
  std::size_t n = 1000;
  std::size_t d = 3;
  // Label noise: Gaussian sd for regression; for classification the planted
  // score is perturbed by Gaussian noise of this sd before taking its sign.
  double noise = 0.1;
  std::uint64_t seed = 0;
};

/// Standard normal features, a standard normal planted model, normalized
/// unit weights.
Dataset synth_dataset(const SynthSpec& spec);

// Header x0..x{d-1},label,weight.
void write_dataset_csv(std::ostream& out, const WeightedLabeledSet& set);
void write_dataset_csv(const std::filesystem::path& path, const WeightedLabeledSet& set);
CsvSchema written_dataset_schema(std::size_t d);

// Header weight,label,x0..x{d-1}; one coreset row per line.
void write_coreset_csv(std::ostream& out, const Coreset& c);
void write_coreset_csv(const std::filesystem::path& path, const Coreset& c);
Coreset read_coreset_csv(std::istream& in);
Coreset read_coreset_csv(const std::filesystem::path& path);

}  // namespace corelearn

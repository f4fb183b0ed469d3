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
#include <string>
#include <string_view>
#include <vector>

#include "corelearn/core.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

enum class QueryRole { train, validation, test };

std::string_view to_string(QueryRole role);

struct QueryBatch {
  std::vector<Query> queries;
  QueryRole role = QueryRole::train;
  std::string provenance;

  std::size_t size() const { return queries.size(); }
  bool empty() const { return queries.empty(); }
};

struct TrajectoryOptions {
  std::size_t n_starts = 20;
  std::size_t steps_per_start = 1199;
  double gd_lr = 0.01;
  double init_scale = 1.0;
  std::uint64_t seed = 0;
};

struct QueryPool {
  std::vector<Query> queries;
  std::vector<std::string> warnings;
  std::string provenance;
};

/// Plain gradient descent on f(P, w, .) from n_starts Gaussian starts
/// (standard deviation init_scale). Every start contributes its initial point
/// followed by each iterate, ordered by start then step. A trajectory that
/// diverges is truncated at the last finite iterate. Bitwise-identical
/// queries are kept once.
QueryPool trajectory_queries(const WeightedLabeledSet& set, const LossModel& loss,
                             const TrajectoryOptions& options);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

struct QuerySplit {
  QueryBatch train;
  QueryBatch validation;
  QueryBatch test;
};

// Seeded shuffle, then contiguous train | validation | test slices.
QuerySplit split_queries(const std::vector<Query>& pool, SplitSizes sizes, std::uint64_t seed,
                         std::string_view provenance = "pool");

// k draws with replacement from the space's measure.
QueryBatch iid_sample(const MeasurableQuerySpace& space, std::size_t k, std::uint64_t seed);
// Same, returning universe indices.
std::vector<std::size_t> iid_sample_indices(const Vector& measure, std::size_t k, Rng& rng);

// One query per row, comma-separated, no header. Values are written with
// round-trip precision.
void write_queries_csv(std::ostream& out, const std::vector<Query>& queries);
void write_queries_csv(const std::filesystem::path& path, const std::vector<Query>& queries);
std::vector<Query> read_queries_csv(std::istream& in);
std::vector<Query> read_queries_csv(const std::filesystem::path& path);

}  // namespace corelearn

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

#include "corelearn/queries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "corelearn/errors.hpp"

namespace corelearn {

std::string_view to_string(QueryRole role) {
  switch (role) {
    case QueryRole::train:
      return "train";
    case QueryRole::validation:
      return "validation";
    case QueryRole::test:
      return "test";
  }
  return "unknown";
}

namespace {

std::string bytes_of(const Query& q) {
  std::string s(static_cast<std::size_t>(q.params.size()) * sizeof(double), '\0');
  std::memcpy(s.data(), q.params.data(), s.size());
  return s;
}

bool finite_cost(const WeightedLabeledSet& set, const LossModel& loss, const Query& q) {
  if (!q.params.allFinite()) return false;
  try {
    return std::isfinite(total_cost(set, loss, q));
  } catch (const NumericError&) {
    return false;
  }
}

}  // namespace

QueryPool trajectory_queries(const WeightedLabeledSet& set, const LossModel& loss,
                             const TrajectoryOptions& options) {
  if (options.n_starts < 1) throw ContractError("trajectory_queries: n_starts must be >= 1");
  if (!(options.gd_lr > 0.0)) throw ContractError("trajectory_queries: gd_lr must be > 0");
  if (!(options.init_scale >= 0.0))
    throw ContractError("trajectory_queries: init_scale must be >= 0");

  QueryPool pool;
  std::ostringstream prov;
  prov << "trajectory(n_starts=" << options.n_starts << ",steps_per_start="
       << options.steps_per_start << ",gd_lr=" << options.gd_lr
       << ",init_scale=" << options.init_scale << ",seed=" << options.seed << ")";
  pool.provenance = prov.str();

  const auto qdim = static_cast<Eigen::Index>(loss.query_dim(set.dim()));
  std::unordered_set<std::string> seen;
  auto keep = [&](const Query& q) {
    if (seen.insert(bytes_of(q)).second) pool.queries.push_back(q);
  };
  std::normal_distribution<double> normal(0.0, 1.0);
  pool.queries.reserve(options.n_starts * (options.steps_per_start + 1));
  for (std::size_t s = 0; s < options.n_starts; ++s) {
    Rng rng = make_rng(options.seed, "trajectory_start_" + std::to_string(s));
    Query q{Vector(qdim)};
    for (Eigen::Index j = 0; j < qdim; ++j) q.params[j] = options.init_scale * normal(rng);
    keep(q);
    for (std::size_t t = 0; t < options.steps_per_start; ++t) {
      Query next(q.params - options.gd_lr * cost_gradient(set, loss, q));
      if (!finite_cost(set, loss, next)) {
        pool.warnings.push_back("trajectory " + std::to_string(s) + " diverged at step " +
                                std::to_string(t + 1) + "; truncated");
        break;
      }
      q = std::move(next);
      keep(q);
    }
  }
  return pool;
}

QuerySplit split_queries(const std::vector<Query>& pool, SplitSizes sizes, std::uint64_t seed,
                         std::string_view provenance) {
  const std::size_t need = sizes.train + sizes.validation + sizes.test;
  if (need > pool.size())
    throw ContractError("split_queries: requested " + std::to_string(need) +
                        " queries from a pool of " + std::to_string(pool.size()));
  if (sizes.train == 0) throw ContractError("split_queries: training split must be non-empty");
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = make_rng(seed, "split_queries");
  std::shuffle(order.begin(), order.end(), rng);

  QuerySplit out;
  auto fill = [&](QueryBatch& batch, QueryRole role, std::size_t begin, std::size_t count) {
    batch.role = role;
    batch.provenance = std::string(provenance) + "/split(seed=" + std::to_string(seed) + ")/" +
                       std::string(to_string(role));
    batch.queries.reserve(count);
    for (std::size_t i = begin; i < begin + count; ++i) batch.queries.push_back(pool[order[i]]);
  };
  fill(out.train, QueryRole::train, 0, sizes.train);
  fill(out.validation, QueryRole::validation, sizes.train, sizes.validation);
  fill(out.test, QueryRole::test, sizes.train + sizes.validation, sizes.test);
  return out;
}

std::vector<std::size_t> iid_sample_indices(const Vector& measure, std::size_t k, Rng& rng) {
  std::discrete_distribution<std::size_t> pick(measure.data(), measure.data() + measure.size());
  std::vector<std::size_t> out(k);
  for (auto& i : out) i = pick(rng);
  return out;
}

QueryBatch iid_sample(const MeasurableQuerySpace& space, std::size_t k, std::uint64_t seed) {
  if (k < 1) throw ContractError("iid_sample: k must be >= 1");
  Rng rng = make_rng(seed, "iid_sample");
  QueryBatch batch;
  batch.role = QueryRole::train;
  batch.provenance = "iid(k=" + std::to_string(k) + ",seed=" + std::to_string(seed) + ")";
  batch.queries.reserve(k);
  for (std::size_t i : iid_sample_indices(space.measure(), k, rng))
    batch.queries.push_back(space.universe()[i]);
  return batch;
}

void write_queries_csv(std::ostream& out, const std::vector<Query>& queries) {
  out << std::setprecision(17);
  for (const auto& q : queries) {
    for (Eigen::Index j = 0; j < q.params.size(); ++j) {
      if (j > 0) out << ',';
      out << q.params[j];
    }
    out << '\n';
  }
}

void write_queries_csv(const std::filesystem::path& path, const std::vector<Query>& queries) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing", 0);
  write_queries_csv(out, queries);
}

std::vector<Query> read_queries_csv(std::istream& in) {
  std::vector<Query> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      const char* first = line.data() + pos;
      const char* last = line.data() + comma;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ParseError("query column " + std::to_string(values.size()) +
                             ": not a finite number",
                         lineno);
      values.push_back(v);
      pos = comma + 1;
    }
    if (!out.empty() && values.size() != out.front().dim())
      throw ParseError("query dimension differs from the first row", lineno);
    out.emplace_back(Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  return out;
}

std::vector<Query> read_queries_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_queries_csv(in);
}

}  // namespace corelearn

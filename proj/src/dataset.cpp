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

#include "corelearn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "corelearn/errors.hpp"
#include "corelearn/numeric.hpp"

namespace corelearn {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::size_t resolve_column(const std::string& name, const std::vector<std::string>& header,
                           bool has_header) {
  if (has_header) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError("missing column '" + name + "'", 1);
    return static_cast<std::size_t>(it - header.begin());
  }
  std::size_t idx = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
  if (ec != std::errc() || ptr != name.data() + name.size())
    throw ParseError("column '" + name + "' must be an index when the file has no header", 0);
  return idx;
}

double parse_cell(const std::string& cell, std::size_t line, const std::string& column) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw ParseError("column '" + column + "': non-numeric cell '" + cell + "'", line);
  if (!std::isfinite(v)) throw ParseError("column '" + column + "': non-finite value", line);
  return v;
}

double map_label(double v, LabelMapping mapping, std::size_t line) {
  if (mapping == LabelMapping::none) return v;
  if (v == 0.0 || v == -1.0) return -1.0;
  if (v == 1.0) return 1.0;
  throw ParseError("binary label must be 0, 1 or -1, got " + std::to_string(v), line);
}

}  // namespace

Dataset load_dataset(std::istream& in, const CsvSchema& schema, const std::string& source) {
  if (schema.feature_columns.empty()) throw ConfigError("schema names no feature columns");
  if (schema.label_column.empty()) throw ConfigError("schema names no label column");

  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  if (schema.has_header) {
    if (!std::getline(in, line)) throw ParseError("empty file", 0);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    header = split_fields(line);
  }

  std::vector<std::size_t> fcols;
  for (const auto& c : schema.feature_columns)
    fcols.push_back(resolve_column(c, header, schema.has_header));
  const std::size_t lcol = resolve_column(schema.label_column, header, schema.has_header);
  std::optional<std::size_t> wcol;
  if (schema.weight_column) wcol = resolve_column(*schema.weight_column, header, schema.has_header);
  std::size_t needed = std::max(lcol, wcol.value_or(0));
  for (auto c : fcols) needed = std::max(needed, c);

  const std::size_t d = fcols.size();
  std::vector<double> feats, labels, weights;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() <= needed)
      throw ParseError("expected at least " + std::to_string(needed + 1) + " columns, found " +
                           std::to_string(fields.size()),
                       lineno);
    for (std::size_t j = 0; j < d; ++j)
      feats.push_back(parse_cell(fields[fcols[j]], lineno, schema.feature_columns[j]));
    labels.push_back(map_label(parse_cell(fields[lcol], lineno, schema.label_column),
                               schema.label_mapping, lineno));
    if (wcol) {
      const double w = parse_cell(fields[*wcol], lineno, *schema.weight_column);
      if (w < 0.0) throw ParseError("negative weight", lineno);
      weights.push_back(w);
    }
  }
  const std::size_t n = labels.size();
  if (n == 0) throw ParseError("no data rows", lineno);

  Dataset out{WeightedLabeledSet(RowMatrix::Zero(1, 1), Vector::Zero(1)), {}};
  out.meta.source = source;
  out.meta.feature_names = schema.feature_columns;
  RowMatrix points = Eigen::Map<RowMatrix>(feats.data(), static_cast<Eigen::Index>(n),
                                           static_cast<Eigen::Index>(d));
  if (schema.standardize) {
    out.meta.standardized = true;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      const double mean = points.col(j).mean();
      const double var = (points.col(j).array() - mean).square().mean();
      const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
      points.col(j) = (points.col(j).array() - mean) / sd;
      out.meta.feature_means.push_back(mean);
      out.meta.feature_stds.push_back(sd);
    }
  }
  Vector w = wcol ? Vector(Eigen::Map<Vector>(weights.data(), static_cast<Eigen::Index>(n)))
                  : Vector(Vector::Ones(static_cast<Eigen::Index>(n)));
  WeightedLabeledSet set(std::move(points), std::move(w),
                         Eigen::Map<Vector>(labels.data(), static_cast<Eigen::Index>(n)));
  out.set = schema.normalize ? normalize_weights(set) : set;
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return load_dataset(in, schema, path.string());
}

Dataset synth_dataset(const SynthSpec& spec) {
  if (spec.n < 1 || spec.d < 1) throw ContractError("synth_dataset: n and d must be >= 1");
  if (!(spec.noise >= 0.0)) throw ContractError("synth_dataset: noise must be >= 0");
  Rng rng = make_rng(spec.seed, "synth_dataset");
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);
  Vector planted(d);
  for (Eigen::Index j = 0; j < d; ++j) planted[j] = normal(rng);
  RowMatrix points(n, d);
  Vector labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) points(i, j) = normal(rng);
    const double score = points.row(i).dot(planted) + spec.noise * normal(rng);
    labels[i] = spec.task == LossKind::linear_regression ? score : (score >= 0.0 ? 1.0 : -1.0);
  }
  Dataset out{normalize_weights(WeightedLabeledSet(std::move(points), std::move(labels))), {}};
  out.meta.source = "synth(" + std::string(to_string(spec.task)) + ",n=" + std::to_string(spec.n) +
                    ",d=" + std::to_string(spec.d) + ",noise=" + std::to_string(spec.noise) +
                    ",seed=" + std::to_string(spec.seed) + ")";
  for (std::size_t j = 0; j < spec.d; ++j) out.meta.feature_names.push_back("x" + std::to_string(j));
  return out;
}

CsvSchema written_dataset_schema(std::size_t d) {
  CsvSchema s;
  for (std::size_t j = 0; j < d; ++j) s.feature_columns.push_back("x" + std::to_string(j));
  s.label_column = "label";
  s.weight_column = "weight";
  s.normalize = false;
  return s;
}

void write_dataset_csv(std::ostream& out, const WeightedLabeledSet& set) {
  for (std::size_t j = 0; j < set.dim(); ++j) out << 'x' << j << ',';
  out << "label,weight\n" << std::setprecision(17);
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (double v : set.point(i)) out << v << ',';
    const auto ii = static_cast<Eigen::Index>(i);
    out << set.labels()[ii] << ',' << set.weights()[ii] << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const WeightedLabeledSet& set) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing", 0);
  write_dataset_csv(out, set);
}

void write_coreset_csv(std::ostream& out, const Coreset& c) {
  out << "weight,label";
  for (std::size_t j = 0; j < c.dim(); ++j) out << ",x" << j;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out << c.weights[ii] << ',' << c.labels[ii];
    for (double v : c.point(i)) out << ',' << v;
    out << '\n';
  }
}

void write_coreset_csv(const std::filesystem::path& path, const Coreset& c) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing", 0);
  write_coreset_csv(out, c);
}

Coreset read_coreset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty coreset file", 0);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_fields(line);
  if (header.size() < 3 || header[0] != "weight" || header[1] != "label")
    throw ParseError("coreset header must start with weight,label,x0", 1);
  const std::size_t d = header.size() - 2;
  std::vector<double> feats, weights, labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != d + 2)
      throw ParseError("expected " + std::to_string(d + 2) + " columns", lineno);
    weights.push_back(parse_cell(fields[0], lineno, "weight"));
    labels.push_back(parse_cell(fields[1], lineno, "label"));
    for (std::size_t j = 0; j < d; ++j) feats.push_back(parse_cell(fields[j + 2], lineno, header[j + 2]));
  }
  const auto m = static_cast<Eigen::Index>(weights.size());
  if (m == 0) throw ParseError("coreset has no rows", lineno);
  Coreset c{Eigen::Map<RowMatrix>(feats.data(), m, static_cast<Eigen::Index>(d)),
            Eigen::Map<Vector>(weights.data(), m), Eigen::Map<Vector>(labels.data(), m)};
  c.validate();
  return c;
}

Coreset read_coreset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_coreset_csv(in);
}

}  // namespace corelearn

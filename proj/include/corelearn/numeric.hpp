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

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace corelearn {

// Pairwise (tree) summation. The split points depend only on the length, so
// the result is reproducible for a given input order.
double pairwise_sum(std::span<const double> values);

// Sign with sign(0) == 0; used as the subgradient of |x|.
inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

using Rng = std::mt19937_64;

// Seed for the stream named `label` under `root`. Streams with different
// labels are statistically independent; the mapping is stable across runs.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label);

inline Rng make_rng(std::uint64_t root, std::string_view label) {
  return Rng(derive_seed(root, label));
}

std::uint64_t fnv1a64(std::string_view bytes);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

}  // namespace corelearn

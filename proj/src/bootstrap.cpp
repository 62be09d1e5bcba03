// Copyright 2026 The pfclab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pfc/bootstrap.hpp"

#include "pfc/error.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace pfc {

double percentile(std::span<const double> values, double q) {
  if (values.empty()) fail(ErrorCode::kInvalidParams, "percentile of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Estimate bootstrap_mean(std::span<const double> values, int resamples, std::uint64_t seed) {
  if (values.empty()) fail(ErrorCode::kInvalidParams, "bootstrap of an empty sample");
  if (resamples < 1) fail(ErrorCode::kInvalidParams, "bootstrap needs at least one resample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) acc += values[pick(rng)];
    m = acc / static_cast<double>(values.size());
  }
  return {percentile(means, 0.5), percentile(means, 0.025), percentile(means, 0.975)};
}

}  // namespace pfc

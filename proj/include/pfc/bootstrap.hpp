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

#pragma once

#include <cstdint>
#include <span>

namespace pfc {

struct Estimate {
  double median = 0.0;
  double lo = 0.0;  // 2.5th percentile
  double hi = 0.0;  // 97.5th percentile
};

// Percentile bootstrap of the mean of `values`: `resamples` resamples with
// replacement, reporting the median and the central 95% of the resampled
// means.
Estimate bootstrap_mean(std::span<const double> values, int resamples, std::uint64_t seed);

// Linear-interpolated percentile (q in [0, 1]) of an unsorted sample.
double percentile(std::span<const double> values, double q);

}  // namespace pfc

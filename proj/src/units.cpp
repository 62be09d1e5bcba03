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

#include "pfc/units.hpp"

#include "pfc/error.hpp"

#include <cmath>
#include <string>

namespace pfc::units {

double thermal_frequency_ghz(double millikelvin) {
  if (!(millikelvin > 0.0) || !std::isfinite(millikelvin)) {
    fail(ErrorCode::kInvalidParams,
         "temperature must be positive and finite, got " + std::to_string(millikelvin) + " mK");
  }
  return kBoltzmann * (millikelvin * 1e-3) / kPlanck * 1e-9;
}

double beta_per_ghz(double millikelvin) { return 1.0 / thermal_frequency_ghz(millikelvin); }

double beta_angular(double millikelvin) { return 1.0 / (kTwoPi * thermal_frequency_ghz(millikelvin)); }

}  // namespace pfc::units

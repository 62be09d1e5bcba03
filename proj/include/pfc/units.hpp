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

// Unit conventions.
//
// Static energies (biases, couplers, schedules, spectra) are linear
// frequencies in GHz, i.e. E/h. Inverse temperatures that multiply those
// energies are therefore h/(k_B T) in GHz^-1. The dynamics layer converts to
// angular frequency (rad/ns) with kTwoPi and uses hbar/(k_B T) there; both
// products beta * energy are the same dimensionless number.

namespace pfc::units {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// CODATA 2018 exact values.
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kPlanck = 6.62607015e-34;   // J s

// k_B T / h in GHz for a temperature in millikelvin.
double thermal_frequency_ghz(double millikelvin);

// h / (k_B T) in GHz^-1; 12 mK gives 3.9994.
double beta_per_ghz(double millikelvin);

// hbar / (k_B T) in ns/rad, for use against angular frequencies.
double beta_angular(double millikelvin);

}  // namespace pfc::units

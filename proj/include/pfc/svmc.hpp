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

// Spin-vector Monte Carlo. Each qubit is a classical rotor with polar angle
// theta in [0, pi] and, for the spherical variants, an azimuth phi in
// [-pi, pi]. The energy replaces sigma^z by cos(theta) and sigma^x by
// sin(theta) (planar) or cos(phi) sin(theta) (spherical).

#include "pfc/bootstrap.hpp"
#include "pfc/ising.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace pfc::svmc {

enum class Variant { kSvmc, kSvmcTf, kSphericalSvmc, kSphericalSvmcTf };

inline constexpr Variant kAllVariants[] = {Variant::kSvmc, Variant::kSvmcTf, Variant::kSphericalSvmc,
                                           Variant::kSphericalSvmcTf};

const char* to_string(Variant v);
Variant variant_from_string(std::string_view name);  // "svmc", "svmc-tf", "spherical-svmc", "spherical-svmc-tf"

constexpr bool is_spherical(Variant v) { return v == Variant::kSphericalSvmc || v == Variant::kSphericalSvmcTf; }
constexpr bool is_transverse_field(Variant v) { return v == Variant::kSvmcTf || v == Variant::kSphericalSvmcTf; }

using Rng = std::mt19937_64;

struct RotorState {
  std::vector<double> theta;
  std::vector<double> phi;  // empty for planar variants

  // theta = pi/2 (and phi = 0) on every qubit.
  static RotorState initial(int n_qubits, Variant v);
  int size() const { return static_cast<int>(theta.size()); }
};

double svmc_energy(const IsingProblem& problem, const AnnealSchedule& schedule, double s, const RotorState& state,
                   Variant v);

// min(A/B, 1), defined as 1 where B(s) = 0.
double tf_step_scale(const AnnealSchedule& schedule, double s);

// Fold an angle back into [0, pi] by reflection at both ends.
double reflect_theta(double theta);
// Wrap an angle periodically into [-pi, pi].
double wrap_phi(double phi);

struct Proposal {
  double theta = 0.0;
  double phi = 0.0;
};

struct SweepOptions {
  // Spherical variants only: keep phi at its current value.
  bool freeze_phi = false;
};

Proposal propose(Variant v, const RotorState& state, int j, double step_scale, Rng& rng,
                 const SweepOptions& options = {});

// One Metropolis sweep visiting every qubit once in a fresh random order.
// Returns the number of accepted proposals.
int metropolis_sweep(const IsingProblem& problem, const AnnealSchedule& schedule, double s, RotorState& state,
                     Variant v, double beta, Rng& rng, const SweepOptions& options = {});

// Sign of cos(theta) per qubit; |cos(theta)| below 1e-12 is a tie settled by
// a fair coin from rng.
SpinConfig readout(const RotorState& state, Rng& rng);

struct AnnealOptions {
  SweepOptions sweep;
  // Stop once the schedule passes this s (readout mid-anneal).
  double s_stop = 1.0;
};

// `sweeps` single sweeps at s_k = k / (sweeps - 1), k = 0..sweeps-1 (a lone
// sweep runs at s = 0), starting from RotorState::initial.
RotorState run_anneal(const IsingProblem& problem, const AnnealSchedule& schedule, Variant v, int sweeps,
                      double beta, Rng& rng, const AnnealOptions& options = {});

struct CampaignSpec {
  int sweeps = 1000;
  int n_samples = 20000;
  int repeats = 50;
  double temperature_mk = 12.0;
  std::uint64_t seed = 0;
  int bootstrap_resamples = 10000;
  int threads = 1;

  void validate() const;
};

// Independent stream per (seed, repeat, sample).
Rng sample_rng(std::uint64_t seed, int repeat, int sample);

struct CampaignResult {
  Estimate ground;
  Estimate manifold;
  std::vector<double> ground_per_repeat;
  std::vector<double> manifold_per_repeat;
  // Readout counts per computational basis index, summed over all samples.
  std::vector<std::uint64_t> histogram;
};

// repeats x n_samples independent anneals; per-repeat fractions of readouts
// equal to the census ground state, and separately to any first-excited
// state.
CampaignResult campaign(const IsingProblem& problem, const AnnealSchedule& schedule, Variant v,
                        const CampaignSpec& spec, const AnnealOptions& options = {});

}  // namespace pfc::svmc

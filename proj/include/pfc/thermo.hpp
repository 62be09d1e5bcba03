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

// Exact classical thermodynamics of the PFC by the transfer-matrix method.
//
// Each subsystem i carries the pair (a_i, b_i). The four subsystem states are
// ordered as
//
//   0: (a, b) = (+1, +1)    1: (-1, +1)    2: (+1, -1)    3: (-1, -1)
//
// which is the order under which Z = v W^(M-1) v^T reproduces the Gibbs sum.
// The on-site energy is split symmetrically between neighbouring transfer
// factors, so v holds the square roots of the on-site Boltzmann weights and W
// is symmetric.

#include "pfc/ising.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace pfc::thermo {

inline constexpr std::array<std::array<int, 2>, 4> kSubsystemStates{{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

// diag of (sigma_a + sigma_b) / 2 in the order above.
inline constexpr std::array<double, 4> kSubsystemMagnetization{1.0, 0.0, 0.0, -1.0};

// Above this beta*R, matrix products are evaluated with per-step rescaling.
inline constexpr double kLogDomainThreshold = 30.0;

struct TransferPair {
  Eigen::RowVector4d v;
  Eigen::Matrix4d W;
  double beta = 0.0;
  PfcParams params;
};

// Entries of v and W as logarithms; valid for every finite beta.
struct LogTransferPair {
  Eigen::RowVector4d log_v;
  Eigen::Matrix4d log_W;
  double beta = 0.0;
  PfcParams params;
};

// Throws kNonFinite when an entry would overflow a double; use
// log_transfer_pair in that regime.
TransferPair transfer_pair(const PfcParams& params, double beta);
LogTransferPair log_transfer_pair(const PfcParams& params, double beta);

// Z itself; throws kNonFinite if Z overflows. log_partition_function never does.
double partition_function(const PfcParams& params, double beta);
double log_partition_function(const PfcParams& params, double beta);

// <(sigma_a,i + sigma_b,i)/2> for subsystem i in 1..M.
double subsystem_magnetization(const PfcParams& params, double beta, int i);
double average_magnetization(const PfcParams& params, double beta);

// Largest |eigenvalue| of a general 4x4 matrix.
double spectral_radius(const Eigen::Matrix4d& W);

// ln(lambda_1) from the closed form
//   lambda_1 = X + sqrt(X^2 - 4 sinh(4 beta R)),
//   X = e^{2 beta R} cosh(beta R d) + cosh(beta R (2 - d)),
// evaluated without overflow.
double log_lambda1_closed_form(const PfcParams& params, double beta);

// ln of the spectral radius of W computed numerically, with W rescaled so
// large beta stays finite.
double log_lambda1_numeric(const PfcParams& params, double beta);

// Free energy per subsystem in the M -> infinity limit, -(1/beta) ln lambda_1.
double free_energy(const PfcParams& params, double beta);

// Brute-force Gibbs sums over all 2^n configurations; the reference against
// which every transfer-matrix quantity is checked. n <= 24.
struct GibbsSums {
  double log_Z = 0.0;
  std::vector<double> spin_mean;  // <s_q> per qubit
};
GibbsSums brute_force_gibbs(const IsingProblem& problem, double beta);

// Subsystem magnetization from a PFC brute-force result.
double brute_force_subsystem_magnetization(const PfcParams& params, const GibbsSums& sums, int i);

struct ThermoRow {
  PfcParams params;
  double beta = 0.0;
  double log_Z = 0.0;
  double free_energy = 0.0;
  double average_magnetization = 0.0;
};
ThermoRow thermo_row(const PfcParams& params, double beta);

}  // namespace pfc::thermo

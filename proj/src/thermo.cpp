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

#include "pfc/thermo.hpp"

#include "pfc/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pfc::thermo {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    fail(ErrorCode::kInvalidParams, "beta must be positive and finite, got " + std::to_string(beta));
}

// Row vector x * W^k with x and W stored as logarithms, rescaled at every
// step. Returns the scaled vector and accumulates the log scale in log_scale.
Eigen::RowVector4d scaled_power_left(const Eigen::RowVector4d& log_x, const Eigen::Matrix4d& log_W, int k,
                                     double& log_scale) {
  const double cx = log_x.maxCoeff();
  Eigen::RowVector4d x = (log_x.array() - cx).exp().matrix();
  const double cw = log_W.maxCoeff();
  const Eigen::Matrix4d W = (log_W.array() - cw).exp().matrix();
  log_scale = cx;
  for (int step = 0; step < k; ++step) {
    x = x * W;
    const double m = x.maxCoeff();
    x /= m;
    log_scale += cw + std::log(m);
  }
  return x;
}

// log(exp(a) + exp(b) + ...) for a short list.
double log_sum_exp(std::initializer_list<double> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

}  // namespace

LogTransferPair log_transfer_pair(const PfcParams& p, double beta) {
  p.validate();
  check_beta(beta);
  const double bR = beta * p.R;
  const double d = p.d;
  LogTransferPair t;
  t.beta = beta;
  t.params = p;
  t.log_v << 0.5 * bR * (d + 1.0), 0.5 * bR * (d - 3.0), 0.5 * bR * (1.0 - d), 0.5 * bR * (1.0 - d);
  // clang-format off
  t.log_W << bR * (d + 2.0), bR * d,         0.0,             0.0,
             bR * d,         bR * (d - 2.0), -2.0 * bR,       -2.0 * bR,
             0.0,            -2.0 * bR,      bR * (2.0 - d),  bR * (2.0 - d),
             0.0,            -2.0 * bR,      bR * (2.0 - d),  bR * (2.0 - d);
  // clang-format on
  return t;
}

TransferPair transfer_pair(const PfcParams& p, double beta) {
  const LogTransferPair lt = log_transfer_pair(p, beta);
  if (lt.log_W.maxCoeff() > std::log(std::numeric_limits<double>::max()))
    fail(ErrorCode::kNonFinite, "transfer matrix overflows at beta*R = " + std::to_string(beta * p.R) +
                                    "; use the log-domain form");
  TransferPair t;
  t.beta = beta;
  t.params = p;
  t.v = lt.log_v.array().exp().matrix();
  t.W = lt.log_W.array().exp().matrix();
  return t;
}

double log_partition_function(const PfcParams& p, double beta) {
  const LogTransferPair lt = log_transfer_pair(p, beta);
  if (beta * p.R <= kLogDomainThreshold) {
    const TransferPair t = transfer_pair(p, beta);
    Eigen::RowVector4d x = t.v;
    for (int k = 0; k + 1 < p.M; ++k) x = x * t.W;
    return std::log(x.dot(t.v));
  }
  double log_scale = 0.0;
  const Eigen::RowVector4d x = scaled_power_left(lt.log_v, lt.log_W, p.M - 1, log_scale);
  const double cv = lt.log_v.maxCoeff();
  const Eigen::RowVector4d v = (lt.log_v.array() - cv).exp().matrix();
  return log_scale + cv + std::log(x.dot(v));
}

double partition_function(const PfcParams& p, double beta) {
  const double log_z = log_partition_function(p, beta);
  if (log_z > std::log(std::numeric_limits<double>::max()))
    fail(ErrorCode::kNonFinite, "partition function overflows; request log Z instead");
  return std::exp(log_z);
}

double subsystem_magnetization(const PfcParams& p, double beta, int i) {
  p.validate();
  if (i < 1 || i > p.M)
    fail(ErrorCode::kIndexOutOfRange,
         "subsystem index " + std::to_string(i) + " outside 1.." + std::to_string(p.M));
  const LogTransferPair lt = log_transfer_pair(p, beta);
  // Left block v W^(i-1), right block (W^(M-i) v^T)^T = v W^(M-i) by symmetry.
  double ls = 0.0;
  double rs = 0.0;
  const Eigen::RowVector4d left = scaled_power_left(lt.log_v, lt.log_W, i - 1, ls);
  const Eigen::RowVector4d right = scaled_power_left(lt.log_v, lt.log_W, p.M - i, rs);
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < 4; ++k) {
    num += left[k] * kSubsystemMagnetization[k] * right[k];
    den += left[k] * right[k];
  }
  return num / den;
}

double average_magnetization(const PfcParams& p, double beta) {
  double acc = 0.0;
  for (int i = 1; i <= p.M; ++i) acc += subsystem_magnetization(p, beta, i);
  return acc / p.M;
}

double spectral_radius(const Eigen::Matrix4d& W) {
  if (!W.allFinite()) fail(ErrorCode::kNonFinite, "spectral_radius: matrix has non-finite entries");
  Eigen::EigenSolver<Eigen::Matrix4d> solver(W, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::kEigensolverFailure, "spectral_radius: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double log_lambda1_closed_form(const PfcParams& p, double beta) {
  p.validate();
  check_beta(beta);
  const double bR = beta * p.R;
  const double d = p.d;
  // X = (e^{bR(2+d)} + e^{bR(d-2)}) / 2 + e^{bR(2-d)}
  const double log_x = log_sum_exp({bR * (2.0 + d) - std::log(2.0), bR * (d - 2.0) - std::log(2.0), bR * (2.0 - d)});
  // 4 sinh(4 bR) / X^2 = 2 (e^{4bR} - e^{-4bR}) / X^2
  const double log_4sinh = std::log(2.0) + 4.0 * bR + std::log1p(-std::exp(-8.0 * bR));
  const double ratio = std::exp(log_4sinh - 2.0 * log_x);
  return log_x + std::log1p(std::sqrt(std::max(0.0, 1.0 - ratio)));
}

double log_lambda1_numeric(const PfcParams& p, double beta) {
  const LogTransferPair lt = log_transfer_pair(p, beta);
  const double c = lt.log_W.maxCoeff();
  const Eigen::Matrix4d W = (lt.log_W.array() - c).exp().matrix();
  return c + std::log(spectral_radius(W));
}

double free_energy(const PfcParams& p, double beta) { return -log_lambda1_closed_form(p, beta) / beta; }

GibbsSums brute_force_gibbs(const IsingProblem& problem, double beta) {
  check_beta(beta);
  const int n = problem.n_qubits();
  if (n > kMaxEnumerationQubits)
    fail(ErrorCode::kTooLarge, "brute-force Gibbs sum limited to 24 qubits, got " + std::to_string(n));
  const std::vector<double> energies = problem.diagonal();
  const double e_min = *std::min_element(energies.begin(), energies.end());
  GibbsSums out;
  out.spin_mean.assign(n, 0.0);
  double z = 0.0;
  for (std::uint64_t x = 0; x < energies.size(); ++x) {
    const double w = std::exp(-beta * (energies[x] - e_min));
    z += w;
    for (int q = 0; q < n; ++q) out.spin_mean[q] += ((x >> (n - 1 - q)) & 1U) ? -w : w;
  }
  for (double& m : out.spin_mean) m /= z;
  out.log_Z = std::log(z) - beta * e_min;
  return out;
}

double brute_force_subsystem_magnetization(const PfcParams& p, const GibbsSums& sums, int i) {
  if (i < 1 || i > p.M) fail(ErrorCode::kIndexOutOfRange, "subsystem index out of range");
  return 0.5 * (sums.spin_mean[aux_qubit(i - 1)] + sums.spin_mean[backbone_qubit(p, i - 1)]);
}

ThermoRow thermo_row(const PfcParams& p, double beta) {
  return {p, beta, log_partition_function(p, beta), free_energy(p, beta), average_magnetization(p, beta)};
}

}  // namespace pfc::thermo

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

// Density-matrix dynamics under H(s(t)), s = t / t_anneal: closed
// (von Neumann) and open (Davies-type adiabatic master equation with an
// Ohmic bath coupling through sigma^z on every qubit).
//
// Hamiltonians are built in GHz and multiplied by 2 pi at this boundary, so
// the dynamics runs in rad/ns with times in ns.

#include "pfc/ising.hpp"
#include "pfc/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pfc::ame {

using Complex = std::complex<double>;
using DensityMatrix = Eigen::MatrixXcd;

// How the bath spectral density reads its frequency arguments.
//   kAngular: omega, omega_c in rad/ns and beta = hbar / (k_B T).
//   kLinear:  omega, omega_c in GHz and beta = h / (k_B T).
// Either way the resulting rate is used per ns.
enum class BathUnits { kAngular, kLinear };

const char* to_string(BathUnits u);
BathUnits bath_units_from_string(const std::string& name);

struct BathParams {
  double temperature_mk = 12.0;
  double omega_c_ghz = 4.0;
  double eta_g2 = 1e-3;
  BathUnits units = BathUnits::kAngular;

  void validate() const;
  double beta() const;     // in the reciprocal of the convention's unit
  double omega_c() const;  // in the convention's unit
  // Converts a gap in GHz to the convention's frequency unit.
  double omega_from_ghz(double ghz) const;
};

// 2 pi eta g^2 omega exp(-|omega|/omega_c) / (1 - exp(-beta omega)), with the
// omega -> 0 limit 2 pi eta g^2 / beta. omega is in the convention's unit.
double bath_gamma(double omega, const BathParams& bath);

inline constexpr double kDefaultGapTol = 1e-6;  // GHz

struct LindbladEntry {
  int l = 0;  // to
  int k = 0;  // from
  double amplitude = 0.0;  // <E_l| sigma^z_j |E_k>
};

struct LindbladChannel {
  double omega_ghz = 0.0;  // E_k - E_l, bin representative
  int qubit = 0;
  std::vector<LindbladEntry> entries;
};

// For each qubit and each bin of Bohr frequencies E_k - E_l (bins chained
// within gap_tol), the operator sum_{(k,l) in bin} <E_l|sz|E_k> |E_l><E_k|.
// `levels` limits the transitions to the lowest levels (<= 0: all).
std::vector<LindbladChannel> lindblad_set(const spectral::SpectralSnapshot& snap, int n_qubits,
                                          double gap_tol = kDefaultGapTol, int levels = 0);

// <E_l| sigma^z_j |E_k> for every level pair, one matrix per qubit.
std::vector<Eigen::MatrixXd> sigma_z_elements(const spectral::SpectralSnapshot& snap, int n_qubits);

// The Davies generator of lindblad_set(snap, ...) in the snapshot's
// eigenbasis, Lamb shift omitted:
//   D(r) = sum_{bins, j} gamma(omega) [L r L^T - {L^T L, r} / 2].
// Channels are folded over qubits into explicit jump terms so apply() is cheap.
class DaviesGenerator {
 public:
  DaviesGenerator(const spectral::SpectralSnapshot& snap, int n_qubits, const BathParams& bath,
                  double gap_tol = kDefaultGapTol, int levels = 0);

  // r and the result are in the eigenbasis of the snapshot.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& r) const;
  // exp(tau D) r by classical RK4 with substeps keeping tau ||D|| / steps <= 0.1.
  void advance(Eigen::MatrixXcd& r, double tau) const;

  std::size_t jump_terms() const { return terms_.size(); }

 private:
  struct Term {
    int l, lp, k, kp;
    double c;
  };
  std::vector<Term> terms_;
  Eigen::MatrixXd g_;  // sum gamma L^T L
  double norm_ = 0.0;
};

struct Trajectory {
  std::vector<double> times;  // s values
  std::vector<Eigen::VectorXd> populations;  // <E_j|rho|E_j>, retained levels
  DensityMatrix final_rho;
  int steps = 0;
  int rejected = 0;
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step_ns = 1e-3;
  double min_step_ns = 1e-9;
  long max_steps = 50'000'000;
  double gap_tol = kDefaultGapTol;
  // Number of instantaneous levels reported in Trajectory::populations.
  // <= 0 reports all of them.
  int report_levels = 0;
  // Truncates the bath-coupled transitions to the lowest levels; <= 0 keeps
  // the full spectrum. Only worth it above 64 levels, at some cost in
  // accuracy.
  int bath_levels = 0;
  // When set (0..1), H is frozen at this s for the whole run and the output
  // grid is read as fractions of t_anneal.
  double frozen_s = -1.0;
};

// |+><+|^(x n).
DensityMatrix plus_state(int n_qubits);

// Output grid with `n` uniform points on [0, 1] plus `n_dense` uniform points
// on [s_center - half_width, s_center + half_width] (clipped), merged and
// sorted.
std::vector<double> output_grid(int n, double s_center = -1.0, double half_width = 0.05, int n_dense = 0);

Trajectory evolve_closed(const spectral::TfimHamiltonian& hamiltonian, double t_anneal_ns,
                         const std::vector<double>& grid, const EvolveOptions& options = {});

Trajectory evolve_ame(const spectral::TfimHamiltonian& hamiltonian, const BathParams& bath, double t_anneal_ns,
                      const std::vector<double>& grid, const EvolveOptions& options = {});

struct RatePoint {
  double s = 0.0;
  double omega10_ghz = 0.0;
  double matrix_element = 0.0;  // sum_j |<E0|sz_j|E1>|^2
  double gamma10 = 0.0;         // per ns
};

std::vector<RatePoint> transition_rate_profile(const spectral::TfimHamiltonian& hamiltonian, const BathParams& bath,
                                               const std::vector<double>& s_grid);

// t_anneal ~ c / gap_min^2, with c fixed so that PFC(M=3, d=0.3) under the
// default schedule maps to 20 ns.
double adiabatic_constant();
double adiabatic_time_estimate(const spectral::TfimHamiltonian& hamiltonian);
double adiabatic_time_from_gap(double gap_ghz);

struct DensityChecks {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double purity = 0.0;
};

DensityChecks check_density(const DensityMatrix& rho);

}  // namespace pfc::ame

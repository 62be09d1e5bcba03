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

// Dense transverse-field Ising Hamiltonian
//
//   H(s) = -A(s) sum_j sigma^x_j + B(s) H_P
//
// in the computational basis (qubit q is bit n-1-q, bit 0 is |0>, spin +1).
// Every entry is real, so the matrices are real symmetric.

#include "pfc/ising.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace pfc::spectral {

inline constexpr int kMaxDenseQubits = 12;

// Near-degeneracy threshold for E1 - E0, in GHz.
inline constexpr double kDegeneracyTol = 1e-9;

class TfimHamiltonian {
 public:
  TfimHamiltonian(IsingProblem problem, AnnealSchedule schedule);

  Eigen::MatrixXd at(double s) const;

  const IsingProblem& problem() const { return problem_; }
  const AnnealSchedule& schedule() const { return schedule_; }
  int n_qubits() const { return problem_.n_qubits(); }
  Eigen::Index dim() const { return diagonal_.size(); }

  // -sum_j sigma^x_j and the diagonal of H_P.
  const Eigen::MatrixXd& driver() const { return driver_; }
  const Eigen::VectorXd& problem_diagonal() const { return diagonal_; }

 private:
  IsingProblem problem_;
  AnnealSchedule schedule_;
  Eigen::MatrixXd driver_;
  Eigen::VectorXd diagonal_;
};

Eigen::MatrixXd build_hamiltonian(const IsingProblem& problem, const AnnealSchedule& schedule, double s);

// Same operator assembled term by term from explicit Kronecker products of
// 2x2 Pauli matrices. Slow; used as an independent cross-check.
Eigen::MatrixXd build_hamiltonian_kron(const IsingProblem& problem, const AnnealSchedule& schedule, double s);

struct SpectralSnapshot {
  double s = 0.0;
  Eigen::VectorXd eigenvalues;   // ascending, GHz; first k levels
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal
  int k = 0;

  double gap() const { return eigenvalues[1] - eigenvalues[0]; }
  bool near_degenerate() const { return k > 1 && gap() < kDegeneracyTol; }
  Eigen::VectorXd ground() const { return eigenvectors.col(0); }
};

// k <= 0 keeps every level.
SpectralSnapshot snapshot(const TfimHamiltonian& hamiltonian, double s, int k = 0);
SpectralSnapshot snapshot(const IsingProblem& problem, const AnnealSchedule& schedule, double s, int k = 0);

// E1(s) - E0(s).
double gap_at(const TfimHamiltonian& hamiltonian, double s);

struct MinGap {
  double s_min = 0.0;
  double gap = 0.0;
};

// Coarse scan at `coarse_step` over (0, 1) followed by golden-section
// refinement of the best bracket down to `s_tol`.
MinGap min_gap(const TfimHamiltonian& hamiltonian, double coarse_step = 1e-2, double s_tol = 1e-7);
MinGap min_gap(const IsingProblem& problem, const AnnealSchedule& schedule);

struct Magnetization {
  double value = 0.0;
  bool near_degenerate = false;
};

// (1/N) sum_j <E0(s)| sigma^z_j |E0(s)>.
Magnetization instantaneous_magnetization(const TfimHamiltonian& hamiltonian, double s);
Magnetization instantaneous_magnetization(const IsingProblem& problem, const AnnealSchedule& schedule, double s);
double magnetization_of(const Eigen::VectorXd& state, int n_qubits);

struct PhaseDiagram {
  std::vector<double> d_grid;
  std::vector<double> s_grid;
  Eigen::MatrixXd magnetization;  // rows: d, cols: s
  // Per d row, the s values (linearly interpolated) where the sign flips.
  std::vector<std::vector<double>> sign_changes;
};

PhaseDiagram phase_diagram(int M, double R, const std::vector<double>& d_grid, const std::vector<double>& s_grid,
                           const AnnealSchedule& schedule);

// |<E0|config>|.
double ground_overlap(const SpectralSnapshot& snap, const SpinConfig& config);

struct GibbsReference {
  Eigen::MatrixXd rho;
  double ground_population = 0.0;  // <E0| rho |E0>
};

// exp(-beta H(s)) / Z with beta in GHz^-1, evaluated with E0 subtracted.
GibbsReference gibbs_state(const TfimHamiltonian& hamiltonian, double s, double beta);
// P0 only, from the spectrum of an existing snapshot.
double gibbs_ground_population(const SpectralSnapshot& snap, double beta);

}  // namespace pfc::spectral

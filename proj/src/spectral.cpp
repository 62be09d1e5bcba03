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

#include "pfc/spectral.hpp"

#include "pfc/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace pfc::spectral {
namespace {

void check_dense(const IsingProblem& problem) {
  if (problem.n_qubits() > kMaxDenseQubits)
    fail(ErrorCode::kTooLarge, "dense Hamiltonian limited to " + std::to_string(kMaxDenseQubits) +
                                   " qubits, got " + std::to_string(problem.n_qubits()));
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Operator acting as `op` on the listed qubits and identity elsewhere.
Eigen::MatrixXd embed(int n, std::initializer_list<int> qubits, const Eigen::Matrix2d& op) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    bool hit = false;
    for (int t : qubits) hit = hit || t == q;
    out = kron(out, hit ? Eigen::MatrixXd(op) : Eigen::MatrixXd(Eigen::Matrix2d::Identity()));
  }
  return out;
}

}  // namespace

TfimHamiltonian::TfimHamiltonian(IsingProblem problem, AnnealSchedule schedule)
    : problem_(std::move(problem)), schedule_(std::move(schedule)) {
  check_dense(problem_);
  const int n = problem_.n_qubits();
  const Eigen::Index dim = Eigen::Index{1} << n;
  driver_ = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x)
    for (int q = 0; q < n; ++q) driver_(x ^ (Eigen::Index{1} << (n - 1 - q)), x) -= 1.0;
  const std::vector<double> diag = problem_.diagonal();
  diagonal_ = Eigen::Map<const Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size()));
}

Eigen::MatrixXd TfimHamiltonian::at(double s) const {
  Eigen::MatrixXd h = schedule_.A(s) * driver_;
  h.diagonal() += schedule_.B(s) * diagonal_;
  return h;
}

Eigen::MatrixXd build_hamiltonian(const IsingProblem& problem, const AnnealSchedule& schedule, double s) {
  return TfimHamiltonian(problem, schedule).at(s);
}

Eigen::MatrixXd build_hamiltonian_kron(const IsingProblem& problem, const AnnealSchedule& schedule, double s) {
  check_dense(problem);
  const int n = problem.n_qubits();
  Eigen::Matrix2d sx;
  sx << 0, 1, 1, 0;
  Eigen::Matrix2d sz;
  sz << 1, 0, 0, -1;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd hp = Eigen::MatrixXd::Zero(dim, dim);
  // Reverse order relative to build_hamiltonian: couplers first, qubits last to first.
  for (const auto& c : problem.couplings()) {
    hp += c.value * embed(n, {c.i}, sz) * embed(n, {c.j}, sz);
  }
  Eigen::MatrixXd hx = Eigen::MatrixXd::Zero(dim, dim);
  for (int q = n - 1; q >= 0; --q) {
    hp += problem.h()[q] * embed(n, {q}, sz);
    hx += embed(n, {q}, sx);
  }
  return -schedule.A(s) * hx + schedule.B(s) * hp;
}

SpectralSnapshot snapshot(const TfimHamiltonian& hamiltonian, double s, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian.at(s));
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver failed at s = " << s;
    fail(ErrorCode::kEigensolverFailure, msg.str());
  }
  const auto dim = static_cast<int>(hamiltonian.dim());
  if (k > dim) fail(ErrorCode::kInvalidParams, "snapshot: k exceeds the Hilbert-space dimension");
  const int keep = k <= 0 ? dim : k;
  SpectralSnapshot snap;
  snap.s = s;
  snap.k = keep;
  snap.eigenvalues = solver.eigenvalues().head(keep);
  snap.eigenvectors = solver.eigenvectors().leftCols(keep);
  return snap;
}

SpectralSnapshot snapshot(const IsingProblem& problem, const AnnealSchedule& schedule, double s, int k) {
  return snapshot(TfimHamiltonian(problem, schedule), s, k);
}

double gap_at(const TfimHamiltonian& hamiltonian, double s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian.at(s), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigensolver failed at s = " << s;
    fail(ErrorCode::kEigensolverFailure, msg.str());
  }
  return solver.eigenvalues()[1] - solver.eigenvalues()[0];
}

MinGap min_gap(const TfimHamiltonian& hamiltonian, double coarse_step, double s_tol) {
  const int n_coarse = static_cast<int>(std::lround(1.0 / coarse_step));
  int best = 1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int k = 1; k < n_coarse; ++k) {
    const double g = gap_at(hamiltonian, k * coarse_step);
    if (g < best_gap) {
      best_gap = g;
      best = k;
    }
  }
  double lo = std::max(0.0, (best - 1) * coarse_step);
  double hi = std::min(1.0, (best + 1) * coarse_step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = gap_at(hamiltonian, x1);
  double f2 = gap_at(hamiltonian, x2);
  while (hi - lo > s_tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = gap_at(hamiltonian, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = gap_at(hamiltonian, x2);
    }
  }
  MinGap out;
  out.s_min = 0.5 * (lo + hi);
  out.gap = gap_at(hamiltonian, out.s_min);
  if (best_gap < out.gap) {
    out.s_min = best * coarse_step;
    out.gap = best_gap;
  }
  return out;
}

MinGap min_gap(const IsingProblem& problem, const AnnealSchedule& schedule) {
  return min_gap(TfimHamiltonian(problem, schedule));
}

double magnetization_of(const Eigen::VectorXd& state, int n_qubits) {
  double acc = 0.0;
  for (Eigen::Index x = 0; x < state.size(); ++x) {
    // sum_j s_j for basis state x
    const int down = __builtin_popcountll(static_cast<unsigned long long>(x));
    acc += state[x] * state[x] * (n_qubits - 2 * down);
  }
  return acc / n_qubits;
}

Magnetization instantaneous_magnetization(const TfimHamiltonian& hamiltonian, double s) {
  const SpectralSnapshot snap = snapshot(hamiltonian, s, 2);
  return {magnetization_of(snap.ground(), hamiltonian.n_qubits()), snap.near_degenerate()};
}

Magnetization instantaneous_magnetization(const IsingProblem& problem, const AnnealSchedule& schedule, double s) {
  return instantaneous_magnetization(TfimHamiltonian(problem, schedule), s);
}

PhaseDiagram phase_diagram(int M, double R, const std::vector<double>& d_grid, const std::vector<double>& s_grid,
                           const AnnealSchedule& schedule) {
  if (d_grid.empty() || s_grid.empty()) fail(ErrorCode::kInvalidParams, "phase_diagram: empty grid");
  PhaseDiagram out;
  out.d_grid = d_grid;
  out.s_grid = s_grid;
  out.magnetization.resize(static_cast<Eigen::Index>(d_grid.size()), static_cast<Eigen::Index>(s_grid.size()));
  out.sign_changes.resize(d_grid.size());
  for (std::size_t r = 0; r < d_grid.size(); ++r) {
    const TfimHamiltonian h(build_pfc({M, R, d_grid[r]}), schedule);
    for (std::size_t c = 0; c < s_grid.size(); ++c)
      out.magnetization(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          instantaneous_magnetization(h, s_grid[c]).value;
    for (std::size_t c = 1; c < s_grid.size(); ++c) {
      const double m0 = out.magnetization(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 1));
      const double m1 = out.magnetization(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      // Values within rounding of zero (the s = 0 column) do not count as a sign.
      constexpr double kZero = 1e-12;
      if ((m0 < -kZero && m1 > kZero) || (m0 > kZero && m1 < -kZero)) {
        const double t = m0 / (m0 - m1);
        out.sign_changes[r].push_back(s_grid[c - 1] + t * (s_grid[c] - s_grid[c - 1]));
      }
    }
  }
  return out;
}

double ground_overlap(const SpectralSnapshot& snap, const SpinConfig& config) {
  const auto idx = static_cast<Eigen::Index>(config.index());
  if (idx >= snap.eigenvectors.rows()) fail(ErrorCode::kLengthMismatch, "configuration does not match snapshot");
  return std::abs(snap.eigenvectors(idx, 0));
}

double gibbs_ground_population(const SpectralSnapshot& snap, double beta) {
  double z = 0.0;
  for (Eigen::Index k = 0; k < snap.eigenvalues.size(); ++k)
    z += std::exp(-beta * (snap.eigenvalues[k] - snap.eigenvalues[0]));
  return 1.0 / z;
}

GibbsReference gibbs_state(const TfimHamiltonian& hamiltonian, double s, double beta) {
  if (!(beta > 0.0)) fail(ErrorCode::kInvalidParams, "gibbs_state: beta must be positive");
  const SpectralSnapshot snap = snapshot(hamiltonian, s);
  Eigen::VectorXd w = (-(beta * (snap.eigenvalues.array() - snap.eigenvalues[0]))).exp();
  w /= w.sum();
  GibbsReference out;
  out.rho = snap.eigenvectors * w.asDiagonal() * snap.eigenvectors.transpose();
  out.ground_population = w[0];
  return out;
}

}  // namespace pfc::spectral

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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pfc {

// Parameters of the perturbed ferromagnetic chain: M two-qubit subsystems,
// energy scale R (GHz) and perturbation d. Valid for M >= 2, R > 0, 0 < d < 1.
struct PfcParams {
  int M = 2;
  double R = 1.0;
  double d = 0.1;

  void validate() const;
  int n_qubits() const { return 2 * M; }
};

struct Coupling {
  int i = 0;  // i < j
  int j = 0;
  double value = 0.0;
};

// Classical Ising problem sum_i h_i s_i + sum_{i<j} J_ij s_i s_j in GHz.
// Immutable after construction.
class IsingProblem {
 public:
  using Neighbour = std::pair<int, double>;

  // Couplings are canonicalised to i < j; repeated pairs are summed.
  IsingProblem(int n_qubits, std::vector<double> h, std::vector<Coupling> couplings,
               std::string label = {});

  int n_qubits() const { return n_qubits_; }
  std::span<const double> h() const { return h_; }
  std::span<const Coupling> couplings() const { return couplings_; }
  const std::string& label() const { return label_; }

  // Couplers touching qubit q, as (other qubit, J).
  std::span<const Neighbour> neighbours(int q) const { return adjacency_[q]; }

  // Energy of the computational basis state with the given index; qubit q is
  // bit (n-1-q) and a set bit means spin -1.
  double basis_energy(std::uint64_t index) const;

  // Diagonal of the problem Hamiltonian in the computational basis.
  std::vector<double> diagonal() const;

 private:
  int n_qubits_;
  std::vector<double> h_;
  std::vector<Coupling> couplings_;
  std::string label_;
  std::vector<std::vector<Neighbour>> adjacency_;
};

// Spin configuration with entries +1 (|0>) or -1 (|1>).
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<int> spins);

  static SpinConfig all_up(int n);
  static SpinConfig from_index(std::uint64_t index, int n);

  std::uint64_t index() const;
  int size() const { return static_cast<int>(spins_.size()); }
  int operator[](int q) const { return spins_[q]; }
  std::span<const int> spins() const { return spins_; }
  std::string str() const;  // '+'/'-' per qubit

  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

 private:
  std::vector<int> spins_;
};

// A(s) and B(s) in GHz over normalised time s in [0, 1].
struct AnnealSchedule {
  std::function<double(double)> A;
  std::function<double(double)> B;

  // A(s) = scale (1 - s), B(s) = scale s.
  static AnnealSchedule linear(double scale = 3.0);
};

// Qubit order is (a_1..a_M, b_1..b_M): auxiliaries first, then backbone.
IsingProblem build_pfc(const PfcParams& params);

inline int aux_qubit(int i) { return i; }
inline int backbone_qubit(const PfcParams& p, int i) { return p.M + i; }

double classical_energy(const IsingProblem& problem, const SpinConfig& config);

int hamming(const SpinConfig& a, const SpinConfig& b);

struct LowEnergyCensus {
  SpinConfig ground;
  double ground_energy = 0.0;
  int ground_degeneracy = 0;
  std::vector<SpinConfig> first_excited;
  double first_excited_energy = 0.0;
  double gap = 0.0;
};

inline constexpr int kMaxEnumerationQubits = 24;

// Exhaustive enumeration of the two lowest classical levels. Energies within
// `tol` GHz are treated as degenerate.
LowEnergyCensus low_energy_census(const IsingProblem& problem, double tol = 1e-9);

// {"n_qubits", "h": [[i, v]...], "J": [[i, j, v]...], "label"}
std::string problem_to_json(const IsingProblem& problem);
IsingProblem problem_from_json(const std::string& text);

}  // namespace pfc

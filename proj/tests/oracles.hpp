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
// Test-side reference implementations, written from the definitions and
// sharing no code with the library beyond the problem container.
#include "pfc/ising.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

// Spin of qubit q in basis state idx: qubit q is bit n-1-q, set bit = -1.
inline int spin(std::uint64_t idx, int q, int n) { return (idx >> (n - 1 - q)) & 1 ? -1 : 1; }

// PFC energy straight from the definition: aux bias -R, backbone bias
// R(1-d), aux-backbone and backbone-backbone couplers -R.
inline double pfc_energy(int M, double R, double d, std::uint64_t idx) {
  const int n = 2 * M;
  double e = 0;
  for (int i = 0; i < M; ++i) {
    const int a = spin(idx, i, n), b = spin(idx, M + i, n);
    e += -R * a + R * (1 - d) * b - R * a * b;
    if (i + 1 < M) e += -R * b * spin(idx, M + i + 1, n);
  }
  return e;
}

struct Gibbs {
  double log_Z = 0;
  std::vector<double> sub_mag;  // per subsystem <(a+b)/2>
  double avg_mag = 0;
};

// Exhaustive Gibbs sums with a log-sum-exp shift.
inline Gibbs pfc_gibbs(int M, double R, double d, double beta) {
  const int n = 2 * M;
  const std::uint64_t dim = 1ull << n;
  double e_min = 1e300;
  for (std::uint64_t x = 0; x < dim; ++x) e_min = std::min(e_min, pfc_energy(M, R, d, x));
  double z = 0;
  std::vector<double> m(M, 0.0);
  for (std::uint64_t x = 0; x < dim; ++x) {
    const double w = std::exp(-beta * (pfc_energy(M, R, d, x) - e_min));
    z += w;
    for (int i = 0; i < M; ++i) m[i] += w * 0.5 * (spin(x, i, n) + spin(x, M + i, n));
  }
  Gibbs g;
  g.log_Z = std::log(z) - beta * e_min;
  for (int i = 0; i < M; ++i) {
    g.sub_mag.push_back(m[i] / z);
    g.avg_mag += m[i] / z / M;
  }
  return g;
}

// H(s) = -A sum sigma^x + B H_P assembled by flipping bits of each basis state.
inline Eigen::MatrixXd tfim(const pfc::IsingProblem& p, double A, double B) {
  const int n = p.n_qubits();
  const std::uint64_t dim = 1ull << n;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    double e = 0;
    for (int q = 0; q < n; ++q) e += p.h()[q] * spin(x, q, n);
    for (const auto& c : p.couplings()) e += c.value * spin(x, c.i, n) * spin(x, c.j, n);
    H(x, x) += B * e;
    for (int q = 0; q < n; ++q) H(x ^ (1ull << (n - 1 - q)), x) += -A;
  }
  return H;
}

// Product state with per-qubit Bloch angles: cos(t/2)|0> + e^{i p} sin(t/2)|1>.
inline Eigen::VectorXcd product_state(const std::vector<double>& theta, const std::vector<double>& phi) {
  const int n = static_cast<int>(theta.size());
  Eigen::VectorXcd v(1ll << n);
  for (std::int64_t x = 0; x < v.size(); ++x) {
    std::complex<double> amp = 1;
    for (int q = 0; q < n; ++q)
      amp *= spin(x, q, n) == 1 ? std::complex<double>(std::cos(theta[q] / 2))
                                : std::polar(std::sin(theta[q] / 2), phi[q]);
    v[x] = amp;
  }
  return v;
}

// sigma^z_q as a diagonal over the computational basis.
inline Eigen::VectorXd sigma_z(int q, int n) {
  Eigen::VectorXd d(1ll << n);
  for (std::int64_t x = 0; x < d.size(); ++x) d[x] = spin(x, q, n);
  return d;
}

// Readout distribution of the planar rotor Gibbs measure
// exp(-beta E(theta)) dtheta at fixed A, B, by midpoint quadrature on a G^n
// grid.
inline std::vector<double> rotor_gibbs_readout(const pfc::IsingProblem& p, double A, double B, double beta, int G) {
  const double pi = 3.14159265358979323846;
  const int n = p.n_qubits();
  std::vector<double> c(1u << n, 0.0), cs(G), sn(G);
  for (int i = 0; i < G; ++i) {
    cs[i] = std::cos((i + 0.5) * pi / G);
    sn[i] = std::sin((i + 0.5) * pi / G);
  }
  std::vector<int> idx(n, 0);
  double z = 0;
  for (;;) {
    double e = 0;
    int x = 0;
    for (int q = 0; q < n; ++q) {
      e += -A * sn[idx[q]] + B * p.h()[q] * cs[idx[q]];
      x = 2 * x + (cs[idx[q]] < 0);
    }
    for (const auto& cp : p.couplings()) e += B * cp.value * cs[idx[cp.i]] * cs[idx[cp.j]];
    const double w = std::exp(-beta * e);
    c[x] += w;
    z += w;
    int q = n - 1;
    while (q >= 0 && ++idx[q] == G) idx[q--] = 0;
    if (q < 0) break;
  }
  for (auto& v : c) v /= z;
  return c;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return tv / 2;
}

}  // namespace oracle

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

#include "pfc/semiclassical.hpp"

#include "pfc/error.hpp"
#include "pfc/units.hpp"

#include <algorithm>
#include <cmath>

namespace pfc::semiclassical {

FullCoherentState FullCoherentState::from_pfc_angles(const PfcParams& p, const CoherentAngles& angles) {
  FullCoherentState st;
  st.theta.assign(p.n_qubits(), angles.theta_b);
  st.phi.assign(p.n_qubits(), 0.0);
  for (int i = 0; i < p.M; ++i) st.theta[aux_qubit(i)] = angles.theta_a;
  return st;
}

Eigen::VectorXcd coherent_vector(const FullCoherentState& st) {
  const int n = static_cast<int>(st.theta.size());
  if (st.phi.size() != st.theta.size()) fail(ErrorCode::kLengthMismatch, "theta and phi lengths differ");
  if (n > spectral::kMaxDenseQubits) fail(ErrorCode::kTooLarge, "coherent_vector: too many qubits");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
  for (int q = 0; q < n; ++q) {
    const std::complex<double> up = std::cos(0.5 * st.theta[q]);
    const std::complex<double> down = std::polar(1.0, st.phi[q]) * std::sin(0.5 * st.theta[q]);
    Eigen::VectorXcd next(2 * psi.size());
    next.head(psi.size()) = up * psi;
    next.tail(psi.size()) = down * psi;
    // Qubit q ends up as the least significant bit so far; reorder so that
    // qubit 0 is the most significant bit of the final index.
    Eigen::VectorXcd interleaved(next.size());
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
      interleaved[2 * x] = next[x];
      interleaved[2 * x + 1] = next[psi.size() + x];
    }
    psi = std::move(interleaved);
  }
  return psi;
}

Eigen::VectorXcd coherent_vector(const PfcParams& p, const CoherentAngles& angles) {
  return coherent_vector(FullCoherentState::from_pfc_angles(p, angles));
}

double potential(const IsingProblem& problem, const AnnealSchedule& schedule, double s,
                 const FullCoherentState& st) {
  const int n = problem.n_qubits();
  if (static_cast<int>(st.theta.size()) != n || static_cast<int>(st.phi.size()) != n)
    fail(ErrorCode::kLengthMismatch, "coherent state does not match problem size");
  double transverse = 0.0;
  double zz = 0.0;
  for (int q = 0; q < n; ++q) {
    transverse += std::sin(st.theta[q]) * std::cos(st.phi[q]);
    zz += problem.h()[q] * std::cos(st.theta[q]);
  }
  for (const auto& c : problem.couplings()) zz += c.value * std::cos(st.theta[c.i]) * std::cos(st.theta[c.j]);
  return -schedule.A(s) * transverse + schedule.B(s) * zz;
}

double potential(const PfcParams& p, const AnnealSchedule& schedule, double s, const CoherentAngles& ang) {
  const double ca = std::cos(ang.theta_a);
  const double cb = std::cos(ang.theta_b);
  const double transverse = p.M * (std::sin(ang.theta_a) + std::sin(ang.theta_b));
  const double problem = p.R * (p.M * (1.0 - p.d) * cb - p.M * ca - p.M * ca * cb - (p.M - 1) * cb * cb);
  return -schedule.A(s) * transverse + schedule.B(s) * problem;
}

AngleGrid AngleGrid::square(int n) {
  if (n < 3) fail(ErrorCode::kInvalidParams, "angle grid needs at least 3 points per axis");
  AngleGrid g;
  for (int k = 0; k < n; ++k) g.theta_a.push_back(-units::kPi + 2.0 * units::kPi * k / (n - 1));
  g.theta_b = g.theta_a;
  return g;
}

namespace {

Landscape fill(const AngleGrid& grid, double s, const std::function<double(const CoherentAngles&)>& f) {
  Landscape land;
  land.s = s;
  land.grid = grid;
  const auto na = static_cast<Eigen::Index>(grid.theta_a.size());
  const auto nb = static_cast<Eigen::Index>(grid.theta_b.size());
  land.values.resize(na, nb);
  land.argmin.value = std::numeric_limits<double>::infinity();
  for (Eigen::Index ia = 0; ia < na; ++ia) {
    for (Eigen::Index ib = 0; ib < nb; ++ib) {
      const double v = f({grid.theta_a[ia], grid.theta_b[ib]});
      land.values(ia, ib) = v;
      if (v < land.argmin.value) land.argmin = {static_cast<int>(ia), static_cast<int>(ib), v};
    }
  }
  return land;
}

}  // namespace

Landscape landscape(const PfcParams& p, const AnnealSchedule& schedule, double s, const AngleGrid& grid) {
  p.validate();
  return fill(grid, s, [&](const CoherentAngles& a) { return potential(p, schedule, s, a); });
}

double trace_norm_distance(const spectral::SpectralSnapshot& snap, const PfcParams& p, const CoherentAngles& angles) {
  const Eigen::VectorXcd psi = coherent_vector(p, angles);
  if (psi.size() != snap.eigenvectors.rows())
    fail(ErrorCode::kLengthMismatch, "snapshot dimension does not match the coherent state");
  const std::complex<double> overlap = snap.eigenvectors.col(0).cast<std::complex<double>>().dot(psi);
  return std::sqrt(std::max(0.0, 1.0 - std::norm(overlap)));
}

Landscape distance_landscape(const spectral::SpectralSnapshot& snap, const PfcParams& p, const AngleGrid& grid) {
  return fill(grid, snap.s, [&](const CoherentAngles& a) { return trace_norm_distance(snap, p, a); });
}

std::vector<GridPoint> local_minima(const Landscape& land) {
  const int na = static_cast<int>(land.values.rows()) - 1;
  const int nb = static_cast<int>(land.values.cols()) - 1;
  std::vector<GridPoint> out;
  for (int ia = 0; ia < na; ++ia) {
    for (int ib = 0; ib < nb; ++ib) {
      const double v = land.values(ia, ib);
      bool is_min = true;
      for (int da = -1; da <= 1 && is_min; ++da) {
        for (int db = -1; db <= 1; ++db) {
          if (da == 0 && db == 0) continue;
          const int ja = (ia + da + na) % na;
          const int jb = (ib + db + nb) % nb;
          if (!(v < land.values(ja, jb))) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) out.push_back({ia, ib, v});
    }
  }
  std::sort(out.begin(), out.end(), [](const GridPoint& a, const GridPoint& b) { return a.value < b.value; });
  return out;
}

CoherentAngles refine_minimum(const std::function<double(const CoherentAngles&)>& f, CoherentAngles x, double step,
                              double tol) {
  double fx = f(x);
  while (step > tol) {
    bool moved = false;
    for (const auto& [da, db] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
      const CoherentAngles y{x.theta_a + da * step, x.theta_b + db * step};
      const double fy = f(y);
      if (fy < fx) {
        x = y;
        fx = fy;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

std::vector<ScanPoint> line_scan(const std::function<double(const CoherentAngles&)>& f, const CoherentAngles& from,
                                 const CoherentAngles& to, int n_points) {
  if (n_points < 2) fail(ErrorCode::kInvalidParams, "line_scan needs at least 2 points");
  std::vector<ScanPoint> out;
  out.reserve(n_points);
  for (int k = 0; k < n_points; ++k) {
    const double t = static_cast<double>(k) / (n_points - 1);
    const CoherentAngles a{from.theta_a + t * (to.theta_a - from.theta_a),
                           from.theta_b + t * (to.theta_b - from.theta_b)};
    out.push_back({t, a, f(a)});
  }
  return out;
}

std::vector<ScanPoint> hyperplane_scan(const PfcParams& p, const AnnealSchedule& schedule, double s,
                                       const CoherentAngles& from, const CoherentAngles& to, int n_points) {
  return line_scan([&](const CoherentAngles& a) { return potential(p, schedule, s, a); }, from, to, n_points);
}

}  // namespace pfc::semiclassical

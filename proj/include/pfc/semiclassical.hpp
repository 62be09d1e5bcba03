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

// Spin-coherent product states and the semi-classical energy landscape.
//
// A qubit at polar angle theta and azimuth phi is
//   cos(theta/2) |0> + e^{i phi} sin(theta/2) |1>,
// so <sigma^z> = cos(theta) and <sigma^x> = sin(theta) cos(phi). The reduced
// two-angle form shares theta_a over all auxiliaries and theta_b over all
// backbone qubits, with phi = 0.

#include "pfc/ising.hpp"
#include "pfc/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

namespace pfc::semiclassical {

struct CoherentAngles {
  double theta_a = 0.0;
  double theta_b = 0.0;
};

struct FullCoherentState {
  std::vector<double> theta;
  std::vector<double> phi;

  static FullCoherentState from_pfc_angles(const PfcParams& params, const CoherentAngles& angles);
};

Eigen::VectorXcd coherent_vector(const FullCoherentState& state);
Eigen::VectorXcd coherent_vector(const PfcParams& params, const CoherentAngles& angles);

// <theta| H(s) |theta> for a product state, any Ising problem.
double potential(const IsingProblem& problem, const AnnealSchedule& schedule, double s,
                 const FullCoherentState& state);

// Closed form of the two-angle PFC potential:
//   V = -A M (sin ta + sin tb)
//       + B R [M (1-d) cos tb - M cos ta - M cos ta cos tb - (M-1) cos^2 tb].
double potential(const PfcParams& params, const AnnealSchedule& schedule, double s, const CoherentAngles& angles);

struct AngleGrid {
  std::vector<double> theta_a;
  std::vector<double> theta_b;

  // n x n points spanning [-pi, pi] in both angles, endpoints included.
  static AngleGrid square(int n = 201);
};

struct GridPoint {
  int ia = 0;
  int ib = 0;
  double value = 0.0;
};

struct Landscape {
  double s = 0.0;
  AngleGrid grid;
  Eigen::MatrixXd values;  // (theta_a index, theta_b index)
  GridPoint argmin;

  CoherentAngles angles(const GridPoint& p) const { return {grid.theta_a[p.ia], grid.theta_b[p.ib]}; }
};

Landscape landscape(const PfcParams& params, const AnnealSchedule& schedule, double s,
                    const AngleGrid& grid = AngleGrid::square());

// sqrt(1 - |<E0(s)|theta_a, theta_b>|^2); tiny negative radicands clamp to 0.
double trace_norm_distance(const spectral::SpectralSnapshot& snap, const PfcParams& params,
                           const CoherentAngles& angles);

Landscape distance_landscape(const spectral::SpectralSnapshot& snap, const PfcParams& params,
                             const AngleGrid& grid = AngleGrid::square());

// Strict local minima under 8-neighbour comparison. Both angle axes are
// periodic and the last grid point duplicates the first, so it is skipped.
std::vector<GridPoint> local_minima(const Landscape& land);

// Pattern-search refinement of a grid minimum of f.
CoherentAngles refine_minimum(const std::function<double(const CoherentAngles&)>& f, CoherentAngles start,
                              double step, double tol = 1e-8);

struct ScanPoint {
  double t = 0.0;
  CoherentAngles angles;
  double value = 0.0;
};

// f sampled on the straight segment from -> to at n_points values of t in [0, 1].
std::vector<ScanPoint> line_scan(const std::function<double(const CoherentAngles&)>& f, const CoherentAngles& from,
                                 const CoherentAngles& to, int n_points);

// Potential along the hyper-plane through two landscape points.
std::vector<ScanPoint> hyperplane_scan(const PfcParams& params, const AnnealSchedule& schedule, double s,
                                       const CoherentAngles& from, const CoherentAngles& to, int n_points);

}  // namespace pfc::semiclassical

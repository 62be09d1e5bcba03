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

#include "oracles.hpp"
#include "pfc/error.hpp"
#include "pfc/spectral.hpp"
#include "pfc/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace pfc;

namespace {

const AnnealSchedule kSchedule = AnnealSchedule::linear();

double binomial(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("assembly matches the bit-flip oracle and the kronecker build") {
  for (int M : {2, 3}) {
    const auto p = build_pfc({M, 1.0, 0.09});
    for (double s : {0.0, 0.3, 0.5, 0.841, 1.0}) {
      const Eigen::MatrixXd H = spectral::build_hamiltonian(p, kSchedule, s);
      const Eigen::MatrixXd ref = oracle::tfim(p, kSchedule.A(s), kSchedule.B(s));
      CHECK((H - ref).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((H - spectral::build_hamiltonian_kron(p, kSchedule, s)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("endpoint spectra") {
  const auto p = build_pfc({2, 1.0, 0.09});
  const Eigen::MatrixXd H1 = spectral::build_hamiltonian(p, kSchedule, 1.0);
  for (int x = 0; x < 16; ++x) {
    CHECK(H1(x, x) == doctest::Approx(3 * p.basis_energy(x)));
    for (int y = 0; y < 16; ++y)
      if (x != y) CHECK(H1(x, y) == 0.0);
  }
  // s = 0: levels -3N + 6k with binomial degeneracy.
  const auto snap = spectral::snapshot(p, kSchedule, 0.0);
  int idx = 0;
  for (int k = 0; k <= 4; ++k)
    for (int r = 0; r < binomial(4, k); ++r) CHECK(snap.eigenvalues[idx++] == doctest::Approx(-12.0 + 6 * k));
  const Eigen::VectorXd g = spectral::snapshot(p, kSchedule, 0.0, 1).ground();
  CHECK((g.cwiseAbs().array() - 0.25).abs().maxCoeff() < 1e-12);
}

TEST_CASE("s = 1 levels of M=3, d=0.1") {
  const auto snap = spectral::snapshot(build_pfc({3, 1.0, 0.1}), kSchedule, 1.0, 9);
  REQUIRE(snap.k == 9);
  CHECK(snap.eigenvalues[0] == doctest::Approx(3 * -5.3).epsilon(1e-12));
  for (int j = 1; j < 9; ++j) CHECK(snap.eigenvalues[j] == doctest::Approx(3 * -4.7).epsilon(1e-12));
}

TEST_CASE("eigen residuals and orthonormality") {
  const auto p = build_pfc({3, 1.0, 0.1});
  const spectral::TfimHamiltonian ham(p, kSchedule);
  for (double s : {0.1, 0.5, 0.8227, 0.95}) {
    const Eigen::MatrixXd H = ham.at(s);
    const auto snap = spectral::snapshot(ham, s);
    const double norm = H.norm();
    for (int j = 0; j < snap.k; ++j)
      CHECK((H * snap.eigenvectors.col(j) - snap.eigenvalues[j] * snap.eigenvectors.col(j)).norm() <= 1e-8 * norm);
    CHECK((snap.eigenvectors.transpose() * snap.eigenvectors - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("gap stays positive inside the anneal") {
  for (auto [M, d] : {std::pair{2, 0.09}, {3, 0.1}, {3, 0.05}, {3, 0.3}}) {
    const spectral::TfimHamiltonian ham(build_pfc({M, 1.0, d}), kSchedule);
    for (int k = 1; k < 200; ++k) CHECK(spectral::gap_at(ham, k / 200.0) > 0.0);
  }
}

TEST_CASE("minimum gap locations") {
  CHECK(std::abs(spectral::min_gap(build_pfc({2, 1.0, 0.09}), kSchedule).s_min - 0.841) <= 0.001);
  CHECK(std::abs(spectral::min_gap(build_pfc({3, 1.0, 0.1}), kSchedule).s_min - 0.8227) <= 0.001);
  CHECK(std::abs(spectral::min_gap(build_pfc({3, 1.0, 0.05}), kSchedule).s_min - 0.9059) <= 0.001);
}

TEST_CASE("minimum gap is the smallest gap on a fine scan") {
  const spectral::TfimHamiltonian ham(build_pfc({2, 1.0, 0.09}), kSchedule);
  const auto mg = spectral::min_gap(ham);
  CHECK(spectral::gap_at(ham, mg.s_min) == doctest::Approx(mg.gap).epsilon(1e-12));
  for (int k = 1; k < 2000; ++k) CHECK(spectral::gap_at(ham, k / 2000.0) >= mg.gap - 1e-10);
}

TEST_CASE("minimum gap near the thermal energy at d=0.227") {
  const double kT = units::thermal_frequency_ghz(12.0);
  CHECK(kT == doctest::Approx(0.25004).epsilon(1e-4));
  const double gap = spectral::min_gap(build_pfc({3, 1.0, 0.227}), kSchedule).gap;
  CHECK(std::abs(gap - kT) <= 0.1 * kT);
}

TEST_CASE("unit conversions") {
  // h / (k_B * 12 mK) with CODATA constants, to the digits the constants give.
  const double beta = 6.62607015e-34 / (1.380649e-23 * 12e-3) * 1e9;
  CHECK(units::beta_per_ghz(12.0) == doctest::Approx(beta).epsilon(1e-14));
  CHECK(units::beta_per_ghz(12.0) == doctest::Approx(3.9994).epsilon(1e-4));
  CHECK(units::beta_angular(12.0) == doctest::Approx(beta / units::kTwoPi).epsilon(1e-14));
}

TEST_CASE("instantaneous magnetization") {
  const auto p = build_pfc({2, 1.0, 0.09});
  CHECK(std::abs(spectral::instantaneous_magnetization(p, kSchedule, 0.0).value) < 1e-12);
  CHECK(spectral::instantaneous_magnetization(p, kSchedule, 1.0).value == doctest::Approx(1.0));
  CHECK(spectral::instantaneous_magnetization(p, kSchedule, 0.82).value < 0.0);
  CHECK(spectral::instantaneous_magnetization(p, kSchedule, 0.847).value > 0.0);

  const spectral::TfimHamiltonian ham(p, kSchedule);
  const double s_min = spectral::min_gap(ham).s_min;
  // The flip sits inside the avoided crossing, a little before the gap minimum.
  double lo = s_min - 0.02, hi = s_min + 0.005;
  CHECK(spectral::instantaneous_magnetization(ham, lo).value < 0.0);
  CHECK(spectral::instantaneous_magnetization(ham, hi).value > 0.0);
  // magnetization_of against the sigma^z oracle
  const Eigen::VectorXd g = spectral::snapshot(ham, 0.7, 1).ground();
  double m = 0;
  for (int q = 0; q < 4; ++q) m += g.cwiseProduct(oracle::sigma_z(q, 4)).dot(g) / 4;
  CHECK(spectral::magnetization_of(g, 4) == doctest::Approx(m).epsilon(1e-13));
}

TEST_CASE("phase diagram") {
  std::vector<double> s_grid;
  for (int k = 0; k <= 200; ++k) s_grid.push_back(k / 200.0);
  const auto pd = spectral::phase_diagram(2, 1.0, {0.09, 0.8}, s_grid, kSchedule);
  CHECK(pd.magnetization.col(0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pd.magnetization.row(1).minCoeff() >= -1e-12);
  CHECK(pd.magnetization.row(0).minCoeff() < 0.0);
  // The last crossing for d=0.09 is the phase boundary, inside the avoided
  // crossing around the minimum gap.
  REQUIRE(!pd.sign_changes[0].empty());
  CHECK(std::abs(pd.sign_changes[0].back() - 0.841) < 0.02);
  CHECK(pd.sign_changes[0].back() < 0.841);
}

TEST_CASE("ground overlaps") {
  const auto p = build_pfc({3, 1.0, 0.1});
  CHECK(spectral::ground_overlap(spectral::snapshot(p, kSchedule, 0.83, 1), SpinConfig::all_up(6)) ==
        doctest::Approx(0.98).epsilon(0.01 / 0.98));
  CHECK(spectral::ground_overlap(spectral::snapshot(p, kSchedule, 1.0, 1), SpinConfig::all_up(6)) ==
        doctest::Approx(1.0));
  CHECK(spectral::ground_overlap(spectral::snapshot(p, kSchedule, 0.0, 1), SpinConfig({1, -1, 1, 1, -1, -1})) ==
        doctest::Approx(0.125));
}

TEST_CASE("gibbs reference") {
  const auto p = build_pfc({2, 1.0, 0.09});
  const spectral::TfimHamiltonian ham(p, kSchedule);
  CHECK(spectral::gibbs_ground_population(spectral::snapshot(ham, 0.9), 1e4) == doctest::Approx(1.0));
  // s = 0, N = 4: levels -12 + 6k with C(4, k) copies.
  const double beta = 3.999;
  double z = 0;
  for (int k = 0; k <= 4; ++k) z += binomial(4, k) * std::exp(-beta * (-12.0 + 6 * k));
  CHECK(spectral::gibbs_ground_population(spectral::snapshot(ham, 0.0), beta) ==
        doctest::Approx(std::exp(beta * 12.0) / z).epsilon(1e-12));
  const auto ref = spectral::gibbs_state(ham, 0.6, 2.0);
  CHECK(ref.rho.trace() == doctest::Approx(1.0));
  CHECK((ref.rho - ref.rho.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(ref.ground_population ==
        doctest::Approx(spectral::gibbs_ground_population(spectral::snapshot(ham, 0.6), 2.0)).epsilon(1e-10));
}

TEST_CASE("gibbs ground population dips at the minimum gap") {
  const spectral::TfimHamiltonian ham(build_pfc({3, 1.0, 0.05}), kSchedule);
  const double beta = units::beta_per_ghz(12.0);
  auto p0 = [&](double s) { return spectral::gibbs_ground_population(spectral::snapshot(ham, s), beta); };
  const double dip = p0(0.9059);
  CHECK(dip < p0(0.8));
  CHECK(dip < p0(0.98));
  CHECK(p0(0.98) == doctest::Approx(p0(1.0)).epsilon(0.02));
}

TEST_CASE("dense size bound") {
  bool threw = false;
  try {
    spectral::TfimHamiltonian(build_pfc({7, 1.0, 0.1}), kSchedule);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kTooLarge;
  }
  CHECK(threw);
}

}  // TEST_SUITE

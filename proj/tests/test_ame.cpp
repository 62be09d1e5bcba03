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
#include "pfc/ame.hpp"
#include "pfc/error.hpp"
#include "pfc/units.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace pfc;
using ame::Complex;

namespace {

const AnnealSchedule kSchedule = AnnealSchedule::linear();

ame::BathParams bath(ame::BathUnits units) {
  ame::BathParams b;
  b.units = units;
  return b;
}

Eigen::MatrixXcd random_density(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::MatrixXcd r = a * a.adjoint();
  return r / r.trace();
}

// Textbook Davies dissipator: sum over channels of
// gamma (L r L^dag - {L^dag L, r} / 2), L assembled as a dense matrix.
Eigen::MatrixXcd naive_davies(const spectral::SpectralSnapshot& snap, int n, const ame::BathParams& b,
                              const Eigen::MatrixXcd& r) {
  const Eigen::Index dim = r.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& ch : ame::lindblad_set(snap, n)) {
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& e : ch.entries) L(e.l, e.k) += e.amplitude;
    const double g = ame::bath_gamma(b.omega_from_ghz(ch.omega_ghz), b);
    const Eigen::MatrixXcd LdL = L.adjoint() * L;
    out += g * (L * r * L.adjoint() - 0.5 * (LdL * r + r * LdL));
  }
  return out;
}

}  // namespace

TEST_SUITE("ame") {

TEST_CASE("bath spectral density") {
  for (auto units : {ame::BathUnits::kAngular, ame::BathUnits::kLinear}) {
    const auto b = bath(units);
    CAPTURE(ame::to_string(units));
    // The omega -> 0 limit is continuous.
    const double g0 = ame::bath_gamma(0.0, b);
    CHECK(g0 == doctest::Approx(units::kTwoPi * b.eta_g2 / b.beta()).epsilon(1e-14));
    CHECK(ame::bath_gamma(1e-9, b) == doctest::Approx(g0).epsilon(1e-8));
    CHECK(ame::bath_gamma(-1e-9, b) == doctest::Approx(g0).epsilon(1e-8));
    // Detailed balance gamma(w) = exp(beta w) gamma(-w) over many decades.
    for (double ghz : {1e-4, 1e-2, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0}) {
      const double w = b.omega_from_ghz(ghz);
      const double ratio = ame::bath_gamma(w, b) / ame::bath_gamma(-w, b);
      CHECK(std::abs(ratio / std::exp(b.beta() * w) - 1.0) < 1e-12);
      CHECK(ame::bath_gamma(w, b) > ame::bath_gamma(-w, b));
      CHECK(ame::bath_gamma(-w, b) > 0.0);
    }
    // At 0.25 GHz and 12 mK the Boltzmann factor is e to four digits.
    const double w = b.omega_from_ghz(0.25);
    CHECK(ame::bath_gamma(w, b) / ame::bath_gamma(-w, b) == doctest::Approx(std::exp(1.0)).epsilon(2e-4));
  }
  // Both conventions share beta * omega, but the prefactor omega differs by 2 pi.
  const auto a = bath(ame::BathUnits::kAngular), l = bath(ame::BathUnits::kLinear);
  CHECK(a.beta() * a.omega_from_ghz(0.7) == doctest::Approx(l.beta() * l.omega_from_ghz(0.7)).epsilon(1e-14));
  CHECK(ame::bath_gamma(a.omega_from_ghz(0.7), a) / ame::bath_gamma(l.omega_from_ghz(0.7), l) ==
        doctest::Approx(units::kTwoPi).epsilon(1e-12));
  CHECK(ame::bath_units_from_string("linear") == ame::BathUnits::kLinear);
  CHECK_THROWS_AS(ame::bath_units_from_string("radians"), Error);
  ame::BathParams bad;
  bad.temperature_mk = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("lindblad set") {
  const auto p = build_pfc({2, 1.0, 0.3});
  const int n = p.n_qubits();
  SUBCASE("classical end keeps only dephasing") {
    const auto snap = spectral::snapshot(p, kSchedule, 1.0);
    const auto set = ame::lindblad_set(snap, n);
    CHECK(!set.empty());
    for (const auto& ch : set) CHECK(std::abs(ch.omega_ghz) < 1e-9);
  }
  SUBCASE("matrix elements are complete") {
    for (double s : {0.2, 0.634, 0.9}) {
      const auto snap = spectral::snapshot(p, kSchedule, s);
      const auto a = ame::sigma_z_elements(snap, n);
      for (int j = 0; j < n; ++j) {
        // sigma^z squares to one, so each column of |A|^2 sums to one.
        const Eigen::VectorXd col = a[j].cwiseAbs2().colwise().sum();
        CHECK((col.array() - 1.0).abs().maxCoeff() < 1e-12);
        CHECK((a[j] - a[j].transpose()).cwiseAbs().maxCoeff() < 1e-12);
      }
      // The channels carry every element once.
      Eigen::MatrixXd seen = Eigen::MatrixXd::Zero(snap.k, snap.k);
      for (const auto& ch : ame::lindblad_set(snap, n))
        for (const auto& e : ch.entries) seen(e.l, e.k) += e.amplitude * e.amplitude;
      Eigen::MatrixXd total = Eigen::MatrixXd::Zero(snap.k, snap.k);
      for (const auto& m : a) total += m.cwiseAbs2();
      CHECK((seen - total).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("the relaxation channel opens at the gap") {
    const auto p3 = build_pfc({3, 1.0, 0.1});
    const spectral::TfimHamiltonian h(p3, kSchedule);
    const auto mg = spectral::min_gap(h);
    CHECK(mg.s_min == doctest::Approx(0.8227).epsilon(1e-3));
    const auto snap = spectral::snapshot(h, mg.s_min);
    double amp = 0.0;
    for (const auto& ch : ame::lindblad_set(snap, p3.n_qubits()))
      for (const auto& e : ch.entries)
        if (e.l == 0 && e.k == 1) amp += e.amplitude * e.amplitude;
    CHECK(amp > 0.5);
  }
  SUBCASE("level truncation") {
    const auto snap = spectral::snapshot(p, kSchedule, 0.5);
    for (const auto& ch : ame::lindblad_set(snap, n, ame::kDefaultGapTol, 3))
      for (const auto& e : ch.entries) CHECK((e.l < 3 && e.k < 3));
  }
}

TEST_CASE("davies generator against the textbook form") {
  std::mt19937_64 rng(7);
  for (auto units : {ame::BathUnits::kAngular, ame::BathUnits::kLinear}) {
    const auto b = bath(units);
    for (double s : {0.0, 0.4, 0.634, 1.0}) {
      const auto p = build_pfc({2, 1.0, 0.3});
      const auto snap = spectral::snapshot(p, kSchedule, s);
      const ame::DaviesGenerator gen(snap, p.n_qubits(), b);
      for (int trial = 0; trial < 3; ++trial) {
        const Eigen::MatrixXcd r = random_density(snap.k, rng);
        const Eigen::MatrixXcd got = gen.apply(r);
        const Eigen::MatrixXcd want = naive_davies(snap, p.n_qubits(), b, r);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + want.cwiseAbs().maxCoeff()));
        CHECK(std::abs(got.trace()) < 1e-13);
        CHECK((got - got.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
      }
    }
  }
}

TEST_CASE("the instantaneous gibbs state is stationary") {
  const auto p = build_pfc({2, 1.0, 0.3});
  for (auto units : {ame::BathUnits::kAngular, ame::BathUnits::kLinear}) {
    const auto b = bath(units);
    for (double s : {0.3, 0.6, 0.9}) {
      const auto snap = spectral::snapshot(p, kSchedule, s);
      Eigen::VectorXd w = (-units::beta_per_ghz(12.0) * (snap.eigenvalues.array() - snap.eigenvalues[0])).exp();
      w /= w.sum();
      const Eigen::MatrixXcd rho = w.cast<Complex>().asDiagonal();
      const ame::DaviesGenerator gen(snap, p.n_qubits(), b);
      CHECK(gen.apply(rho).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("frozen closed evolution matches the matrix exponential") {
  const auto p = build_pfc({2, 1.0, 0.3});
  const spectral::TfimHamiltonian h(p, kSchedule);
  const double s = 0.6, t = 3.7;
  ame::EvolveOptions opt;
  opt.frozen_s = s;
  opt.rtol = 1e-11;
  opt.atol = 1e-13;
  const auto tr = ame::evolve_closed(h, t, {0.0, 0.5, 1.0}, opt);
  const Eigen::MatrixXcd gen = Complex(0.0, -units::kTwoPi * t) * h.at(s).cast<Complex>();
  const Eigen::MatrixXcd u = gen.exp();
  const Eigen::MatrixXcd want = u * ame::plus_state(4) * u.adjoint();
  CHECK((tr.final_rho - want).cwiseAbs().maxCoeff() < 1e-8);
  REQUIRE(tr.populations.size() == 3);
  // Populations in the frozen eigenbasis do not move.
  CHECK((tr.populations[0] - tr.populations[2]).cwiseAbs().maxCoeff() < 1e-9);
  const auto c = ame::check_density(tr.final_rho);
  CHECK(c.trace_error < 1e-10);
  CHECK(c.hermiticity_error < 1e-12);
  CHECK(c.purity == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("time-dependent closed evolution") {
  const auto p = build_pfc({3, 1.0, 0.3});
  const spectral::TfimHamiltonian h(p, kSchedule);
  const auto grid = ame::output_grid(21);
  const auto tr = ame::evolve_closed(h, 20.0, grid);
  REQUIRE(tr.times.size() == grid.size());
  // The initial state is the s = 0 ground state.
  CHECK(tr.populations.front()[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& pop : tr.populations) {
    CHECK(pop.sum() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pop.minCoeff() > -1e-10);
  }
  // An anneal as long as the gap estimate stays mostly adiabatic.
  CHECK(tr.populations.back()[0] > 0.95);
  const auto c = ame::check_density(tr.final_rho);
  CHECK(c.trace_error < 1e-8);
  CHECK(c.purity == doctest::Approx(1.0).epsilon(1e-7));
  // Tighter tolerances agree.
  ame::EvolveOptions tight;
  tight.rtol = 1e-10;
  tight.atol = 1e-12;
  const auto ref = ame::evolve_closed(h, 20.0, {0.0, 1.0}, tight);
  CHECK(std::abs(ref.populations.back()[0] - tr.populations.back()[0]) < 1e-5);
  // Sudden limit: no time to move away from |+>.
  const auto fast = ame::evolve_closed(h, 1e-4, {0.0, 1.0});
  const auto snap = spectral::snapshot(h, 1.0);
  const Eigen::VectorXcd g = snap.eigenvectors.col(0).cast<Complex>();
  CHECK(fast.populations.back()[0] == doctest::Approx((g.adjoint() * ame::plus_state(6) * g).value().real()).epsilon(1e-4));
}

TEST_CASE("zero coupling is the closed system") {
  const auto p = build_pfc({2, 1.0, 0.3});
  const spectral::TfimHamiltonian h(p, kSchedule);
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const auto closed = ame::evolve_closed(h, 5.0, grid);
  ame::BathParams b;
  b.eta_g2 = 0.0;
  const auto zero = ame::evolve_ame(h, b, 5.0, grid);
  CHECK((zero.final_rho - closed.final_rho).cwiseAbs().maxCoeff() < 1e-12);
  // A vanishing coupling goes through the dissipative path and still agrees.
  b.eta_g2 = 1e-12;
  const auto tiny = ame::evolve_ame(h, b, 5.0, grid);
  CHECK((tiny.final_rho - closed.final_rho).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("open evolution stays a density matrix") {
  const auto p = build_pfc({2, 1.0, 0.09});
  const spectral::TfimHamiltonian h(p, kSchedule);
  for (auto units : {ame::BathUnits::kAngular, ame::BathUnits::kLinear}) {
    ame::BathParams b = bath(units);
    b.eta_g2 = 1e-2;
    const auto tr = ame::evolve_ame(h, b, 10.0, ame::output_grid(11, 0.841, 0.03, 7));
    for (const auto& pop : tr.populations) {
      CHECK(pop.sum() == doctest::Approx(1.0).epsilon(1e-7));
      CHECK(pop.minCoeff() > -1e-8);
    }
    const auto c = ame::check_density(tr.final_rho);
    CHECK(c.trace_error < 1e-7);
    CHECK(c.hermiticity_error < 1e-12);
    CHECK(c.min_eigenvalue > -1e-8);
    CHECK(c.purity < 1.0);
  }
}

TEST_CASE("a frozen bath thermalizes") {
  const auto p = build_pfc({2, 1.0, 0.3});
  const spectral::TfimHamiltonian h(p, kSchedule);
  const double s = 0.5;
  const double target = spectral::gibbs_ground_population(spectral::snapshot(h, s), units::beta_per_ghz(12.0));
  for (auto units : {ame::BathUnits::kAngular, ame::BathUnits::kLinear}) {
    ame::EvolveOptions opt;
    opt.frozen_s = s;
    opt.rtol = 1e-6;
    opt.atol = 1e-8;
    const auto tr = ame::evolve_ame(h, bath(units), 2000.0, {0.0, 1.0}, opt);
    CHECK(std::abs(tr.populations.back()[0] - target) < 0.02);
    CHECK(tr.populations.back()[0] > tr.populations.front()[0]);
  }
}

TEST_CASE("relaxation rate profile") {
  const auto p = build_pfc({3, 1.0, 0.1});
  const spectral::TfimHamiltonian h(p, kSchedule);
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(0.7 + 0.3 * i / 400.0);
  const auto rates = ame::transition_rate_profile(h, ame::BathParams{}, grid);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    CHECK(rates[i].gamma10 >= 0.0);
    CHECK(rates[i].omega10_ghz > 0.0);
    if (rates[i].gamma10 > rates[peak].gamma10) peak = i;
  }
  CHECK(rates.back().gamma10 == 0.0);
  CHECK(rates.back().matrix_element == doctest::Approx(0.0));
  // The rate peaks where the two lowest levels nearly cross.
  CHECK(std::abs(rates[peak].s - spectral::min_gap(h).s_min) < 0.01);
  CHECK(rates[peak].matrix_element > 1.0);
}

TEST_CASE("adiabatic time estimate") {
  CHECK(ame::adiabatic_time_estimate(spectral::TfimHamiltonian(build_pfc({3, 1.0, 0.3}), kSchedule)) ==
        doctest::Approx(20.0).epsilon(1e-9));
  const double g = 0.37;
  CHECK(ame::adiabatic_time_from_gap(2 * g) == doctest::Approx(ame::adiabatic_time_from_gap(g) / 4).epsilon(1e-14));
  const double t_small = ame::adiabatic_time_estimate(spectral::TfimHamiltonian(build_pfc({3, 1.0, 0.05}), kSchedule));
  CHECK(t_small > 163e3 / 10);
  CHECK(t_small < 163e3 * 10);
  CHECK_THROWS_AS(ame::adiabatic_time_from_gap(0.0), Error);
}

TEST_CASE("output grid") {
  const auto g = ame::output_grid(11, 0.84, 0.05, 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  int near = 0;
  for (double x : g) near += std::abs(x - 0.84) <= 0.05 + 1e-12;
  CHECK(near >= 21);
  const auto clipped = ame::output_grid(5, 0.99, 0.05, 11);
  CHECK(clipped.back() == 1.0);
  CHECK_THROWS_AS(ame::output_grid(1), Error);
}

TEST_CASE("argument checks") {
  const spectral::TfimHamiltonian h(build_pfc({2, 1.0, 0.3}), kSchedule);
  CHECK_THROWS_AS(ame::evolve_closed(h, 0.0, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(ame::evolve_closed(h, 1.0, {}), Error);
  CHECK_THROWS_AS(ame::evolve_closed(h, 1.0, {0.5, 0.2}), Error);
  CHECK_THROWS_AS(ame::evolve_closed(h, 1.0, {0.0, 1.5}), Error);
  ame::EvolveOptions opt;
  opt.rtol = 1e-300;
  opt.atol = 1e-300;
  try {
    ame::evolve_closed(h, 1.0, {0.0, 1.0}, opt);
    FAIL("expected step underflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStepUnderflow);
  }
}

TEST_CASE("density checks") {
  const auto c = ame::check_density(ame::plus_state(3));
  CHECK(c.trace_error < 1e-15);
  CHECK(c.purity == doctest::Approx(1.0));
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK(ame::check_density(mixed).purity == doctest::Approx(0.25));
  Eigen::MatrixXcd bad = mixed;
  bad(0, 0) = -0.1;
  CHECK(ame::check_density(bad).min_eigenvalue == doctest::Approx(-0.1));
}

}  // TEST_SUITE

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

#include "pfc/svmc.hpp"

#include "pfc/error.hpp"
#include "pfc/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>
#include <unordered_set>

namespace pfc::svmc {

namespace {

using units::kPi;
using units::kTwoPi;

constexpr double kTieTolerance = 1e-12;

void check_dimension(const IsingProblem& problem, const RotorState& state, Variant v) {
  const auto n = static_cast<std::size_t>(problem.n_qubits());
  if (state.theta.size() != n) fail(ErrorCode::kLengthMismatch, "rotor state has wrong number of qubits");
  if (is_spherical(v) && state.phi.size() != n)
    fail(ErrorCode::kLengthMismatch, "spherical variant needs one azimuth per qubit");
}

double transverse(Variant v, double theta, double phi) {
  return is_spherical(v) ? std::sin(theta) * std::cos(phi) : std::sin(theta);
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kSvmc: return "svmc";
    case Variant::kSvmcTf: return "svmc-tf";
    case Variant::kSphericalSvmc: return "spherical-svmc";
    case Variant::kSphericalSvmcTf: return "spherical-svmc-tf";
  }
  return "?";
}

Variant variant_from_string(std::string_view name) {
  for (Variant v : kAllVariants)
    if (name == to_string(v)) return v;
  fail(ErrorCode::kInvalidParams, "unknown svmc variant '" + std::string(name) + "'");
}

RotorState RotorState::initial(int n_qubits, Variant v) {
  RotorState st;
  st.theta.assign(n_qubits, kPi / 2);
  if (is_spherical(v)) st.phi.assign(n_qubits, 0.0);
  return st;
}

double svmc_energy(const IsingProblem& problem, const AnnealSchedule& schedule, double s, const RotorState& state,
                   Variant v) {
  check_dimension(problem, state, v);
  const int n = problem.n_qubits();
  double drive = 0.0, ising = 0.0;
  for (int j = 0; j < n; ++j) {
    drive += transverse(v, state.theta[j], is_spherical(v) ? state.phi[j] : 0.0);
    ising += problem.h()[j] * std::cos(state.theta[j]);
  }
  for (const auto& c : problem.couplings()) ising += c.value * std::cos(state.theta[c.i]) * std::cos(state.theta[c.j]);
  return -schedule.A(s) * drive + schedule.B(s) * ising;
}

double tf_step_scale(const AnnealSchedule& schedule, double s) {
  const double b = schedule.B(s);
  if (b == 0.0) return 1.0;
  return std::min(schedule.A(s) / b, 1.0);
}

double reflect_theta(double theta) {
  // Proposals move by at most pi, so one fold usually suffices.
  if (theta >= -kPi && theta <= kTwoPi) {
    if (theta < 0) return -theta;
    return theta > kPi ? kTwoPi - theta : theta;
  }
  // Reflection about 0 and pi is periodic with period 2 pi.
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t > kPi ? kTwoPi - t : t;
}

double wrap_phi(double phi) {
  if (phi >= -kPi && phi <= kPi) return phi;
  if (phi > kPi && phi <= 3 * kPi) return phi - kTwoPi;
  if (phi < -kPi && phi >= -3 * kPi) return phi + kTwoPi;
  double p = std::fmod(phi + kPi, kTwoPi);
  if (p < 0) p += kTwoPi;
  return p - kPi;
}

Proposal propose(Variant v, const RotorState& state, int j, double step_scale, Rng& rng,
                 const SweepOptions& options) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Proposal p;
  const bool move_phi = is_spherical(v) && !options.freeze_phi;
  if (is_transverse_field(v)) {
    p.theta = reflect_theta(state.theta[j] + step_scale * (kTwoPi * unit(rng) - kPi));
    if (is_spherical(v)) p.phi = move_phi ? wrap_phi(state.phi[j] + step_scale * (kTwoPi * unit(rng) - kPi)) : state.phi[j];
  } else {
    p.theta = kPi * unit(rng);
    if (is_spherical(v)) p.phi = move_phi ? kTwoPi * unit(rng) - kPi : state.phi[j];
  }
  return p;
}

int metropolis_sweep(const IsingProblem& problem, const AnnealSchedule& schedule, double s, RotorState& state,
                     Variant v, double beta, Rng& rng, const SweepOptions& options) {
  if (!(beta > 0)) fail(ErrorCode::kInvalidParams, "beta must be positive");
  check_dimension(problem, state, v);
  const int n = problem.n_qubits();
  const double a = schedule.A(s), b = schedule.B(s);
  const double step = is_transverse_field(v) ? tf_step_scale(schedule, s) : 1.0;
  const bool sph = is_spherical(v);

  // Scratch reused across sweeps; the anneal loop calls this millions of times.
  thread_local std::vector<int> order;
  thread_local std::vector<double> cos_theta, drive;
  order.resize(n);
  cos_theta.resize(n);
  drive.resize(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int j = 0; j < n; ++j) {
    cos_theta[j] = std::cos(state.theta[j]);
    drive[j] = transverse(v, state.theta[j], sph ? state.phi[j] : 0.0);
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int accepted = 0;
  for (int j : order) {
    const Proposal p = propose(v, state, j, step, rng, options);
    const double c_new = std::cos(p.theta);

    double field = problem.h()[j];
    for (const auto& [k, J] : problem.neighbours(j)) field += J * cos_theta[k];
    const double x_new = transverse(v, p.theta, p.phi);
    const double dE = -a * (x_new - drive[j]) + b * field * (c_new - cos_theta[j]);
    if (dE <= 0 || unit(rng) < std::exp(-beta * dE)) {
      state.theta[j] = p.theta;
      if (sph) state.phi[j] = p.phi;
      cos_theta[j] = c_new;
      drive[j] = x_new;
      ++accepted;
    }
  }
  return accepted;
}

SpinConfig readout(const RotorState& state, Rng& rng) {
  std::vector<int> spins(state.theta.size());
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j = 0; j < spins.size(); ++j) {
    const double c = std::cos(state.theta[j]);
    if (std::abs(c) < kTieTolerance)
      spins[j] = coin(rng) ? 1 : -1;
    else
      spins[j] = c > 0 ? 1 : -1;
  }
  return SpinConfig(std::move(spins));
}

RotorState run_anneal(const IsingProblem& problem, const AnnealSchedule& schedule, Variant v, int sweeps,
                      double beta, Rng& rng, const AnnealOptions& options) {
  if (sweeps < 1) fail(ErrorCode::kInvalidParams, "sweeps must be at least 1");
  RotorState state = RotorState::initial(problem.n_qubits(), v);
  for (int k = 0; k < sweeps; ++k) {
    const double s = sweeps == 1 ? 0.0 : static_cast<double>(k) / (sweeps - 1);
    if (s > options.s_stop) break;
    metropolis_sweep(problem, schedule, s, state, v, beta, rng, options.sweep);
  }
  return state;
}

void CampaignSpec::validate() const {
  if (sweeps < 1 || n_samples < 1 || repeats < 1 || bootstrap_resamples < 1)
    fail(ErrorCode::kInvalidParams, "campaign counts must be positive");
  if (!(temperature_mk > 0) || !std::isfinite(temperature_mk))
    fail(ErrorCode::kInvalidParams, "campaign temperature must be positive");
  if (threads < 1) fail(ErrorCode::kInvalidParams, "threads must be at least 1");
}

Rng sample_rng(std::uint64_t seed, int repeat, int sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(repeat), static_cast<std::uint32_t>(sample)};
  return Rng(seq);
}

CampaignResult campaign(const IsingProblem& problem, const AnnealSchedule& schedule, Variant v,
                        const CampaignSpec& spec, const AnnealOptions& options) {
  spec.validate();
  const int n = problem.n_qubits();
  if (n > kMaxEnumerationQubits) fail(ErrorCode::kTooLarge, "campaign needs an enumerable problem");
  const LowEnergyCensus census = low_energy_census(problem);
  const std::uint64_t ground = census.ground.index();
  std::unordered_set<std::uint64_t> manifold;
  for (const auto& c : census.first_excited) manifold.insert(c.index());

  const double beta = units::beta_per_ghz(spec.temperature_mk);
  const std::size_t total = static_cast<std::size_t>(spec.repeats) * spec.n_samples;
  const int workers = std::max(1, std::min<int>(spec.threads, static_cast<int>(total)));

  struct Tally {
    std::vector<std::uint64_t> ground, manifold, histogram;
  };
  std::vector<Tally> tallies(workers);
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 64;

  auto work = [&](Tally& t) {
    t.ground.assign(spec.repeats, 0);
    t.manifold.assign(spec.repeats, 0);
    t.histogram.assign(std::size_t{1} << n, 0);
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= total) break;
      const std::size_t end = std::min(total, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) {
        const int r = static_cast<int>(i / spec.n_samples);
        const int k = static_cast<int>(i % spec.n_samples);
        Rng rng = sample_rng(spec.seed, r, k);
        const RotorState st = run_anneal(problem, schedule, v, spec.sweeps, beta, rng, options);
        const std::uint64_t idx = readout(st, rng).index();
        ++t.histogram[idx];
        if (idx == ground) ++t.ground[r];
        if (manifold.count(idx)) ++t.manifold[r];
      }
    }
  };

  if (workers == 1) {
    work(tallies[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(tallies[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Integer sums: the result does not depend on how work was split.
  CampaignResult out;
  out.histogram.assign(std::size_t{1} << n, 0);
  std::vector<std::uint64_t> g(spec.repeats, 0), m(spec.repeats, 0);
  for (const auto& t : tallies) {
    for (int r = 0; r < spec.repeats; ++r) {
      g[r] += t.ground[r];
      m[r] += t.manifold[r];
    }
    for (std::size_t i = 0; i < out.histogram.size(); ++i) out.histogram[i] += t.histogram[i];
  }
  for (int r = 0; r < spec.repeats; ++r) {
    out.ground_per_repeat.push_back(static_cast<double>(g[r]) / spec.n_samples);
    out.manifold_per_repeat.push_back(static_cast<double>(m[r]) / spec.n_samples);
  }
  out.ground = bootstrap_mean(out.ground_per_repeat, spec.bootstrap_resamples, spec.seed);
  out.manifold = bootstrap_mean(out.manifold_per_repeat, spec.bootstrap_resamples, spec.seed + 1);
  return out;
}

}  // namespace pfc::svmc

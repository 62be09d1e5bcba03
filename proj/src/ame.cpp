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

#include "pfc/ame.hpp"

#include "pfc/error.hpp"
#include "pfc/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace pfc::ame {

using units::kTwoPi;

namespace {

constexpr Complex kI(0.0, 1.0);

[[noreturn]] void fail_at(ErrorCode code, const std::string& what, double s) {
  std::ostringstream msg;
  msg << what << " at s = " << s;
  fail(code, msg.str());
}

struct Eig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Eig eig(const Eigen::MatrixXd& h, double s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) fail_at(ErrorCode::kEigensolverFailure, "eigensolver failed", s);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Q^T X Q for real Q, done as real products on the two parts of X.
Eigen::MatrixXcd congruence(const Eigen::MatrixXd& q, const Eigen::MatrixXcd& x) {
  const Eigen::MatrixXd re = q.transpose() * x.real() * q;
  const Eigen::MatrixXd im = q.transpose() * x.imag() * q;
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

// r -> exp(-i h L) r exp(i h L) for L = diag(lambda).
void apply_phases(Eigen::MatrixXcd& r, const Eigen::VectorXd& lambda, double h) {
  const Eigen::VectorXcd p = (-kI * h * lambda.cast<Complex>()).array().exp();
  r = p.asDiagonal() * r * p.conjugate().asDiagonal();
}

// sigma^z_j diagonal in the computational basis.
Eigen::VectorXd sz_diagonal(int n, int j) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd z(dim);
  for (Eigen::Index x = 0; x < dim; ++x) z[x] = (x >> (n - 1 - j)) & 1 ? -1.0 : 1.0;
  return z;
}

class Integrator {
 public:
  Integrator(const spectral::TfimHamiltonian& ham, const BathParams* bath, double t_anneal, const EvolveOptions& opt)
      : ham_(ham), bath_(bath), t_anneal_(t_anneal), opt_(opt), n_(ham.n_qubits()) {
    if (frozen()) {
      frozen_h_ = angular(opt_.frozen_s);
      frozen_eig_ = eig(frozen_h_, opt_.frozen_s);
      if (bath_)
        frozen_generator_.emplace(as_snapshot(frozen_eig_, opt_.frozen_s), n_, *bath_, opt_.gap_tol, opt_.bath_levels);
    }
  }

  Trajectory run(const std::vector<double>& grid) {
    Trajectory out;
    DensityMatrix rho = plus_state(n_);
    double t = 0.0;
    double h = opt_.initial_step_ns;
    for (double g : grid) {
      const double target = g * t_anneal_;
      while (t < target) {
        const double step = std::min(h, target - t);
        if (step < opt_.min_step_ns && target - t > opt_.min_step_ns)
          fail_at(ErrorCode::kStepUnderflow, "step size underflow", s_of(t));
        // Step doubling: one full step against two halves.
        const DensityMatrix full = advance(rho, t, step);
        DensityMatrix half = advance(rho, t, 0.5 * step);
        half = advance(half, t + 0.5 * step, 0.5 * step);
        const double scale = opt_.atol + opt_.rtol * half.cwiseAbs().maxCoeff();
        // Richardson estimate of the error in `half`; the Strang splitting is
        // second order, the closed-system Magnus step fourth order.
        const double err = (full - half).cwiseAbs().maxCoeff() / (richardson_ * scale);
        if (!std::isfinite(err)) fail_at(ErrorCode::kNonFinite, "non-finite density matrix", s_of(t));
        if (err <= 1.0) {
          t = (step == target - t) ? target : t + step;
          rho = 0.5 * (half + half.adjoint());
          ++out.steps;
          // A step shortened to land on the grid says little about h.
          if (step == h) h = step * std::min(4.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
        } else {
          ++out.rejected;
          h = step * std::max(0.1, 0.9 * std::pow(err, -0.2));
        }
        if (out.steps + out.rejected > opt_.max_steps)
          fail_at(ErrorCode::kStepUnderflow, "step budget exhausted", s_of(t));
      }
      out.times.push_back(g);
      out.populations.push_back(populations(rho, frozen() ? opt_.frozen_s : g));
    }
    out.final_rho = rho;
    return out;
  }

 private:
  bool frozen() const { return opt_.frozen_s >= 0.0; }
  double s_of(double t) const { return frozen() ? opt_.frozen_s : std::clamp(t / t_anneal_, 0.0, 1.0); }
  Eigen::MatrixXd angular(double s) const { return kTwoPi * ham_.at(s); }
  Eigen::MatrixXd h_at(double t) const { return frozen() ? frozen_h_ : angular(s_of(t)); }

  // One step of a Strang splitting: half dissipator, unitary, half
  // dissipator. The unitary is the fourth-order commutator-free Magnus
  // integrator, exp(-i h K1) exp(-i h K2) with K1, K2 mixing H at the two
  // Gauss points; the Davies generator is built in the eigenbasis at the step
  // midpoint. rho hops between eigenbases instead of forming U explicitly.
  DensityMatrix advance(const DensityMatrix& rho, double t, double h) const {
    static const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
    static const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0, a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
    const double s0 = s_of(t);

    if (frozen()) {
      Eigen::MatrixXcd r = congruence(frozen_eig_.vectors, rho);
      if (frozen_generator_) frozen_generator_->advance(r, 0.5 * h);
      apply_phases(r, frozen_eig_.values, h);
      if (frozen_generator_) frozen_generator_->advance(r, 0.5 * h);
      return congruence(frozen_eig_.vectors.transpose(), r);
    }

    const Eigen::MatrixXd h1 = h_at(t + c1 * h), h2 = h_at(t + c2 * h);
    const Eig e1 = eig(a1 * h1 + a2 * h2, s0);  // applied last
    const Eig e2 = eig(a2 * h1 + a1 * h2, s0);
    if (!bath_) {
      Eigen::MatrixXcd r = congruence(e2.vectors, rho);
      apply_phases(r, e2.values, h);
      r = congruence(e2.vectors.transpose() * e1.vectors, r);
      apply_phases(r, e1.values, h);
      return congruence(e1.vectors.transpose(), r);
    }

    const double s_mid = s_of(t + 0.5 * h);
    const Eig em = eig(angular(s_mid), s_mid);
    const DaviesGenerator d(as_snapshot(em, s_mid), n_, *bath_, opt_.gap_tol, opt_.bath_levels);
    Eigen::MatrixXcd r = congruence(em.vectors, rho);
    d.advance(r, 0.5 * h);
    r = congruence(em.vectors.transpose() * e2.vectors, r);
    apply_phases(r, e2.values, h);
    r = congruence(e2.vectors.transpose() * e1.vectors, r);
    apply_phases(r, e1.values, h);
    r = congruence(e1.vectors.transpose() * em.vectors, r);
    d.advance(r, 0.5 * h);
    return congruence(em.vectors.transpose(), r);
  }

  static spectral::SpectralSnapshot as_snapshot(const Eig& e, double s) {
    spectral::SpectralSnapshot snap;
    snap.s = s;
    snap.eigenvalues = e.values / kTwoPi;
    snap.eigenvectors = e.vectors;
    snap.k = static_cast<int>(e.values.size());
    return snap;
  }

  Eigen::VectorXd populations(const DensityMatrix& rho, double s) const {
    const Eig e = eig(angular(s), s);
    const Eigen::Index dim = e.values.size();
    const Eigen::Index keep = opt_.report_levels > 0 ? std::min<Eigen::Index>(opt_.report_levels, dim) : dim;
    Eigen::VectorXd p(keep);
    for (Eigen::Index j = 0; j < keep; ++j) {
      const Eigen::VectorXcd col = e.vectors.col(j).cast<Complex>();
      p[j] = (col.adjoint() * rho * col).value().real();
    }
    return p;
  }

  const spectral::TfimHamiltonian& ham_;
  const BathParams* bath_;
  double t_anneal_;
  EvolveOptions opt_;
  int n_;
  Eigen::MatrixXd frozen_h_;
  Eig frozen_eig_;
  double richardson_ = bath_ ? 3.0 : 15.0;
  std::optional<DaviesGenerator> frozen_generator_;
};

void check_evolve_args(double t_anneal, const std::vector<double>& grid, const EvolveOptions& opt) {
  if (!(t_anneal > 0) || !std::isfinite(t_anneal)) fail(ErrorCode::kInvalidParams, "t_anneal must be positive");
  if (grid.empty()) fail(ErrorCode::kInvalidParams, "output grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) fail(ErrorCode::kInvalidParams, "output grid must lie in [0, 1]");
    if (i > 0 && grid[i] <= grid[i - 1]) fail(ErrorCode::kInvalidParams, "output grid must be increasing");
  }
  if (!(opt.rtol > 0) || !(opt.atol > 0)) fail(ErrorCode::kInvalidParams, "tolerances must be positive");
  if (opt.frozen_s > 1.0) fail(ErrorCode::kInvalidParams, "frozen_s must lie in [0, 1]");
}

struct Pair {
  double omega;
  int k, l;
};

// All ordered level pairs sorted by Bohr frequency E_k - E_l (GHz), and the
// [begin, end) ranges of the bins chained within gap_tol.
std::vector<std::pair<std::size_t, std::size_t>> bin_pairs(const Eigen::VectorXd& energies, int keep, double gap_tol,
                                                           std::vector<Pair>& pairs) {
  if (!(gap_tol >= 0)) fail(ErrorCode::kInvalidParams, "gap_tol must be non-negative");
  pairs.clear();
  pairs.reserve(static_cast<std::size_t>(keep) * keep);
  for (int k = 0; k < keep; ++k)
    for (int l = 0; l < keep; ++l) pairs.push_back({energies[k] - energies[l], k, l});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.omega < y.omega; });
  std::vector<std::pair<std::size_t, std::size_t>> bins;
  std::size_t begin = 0;
  while (begin < pairs.size()) {
    std::size_t end = begin + 1;
    while (end < pairs.size() && pairs[end].omega - pairs[end - 1].omega <= gap_tol) ++end;
    bins.emplace_back(begin, end);
    begin = end;
  }
  return bins;
}

double bin_mean(const std::vector<Pair>& pairs, std::size_t begin, std::size_t end) {
  double mean = 0.0;
  for (std::size_t i = begin; i < end; ++i) mean += pairs[i].omega;
  return mean / static_cast<double>(end - begin);
}

constexpr double kZeroAmplitude = 1e-14;

}  // namespace

const char* to_string(BathUnits u) { return u == BathUnits::kAngular ? "angular" : "linear"; }

BathUnits bath_units_from_string(const std::string& name) {
  if (name == "angular") return BathUnits::kAngular;
  if (name == "linear") return BathUnits::kLinear;
  fail(ErrorCode::kInvalidParams, "bath units must be 'angular' or 'linear', got '" + name + "'");
}

void BathParams::validate() const {
  if (!(temperature_mk > 0) || !std::isfinite(temperature_mk))
    fail(ErrorCode::kInvalidParams, "bath temperature must be positive");
  if (!(omega_c_ghz > 0) || !std::isfinite(omega_c_ghz)) fail(ErrorCode::kInvalidParams, "bath cutoff must be positive");
  if (!(eta_g2 >= 0) || !std::isfinite(eta_g2)) fail(ErrorCode::kInvalidParams, "bath coupling must be non-negative");
}

double BathParams::beta() const {
  return units == BathUnits::kAngular ? units::beta_angular(temperature_mk) : units::beta_per_ghz(temperature_mk);
}

double BathParams::omega_c() const { return omega_from_ghz(omega_c_ghz); }

double BathParams::omega_from_ghz(double ghz) const { return units == BathUnits::kAngular ? kTwoPi * ghz : ghz; }

double bath_gamma(double omega, const BathParams& bath) {
  if (!std::isfinite(omega)) fail(ErrorCode::kNonFinite, "bath_gamma: omega must be finite");
  const double beta = bath.beta();
  const double x = beta * omega;
  if (x == 0.0) return kTwoPi * bath.eta_g2 / beta;
  return kTwoPi * bath.eta_g2 * omega * std::exp(-std::abs(omega) / bath.omega_c()) / -std::expm1(-x);
}

std::vector<Eigen::MatrixXd> sigma_z_elements(const spectral::SpectralSnapshot& snap, int n_qubits) {
  const Eigen::MatrixXd& v = snap.eigenvectors;
  if (v.rows() != (Eigen::Index{1} << n_qubits)) fail(ErrorCode::kLengthMismatch, "snapshot does not match qubit count");
  std::vector<Eigen::MatrixXd> out;
  for (int j = 0; j < n_qubits; ++j) out.push_back(v.transpose() * sz_diagonal(n_qubits, j).asDiagonal() * v);
  return out;
}

std::vector<LindbladChannel> lindblad_set(const spectral::SpectralSnapshot& snap, int n_qubits, double gap_tol,
                                          int levels) {
  const int dim = static_cast<int>(snap.eigenvalues.size());
  const int keep = levels > 0 ? std::min(levels, dim) : dim;
  const auto a = sigma_z_elements(snap, n_qubits);
  std::vector<Pair> pairs;
  std::vector<LindbladChannel> out;
  for (const auto& [begin, end] : bin_pairs(snap.eigenvalues, keep, gap_tol, pairs)) {
    const double mean = bin_mean(pairs, begin, end);
    for (int j = 0; j < n_qubits; ++j) {
      LindbladChannel ch{mean, j, {}};
      for (std::size_t i = begin; i < end; ++i) {
        const double amp = a[j](pairs[i].l, pairs[i].k);
        if (std::abs(amp) > kZeroAmplitude) ch.entries.push_back({pairs[i].l, pairs[i].k, amp});
      }
      if (!ch.entries.empty()) out.push_back(std::move(ch));
    }
  }
  return out;
}

DaviesGenerator::DaviesGenerator(const spectral::SpectralSnapshot& snap, int n_qubits, const BathParams& bath,
                                 double gap_tol, int levels) {
  const int dim = static_cast<int>(snap.eigenvalues.size());
  const int keep = levels > 0 ? std::min(levels, dim) : dim;
  const auto a = sigma_z_elements(snap, n_qubits);
  g_ = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<Pair> pairs;
  std::vector<double> amp(n_qubits);
  for (const auto& [begin, end] : bin_pairs(snap.eigenvalues, keep, gap_tol, pairs)) {
    const double gamma = bath_gamma(bath.omega_from_ghz(bin_mean(pairs, begin, end)), bath);
    if (gamma == 0.0) continue;
    // Summing over qubits first: the coefficient of r(k, k') -> |l><l'| is
    // gamma sum_j A^j(l, k) A^j(l', k').
    for (std::size_t p = begin; p < end; ++p)
      for (std::size_t q = begin; q < end; ++q) {
        double c = 0.0;
        for (int j = 0; j < n_qubits; ++j) c += a[j](pairs[p].l, pairs[p].k) * a[j](pairs[q].l, pairs[q].k);
        c *= gamma;
        if (c == 0.0) continue;
        terms_.push_back({pairs[p].l, pairs[q].l, pairs[p].k, pairs[q].k, c});
        if (pairs[p].l == pairs[q].l) g_(pairs[p].k, pairs[q].k) += c;
      }
  }
  norm_ = 2.0 * g_.cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::MatrixXcd DaviesGenerator::apply(const Eigen::MatrixXcd& r) const {
  Eigen::MatrixXcd out = -0.5 * (g_ * r + r * g_);
  for (const auto& t : terms_) out(t.l, t.lp) += t.c * r(t.k, t.kp);
  return out;
}

void DaviesGenerator::advance(Eigen::MatrixXcd& r, double tau) const {
  if (terms_.empty() || tau <= 0) return;
  const int sub = std::max(1, static_cast<int>(std::ceil(tau * norm_ / 0.1)));
  const double dt = tau / sub;
  for (int i = 0; i < sub; ++i) {
    const Eigen::MatrixXcd k1 = apply(r);
    const Eigen::MatrixXcd k2 = apply(r + 0.5 * dt * k1);
    const Eigen::MatrixXcd k3 = apply(r + 0.5 * dt * k2);
    const Eigen::MatrixXcd k4 = apply(r + dt * k3);
    r += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

DensityMatrix plus_state(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return psi * psi.adjoint();
}

std::vector<double> output_grid(int n, double s_center, double half_width, int n_dense) {
  if (n < 2) fail(ErrorCode::kInvalidParams, "output grid needs at least two points");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(static_cast<double>(i) / (n - 1));
  if (n_dense > 1 && s_center >= 0.0) {
    const double lo = std::max(0.0, s_center - half_width), hi = std::min(1.0, s_center + half_width);
    for (int i = 0; i < n_dense; ++i) g.push_back(lo + (hi - lo) * i / (n_dense - 1));
  }
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double x : g)
    if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
  return out;
}

Trajectory evolve_closed(const spectral::TfimHamiltonian& hamiltonian, double t_anneal_ns,
                         const std::vector<double>& grid, const EvolveOptions& options) {
  check_evolve_args(t_anneal_ns, grid, options);
  return Integrator(hamiltonian, nullptr, t_anneal_ns, options).run(grid);
}

Trajectory evolve_ame(const spectral::TfimHamiltonian& hamiltonian, const BathParams& bath, double t_anneal_ns,
                      const std::vector<double>& grid, const EvolveOptions& options) {
  check_evolve_args(t_anneal_ns, grid, options);
  bath.validate();
  // Zero coupling is exactly the closed system; take the cheaper path.
  const BathParams* b = bath.eta_g2 > 0 ? &bath : nullptr;
  return Integrator(hamiltonian, b, t_anneal_ns, options).run(grid);
}

std::vector<RatePoint> transition_rate_profile(const spectral::TfimHamiltonian& hamiltonian, const BathParams& bath,
                                               const std::vector<double>& s_grid) {
  bath.validate();
  const int n = hamiltonian.n_qubits();
  std::vector<RatePoint> out;
  for (double s : s_grid) {
    const spectral::SpectralSnapshot snap = spectral::snapshot(hamiltonian, s, 2);
    RatePoint p;
    p.s = s;
    p.omega10_ghz = snap.gap();
    for (int j = 0; j < n; ++j) {
      const double m = snap.eigenvectors.col(0).dot(sz_diagonal(n, j).cwiseProduct(snap.eigenvectors.col(1)));
      p.matrix_element += m * m;
    }
    p.gamma10 = bath_gamma(bath.omega_from_ghz(p.omega10_ghz), bath) * p.matrix_element;
    out.push_back(p);
  }
  return out;
}

double adiabatic_constant() {
  static const double c = [] {
    const auto gap = spectral::min_gap(build_pfc({3, 1.0, 0.3}), AnnealSchedule::linear()).gap;
    return 20.0 * gap * gap;
  }();
  return c;
}

double adiabatic_time_from_gap(double gap_ghz) {
  if (!(gap_ghz > 0)) fail(ErrorCode::kInvalidParams, "adiabatic time needs a positive gap");
  return adiabatic_constant() / (gap_ghz * gap_ghz);
}

double adiabatic_time_estimate(const spectral::TfimHamiltonian& hamiltonian) {
  return adiabatic_time_from_gap(spectral::min_gap(hamiltonian).gap);
}

DensityChecks check_density(const DensityMatrix& rho) {
  DensityChecks c;
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = solver.eigenvalues().minCoeff();
  c.purity = (rho * rho).trace().real();
  return c;
}

}  // namespace pfc::ame

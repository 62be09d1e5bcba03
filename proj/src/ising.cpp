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

#include "pfc/ising.hpp"

#include "pfc/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace pfc {

void PfcParams::validate() const {
  if (M < 2) fail(ErrorCode::kInvalidParams, "PfcParams.M must be >= 2, got " + std::to_string(M));
  if (!(R > 0.0) || !std::isfinite(R))
    fail(ErrorCode::kInvalidParams, "PfcParams.R must be positive, got " + std::to_string(R));
  if (!(d > 0.0 && d < 1.0))
    fail(ErrorCode::kInvalidParams, "PfcParams.d must lie in (0, 1), got " + std::to_string(d));
}

IsingProblem::IsingProblem(int n_qubits, std::vector<double> h, std::vector<Coupling> couplings,
                           std::string label)
    : n_qubits_(n_qubits), h_(std::move(h)), label_(std::move(label)) {
  if (n_qubits <= 0 || n_qubits > 62)
    fail(ErrorCode::kInvalidParams, "n_qubits must be in [1, 62], got " + std::to_string(n_qubits));
  if (h_.empty()) h_.assign(n_qubits, 0.0);
  if (static_cast<int>(h_.size()) != n_qubits)
    fail(ErrorCode::kLengthMismatch, "bias vector length does not match n_qubits");
  for (double v : h_)
    if (!std::isfinite(v)) fail(ErrorCode::kNonFinite, "bias is not finite");

  std::map<std::pair<int, int>, double> merged;
  for (const auto& c : couplings) {
    if (c.i == c.j) fail(ErrorCode::kInvalidParams, "self-coupling on qubit " + std::to_string(c.i));
    if (c.i < 0 || c.j < 0 || c.i >= n_qubits || c.j >= n_qubits)
      fail(ErrorCode::kIndexOutOfRange, "coupler index out of range");
    if (!std::isfinite(c.value)) fail(ErrorCode::kNonFinite, "coupling is not finite");
    merged[{std::min(c.i, c.j), std::max(c.i, c.j)}] += c.value;
  }
  adjacency_.resize(n_qubits);
  for (const auto& [key, value] : merged) {
    couplings_.push_back({key.first, key.second, value});
    adjacency_[key.first].emplace_back(key.second, value);
    adjacency_[key.second].emplace_back(key.first, value);
  }
}

double IsingProblem::basis_energy(std::uint64_t index) const {
  const int n = n_qubits_;
  auto spin = [&](int q) { return ((index >> (n - 1 - q)) & 1U) ? -1.0 : 1.0; };
  double e = 0.0;
  for (int q = 0; q < n; ++q) e += h_[q] * spin(q);
  for (const auto& c : couplings_) e += c.value * spin(c.i) * spin(c.j);
  return e;
}

std::vector<double> IsingProblem::diagonal() const {
  if (n_qubits_ > kMaxEnumerationQubits)
    fail(ErrorCode::kTooLarge, "diagonal requested for more than 24 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  std::vector<double> out(dim);
  for (std::uint64_t x = 0; x < dim; ++x) out[x] = basis_energy(x);
  return out;
}

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_)
    if (s != 1 && s != -1) fail(ErrorCode::kInvalidParams, "spin entries must be +1 or -1");
}

SpinConfig SpinConfig::all_up(int n) { return SpinConfig(std::vector<int>(n, 1)); }

SpinConfig SpinConfig::from_index(std::uint64_t index, int n) {
  std::vector<int> s(n);
  for (int q = 0; q < n; ++q) s[q] = ((index >> (n - 1 - q)) & 1U) ? -1 : 1;
  return SpinConfig(std::move(s));
}

std::uint64_t SpinConfig::index() const {
  std::uint64_t x = 0;
  for (int s : spins_) x = (x << 1) | (s < 0 ? 1U : 0U);
  return x;
}

std::string SpinConfig::str() const {
  std::string out;
  for (int s : spins_) out.push_back(s > 0 ? '+' : '-');
  return out;
}

AnnealSchedule AnnealSchedule::linear(double scale) {
  return {[scale](double s) { return scale * (1.0 - s); }, [scale](double s) { return scale * s; }};
}

IsingProblem build_pfc(const PfcParams& p) {
  p.validate();
  const int n = p.n_qubits();
  std::vector<double> h(n);
  std::vector<Coupling> J;
  for (int i = 0; i < p.M; ++i) {
    h[aux_qubit(i)] = -p.R;
    h[backbone_qubit(p, i)] = p.R * (1.0 - p.d);
    J.push_back({aux_qubit(i), backbone_qubit(p, i), -p.R});
  }
  for (int i = 0; i + 1 < p.M; ++i) J.push_back({backbone_qubit(p, i), backbone_qubit(p, i + 1), -p.R});
  std::ostringstream label;
  label << "pfc(M=" << p.M << ",R=" << p.R << ",d=" << p.d << ")";
  return IsingProblem(n, std::move(h), std::move(J), label.str());
}

double classical_energy(const IsingProblem& problem, const SpinConfig& config) {
  if (config.size() != problem.n_qubits())
    fail(ErrorCode::kLengthMismatch, "configuration has " + std::to_string(config.size()) +
                                         " spins, problem has " + std::to_string(problem.n_qubits()));
  double e = 0.0;
  const auto h = problem.h();
  for (int q = 0; q < config.size(); ++q) e += h[q] * config[q];
  for (const auto& c : problem.couplings()) e += c.value * config[c.i] * config[c.j];
  return e;
}

int hamming(const SpinConfig& a, const SpinConfig& b) {
  if (a.size() != b.size()) fail(ErrorCode::kLengthMismatch, "hamming: configurations differ in length");
  int count = 0;
  for (int q = 0; q < a.size(); ++q) count += a[q] != b[q];
  return count;
}

LowEnergyCensus low_energy_census(const IsingProblem& problem, double tol) {
  const int n = problem.n_qubits();
  if (n > kMaxEnumerationQubits)
    fail(ErrorCode::kTooLarge, "census enumerates at most 24 qubits, got " + std::to_string(n));
  const std::vector<double> energies = problem.diagonal();

  double e0 = std::numeric_limits<double>::infinity();
  for (double e : energies) e0 = std::min(e0, e);
  double e1 = std::numeric_limits<double>::infinity();
  for (double e : energies)
    if (e > e0 + tol) e1 = std::min(e1, e);

  LowEnergyCensus census;
  census.ground_energy = e0;
  census.first_excited_energy = e1;
  census.gap = e1 - e0;
  for (std::uint64_t x = 0; x < energies.size(); ++x) {
    if (std::abs(energies[x] - e0) <= tol) {
      if (census.ground_degeneracy++ == 0) census.ground = SpinConfig::from_index(x, n);
    } else if (std::abs(energies[x] - e1) <= tol) {
      census.first_excited.push_back(SpinConfig::from_index(x, n));
    }
  }
  return census;
}

std::string problem_to_json(const IsingProblem& problem) {
  nlohmann::json j;
  j["n_qubits"] = problem.n_qubits();
  auto h = nlohmann::json::array();
  for (int q = 0; q < problem.n_qubits(); ++q)
    if (problem.h()[q] != 0.0) h.push_back({q, problem.h()[q]});
  j["h"] = h;
  auto J = nlohmann::json::array();
  for (const auto& c : problem.couplings()) J.push_back({c.i, c.j, c.value});
  j["J"] = J;
  j["label"] = problem.label();
  return j.dump();
}

IsingProblem problem_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kValidation, std::string("problem JSON: ") + e.what());
  }
  try {
    const int n = j.at("n_qubits").get<int>();
    if (n <= 0 || n > 62) fail(ErrorCode::kValidation, "problem JSON: n_qubits out of range");
    std::vector<double> h(n, 0.0);
    for (const auto& e : j.value("h", nlohmann::json::array())) {
      const int q = e.at(0).get<int>();
      if (q < 0 || q >= n) fail(ErrorCode::kIndexOutOfRange, "problem JSON: bias index out of range");
      h[q] += e.at(1).get<double>();
    }
    std::vector<Coupling> J;
    for (const auto& e : j.value("J", nlohmann::json::array()))
      J.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    return IsingProblem(n, std::move(h), std::move(J), j.value("label", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kValidation, std::string("problem JSON: ") + e.what());
  }
}

}  // namespace pfc

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

#include "pfc/pfclab.h"

#include "pfc/error.hpp"
#include "pfc/experiment.hpp"
#include "pfc/ising.hpp"
#include "pfc/spectral.hpp"
#include "pfc/version.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct pfc_problem {
  pfc::IsingProblem problem;
};

namespace {

thread_local std::string g_last_error;

pfc_status set_error(pfc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs f, translating exceptions into status codes.
template <class F>
pfc_status guarded(F&& f) noexcept {
  try {
    g_last_error.clear();
    return f();
  } catch (const pfc::Error& e) {
    return set_error(static_cast<pfc_status>(static_cast<int>(e.code())), e.what());
  } catch (const pfc::experiment::Json::exception& e) {
    return set_error(PFC_ERR_VALIDATION, std::string("config: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PFC_ERR_TOO_LARGE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PFC_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PFC_ERR_INTERNAL, "unknown failure");
  }
}

pfc_status null_arg(const char* name) { return set_error(PFC_ERR_NULL_ARGUMENT, std::string(name) + " is null"); }

pfc::experiment::Json parse(const char* text) { return pfc::experiment::Json::parse(text); }

}  // namespace

extern "C" {

const char* pfc_version(void) { return pfc::kVersion; }

const char* pfc_status_name(pfc_status status) {
  switch (status) {
    case PFC_OK: return "ok";
    case PFC_ERR_NULL_ARGUMENT: return "null_argument";
    case PFC_ERR_INTERNAL: return "internal";
    default:
      if (status >= PFC_ERR_INVALID_PARAMS && status <= PFC_ERR_IO)
        return pfc::to_string(static_cast<pfc::ErrorCode>(static_cast<int>(status)));
      return "unknown";
  }
}

const char* pfc_last_error(void) { return g_last_error.c_str(); }

void pfc_string_free(char* s) { std::free(s); }

pfc_status pfc_problem_create(int n_qubits, const double* h, size_t n_couplings, const int* ci, const int* cj,
                              const double* cj_value, pfc_problem** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    *out = nullptr;
    if (n_qubits < 0) return set_error(PFC_ERR_INVALID_PARAMS, "n_qubits must be non-negative");
    if (n_qubits > 0 && !h) return null_arg("h");
    if (n_couplings > 0 && (!ci || !cj || !cj_value)) return null_arg("couplings");
    std::vector<double> hv(h, h + n_qubits);
    std::vector<pfc::Coupling> cs;
    cs.reserve(n_couplings);
    for (size_t k = 0; k < n_couplings; ++k) cs.push_back({ci[k], cj[k], cj_value[k]});
    *out = new pfc_problem{pfc::IsingProblem(n_qubits, std::move(hv), std::move(cs))};
    return PFC_OK;
  });
}

pfc_status pfc_problem_build_pfc(int M, double R, double d, pfc_problem** out) {
  return guarded([&] {
    if (!out) return null_arg("out");
    *out = nullptr;
    *out = new pfc_problem{pfc::build_pfc({M, R, d})};
    return PFC_OK;
  });
}

void pfc_problem_free(pfc_problem* problem) { delete problem; }

int pfc_problem_n_qubits(const pfc_problem* problem) { return problem ? problem->problem.n_qubits() : -1; }

pfc_status pfc_problem_energy(const pfc_problem* problem, const int* spins, double* energy) {
  return guarded([&] {
    if (!problem) return null_arg("problem");
    if (!energy) return null_arg("energy");
    const int n = problem->problem.n_qubits();
    if (n > 0 && !spins) return null_arg("spins");
    *energy = pfc::classical_energy(problem->problem, pfc::SpinConfig(std::vector<int>(spins, spins + n)));
    return PFC_OK;
  });
}

pfc_status pfc_problem_to_json(const pfc_problem* problem, char** json) {
  return guarded([&] {
    if (!problem) return null_arg("problem");
    if (!json) return null_arg("json");
    *json = dup(pfc::problem_to_json(problem->problem));
    return PFC_OK;
  });
}

pfc_status pfc_problem_census(const pfc_problem* problem, uint64_t* ground_index, double* ground_energy,
                              int* n_first_excited, double* gap) {
  return guarded([&] {
    if (!problem) return null_arg("problem");
    const auto c = pfc::low_energy_census(problem->problem);
    if (ground_index) *ground_index = c.ground.index();
    if (ground_energy) *ground_energy = c.ground_energy;
    if (n_first_excited) *n_first_excited = static_cast<int>(c.first_excited.size());
    if (gap) *gap = c.gap;
    return PFC_OK;
  });
}

pfc_status pfc_problem_min_gap(const pfc_problem* problem, double schedule_scale, double* s_min, double* gap) {
  return guarded([&] {
    if (!problem) return null_arg("problem");
    if (!(schedule_scale > 0) || !std::isfinite(schedule_scale))
      return set_error(PFC_ERR_INVALID_PARAMS, "schedule_scale must be positive and finite");
    const auto mg = pfc::spectral::min_gap(problem->problem, pfc::AnnealSchedule::linear(schedule_scale));
    if (s_min) *s_min = mg.s_min;
    if (gap) *gap = mg.gap;
    return PFC_OK;
  });
}

pfc_status pfc_experiment_validate(const char* config_json, char** errors) {
  return guarded([&] {
    if (errors) *errors = nullptr;
    if (!config_json) return null_arg("config_json");
    const auto list = pfc::experiment::validate(parse(config_json));
    if (list.empty()) return PFC_OK;
    const std::string text = pfc::experiment::format_errors(list);
    if (errors) *errors = dup(text);
    return set_error(PFC_ERR_VALIDATION, text);
  });
}

pfc_status pfc_experiment_effective_config(const char* config_json, char** effective_json) {
  return guarded([&] {
    if (!config_json) return null_arg("config_json");
    if (!effective_json) return null_arg("effective_json");
    *effective_json = dup(pfc::experiment::effective_config(parse(config_json)).dump(2));
    return PFC_OK;
  });
}

pfc_status pfc_experiment_run(const char* config_json, char** manifest_json) {
  return guarded([&] {
    if (manifest_json) *manifest_json = nullptr;
    if (!config_json) return null_arg("config_json");
    const auto manifest = pfc::experiment::run(parse(config_json));
    if (manifest_json) *manifest_json = dup(manifest.to_json().dump(2));
    return PFC_OK;
  });
}

pfc_status pfc_experiment_names(char** names) {
  return guarded([&] {
    if (!names) return null_arg("names");
    std::string out;
    for (const auto& n : pfc::experiment::kind_names()) out += n + "\n";
    *names = dup(out);
    return PFC_OK;
  });
}

}  // extern "C"

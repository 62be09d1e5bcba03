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

#ifndef PFC_PFCLAB_H_
#define PFC_PFCLAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PFCLAB_BUILDING)
#define PFC_API __attribute__((visibility("default")))
#else
#define PFC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Status codes. Values 1..9 mirror the library's internal error categories.
typedef enum pfc_status {
  PFC_OK = 0,
  PFC_ERR_INVALID_PARAMS = 1,
  PFC_ERR_LENGTH_MISMATCH = 2,
  PFC_ERR_TOO_LARGE = 3,
  PFC_ERR_INDEX_OUT_OF_RANGE = 4,
  PFC_ERR_NON_FINITE = 5,
  PFC_ERR_EIGENSOLVER = 6,
  PFC_ERR_STEP_UNDERFLOW = 7,
  PFC_ERR_VALIDATION = 8,
  PFC_ERR_IO = 9,
  PFC_ERR_NULL_ARGUMENT = 10,
  PFC_ERR_INTERNAL = 11,
} pfc_status;

typedef struct pfc_problem pfc_problem;

PFC_API const char* pfc_version(void);
PFC_API const char* pfc_status_name(pfc_status status);

// Message of the last failed call on this thread; "" when none. Valid until
// the next call on the same thread.
PFC_API const char* pfc_last_error(void);

// Strings returned through char** out-parameters are owned by the caller.
PFC_API void pfc_string_free(char* s);

// Ising problem sum h_i s_i + sum J_ij s_i s_j (GHz). Couplings are given as
// parallel arrays; repeated pairs are summed.
PFC_API pfc_status pfc_problem_create(int n_qubits, const double* h, size_t n_couplings, const int* ci,
                                      const int* cj, const double* cj_value, pfc_problem** out);
// Perturbed ferromagnetic chain with M subsystems, scale R and perturbation d.
PFC_API pfc_status pfc_problem_build_pfc(int M, double R, double d, pfc_problem** out);
PFC_API void pfc_problem_free(pfc_problem* problem);

PFC_API int pfc_problem_n_qubits(const pfc_problem* problem);
// spins holds n_qubits entries of +1 or -1.
PFC_API pfc_status pfc_problem_energy(const pfc_problem* problem, const int* spins, double* energy);
PFC_API pfc_status pfc_problem_to_json(const pfc_problem* problem, char** json);

// Exhaustive search of the two lowest classical levels.
PFC_API pfc_status pfc_problem_census(const pfc_problem* problem, uint64_t* ground_index, double* ground_energy,
                                      int* n_first_excited, double* gap);

// Minimum gap E1 - E0 (GHz) under the linear schedule A = scale (1-s),
// B = scale s.
PFC_API pfc_status pfc_problem_min_gap(const pfc_problem* problem, double schedule_scale, double* s_min, double* gap);

// Experiment driver. Configs are JSON text.
// On PFC_ERR_VALIDATION, *errors (if non-null) receives one "field: message"
// line per problem.
PFC_API pfc_status pfc_experiment_validate(const char* config_json, char** errors);
// Effective config with defaults and presets applied.
PFC_API pfc_status pfc_experiment_effective_config(const char* config_json, char** effective_json);
// Runs the experiment; *manifest_json receives the manifest also written to
// the output directory.
PFC_API pfc_status pfc_experiment_run(const char* config_json, char** manifest_json);
// Newline-separated experiment names.
PFC_API pfc_status pfc_experiment_names(char** names);

#ifdef __cplusplus
}
#endif

#endif  // PFC_PFCLAB_H_

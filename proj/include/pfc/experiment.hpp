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

// Experiment driver: JSON configuration, validation, dispatch to the
// numerical modules, CSV/SVG output and the run manifest.
//
// A configuration is a JSON object. Figure presets ("fig2".."fig10") come with
// every setting filled in; the plain experiment kinds require their input
// sections and default only the fields inside them. effective_config() shows
// exactly what a run will use, and that object is echoed into the manifest.

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pfc::experiment {

using Json = nlohmann::json;

enum class Kind {
  kThermo,
  kSpectrum,
  kPhaseDiagram,
  kLandscape,
  kTraceNorm,
  kSvmcSweep,
  kSvmcScaling,
  kQuantumClosed,
  kQuantumOpen,
  kRateProfile,
  kFig2,
  kFig3,
  kFig4,
  kFig5,
  kFig6,
  kFig7,
  kFig8,
  kFig9,
  kFig10,
};

const char* to_string(Kind kind);
// Returns false for an unknown name.
bool kind_from_string(std::string_view name, Kind& kind);
std::vector<std::string> kind_names();

struct ValidationError {
  std::string field;  // dotted path, e.g. "params.d"
  std::string message;
};

std::string format_errors(const std::vector<ValidationError>& errors);

// Command-line overrides; unset members leave the file value alone.
struct Overrides {
  std::string experiment;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string output_dir;
  bool plot = false;
  int threads = 0;
};

// Precedence: override > file > preset/default.
Json apply_overrides(Json config, const Overrides& overrides);

// Preset values and per-field defaults merged under the user's settings.
// Throws Error(kValidation) when the experiment name is missing or unknown.
Json effective_config(const Json& config);

// Full structural and range validation of a user config (defaults are applied
// first). Never throws; an empty result means the config is runnable.
std::vector<ValidationError> validate(const Json& config);

struct ManifestFile {
  std::string path;  // relative to output_dir
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct ResultManifest {
  Json config;
  std::vector<ManifestFile> files;
  double wall_clock_s = 0.0;
  std::string version;
  std::uint64_t seed = 0;

  Json to_json() const;
};

inline constexpr const char* kManifestName = "manifest.json";

// Validates, runs, writes outputs and finally manifest.json (atomically, via
// rename). Throws Error(kValidation) with every problem listed when the
// config is invalid. On any later failure the files written so far are
// removed before the exception propagates.
ResultManifest run(const Json& config);

std::string sha256_hex(std::string_view data);

}  // namespace pfc::experiment

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

// pfc-lab: runs one experiment from a JSON config. Exit status 0 on success,
// 1 for invalid input, 2 when the run itself fails.
#include "pfc/pfclab.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

using Owned = std::unique_ptr<char, decltype(&pfc_string_free)>;

Owned owned(char* s) { return Owned(s, &pfc_string_free); }

int exit_code(pfc_status st) {
  if (st == PFC_OK) return kExitOk;
  if (st == PFC_ERR_VALIDATION || st == PFC_ERR_INVALID_PARAMS || st == PFC_ERR_LENGTH_MISMATCH ||
      st == PFC_ERR_TOO_LARGE || st == PFC_ERR_INDEX_OUT_OF_RANGE || st == PFC_ERR_NULL_ARGUMENT)
    return kExitValidation;
  return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfc-lab: perturbed ferromagnetic chain annealing experiments"};
  app.set_version_flag("--version", std::string(pfc_version()));

  std::string experiment, config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool plot = false, list = false, dry_run = false;
  app.add_option("experiment", experiment, "experiment or figure preset name");
  app.add_option("--config,-c", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--out,-o", out_dir, "output directory");
  app.add_flag("--plot", plot, "also write SVG charts");
  app.add_option("--threads,-j", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--list", list, "print experiment names and exit");
  app.add_flag("--dry-run", dry_run, "validate and print the effective config without running");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (list) {
    char* names = nullptr;
    pfc_experiment_names(&names);
    auto guard = owned(names);
    std::cout << names;
    return kExitOk;
  }
  if (experiment.empty()) {
    std::cerr << "pfc-lab: missing experiment name (see --list)\n";
    return kExitValidation;
  }

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    config = nlohmann::json::parse(buf.str(), nullptr, false);
    if (config.is_discarded() || !config.is_object()) {
      std::cerr << "pfc-lab: " << config_path << ": not a JSON object\n";
      return kExitValidation;
    }
  }
  // Command-line values take precedence over the file.
  if (config.contains("experiment") && config["experiment"] != experiment)
    std::cerr << "pfc-lab: note: config names experiment " << config["experiment"] << ", running '" << experiment
              << "'\n";
  config["experiment"] = experiment;
  if (*seed_opt) config["seed"] = seed;
  if (!out_dir.empty()) config["output_dir"] = out_dir;
  if (plot) config["plot"] = true;
  if (threads > 0) config["threads"] = threads;
  const std::string text = config.dump();

  char* errors = nullptr;
  pfc_status st = pfc_experiment_validate(text.c_str(), &errors);
  auto errors_guard = owned(errors);
  if (st != PFC_OK) {
    std::cerr << "pfc-lab: invalid configuration\n" << (errors ? errors : pfc_last_error());
    if (errors == nullptr) std::cerr << "\n";
    return exit_code(st);
  }

  if (dry_run) {
    char* eff = nullptr;
    st = pfc_experiment_effective_config(text.c_str(), &eff);
    auto guard = owned(eff);
    if (st != PFC_OK) {
      std::cerr << "pfc-lab: " << pfc_last_error() << "\n";
      return exit_code(st);
    }
    std::cout << eff << "\n";
    return kExitOk;
  }

  char* manifest = nullptr;
  st = pfc_experiment_run(text.c_str(), &manifest);
  auto manifest_guard = owned(manifest);
  if (st != PFC_OK) {
    std::cerr << "pfc-lab: " << experiment << " failed (" << pfc_status_name(st) << "): " << pfc_last_error() << "\n";
    return exit_code(st);
  }
  const auto m = nlohmann::json::parse(manifest);
  std::cout << experiment << ": wrote " << m["files"].size() << " files to " << m["config"]["output_dir"].get<std::string>()
            << " in " << m["wall_clock_s"].get<double>() << " s\n";
  return kExitOk;
}

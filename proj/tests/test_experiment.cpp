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

#include "pfc/error.hpp"
#include "pfc/experiment.hpp"

#include <doctest.h>

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

using namespace pfc;
using experiment::Json;
namespace fs = std::filesystem;

namespace {

bool has_error(const std::vector<experiment::ValidationError>& errors, const std::string& field) {
  for (const auto& e : errors)
    if (e.field == field) return true;
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Json thermo_config(const std::string& dir) {
  return {{"experiment", "thermo"},
          {"output_dir", dir},
          {"params", {{"M", {2, 3}}, {"d", {0.1, 0.3}}}},
          {"beta", {{"start", 0.1}, {"stop", 10.0}, {"num", 7}, {"log", true}}}};
}

Json svmc_config(const std::string& dir, int threads) {
  return {{"experiment", "svmc_sweep"},
          {"output_dir", dir},
          {"seed", 42},
          {"threads", threads},
          {"params", {{"M", 2}, {"d", 0.1}}},
          {"campaign",
           {{"variants", {"svmc", "spherical-svmc-tf"}},
            {"sweeps", {5, 50}},
            {"n_samples", 100},
            {"repeats", 4},
            {"bootstrap_resamples", 100}}}};
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("kind names round trip") {
  const auto names = experiment::kind_names();
  CHECK(names.size() == 19);
  for (const auto& n : names) {
    experiment::Kind k;
    REQUIRE(experiment::kind_from_string(n, k));
    CHECK(n == experiment::to_string(k));
  }
  experiment::Kind k;
  CHECK(!experiment::kind_from_string("fig11", k));
}

TEST_CASE("validation examples") {
  auto errors = experiment::validate({{"experiment", "thermo"}, {"params", {{"M", 2}, {"d", 1.5}}}, {"beta", 1.0}});
  CHECK(has_error(errors, "params.d"));
  CHECK(experiment::format_errors(errors).find("params.d") != std::string::npos);

  errors = experiment::validate(
      {{"experiment", "quantum_open"}, {"params", {{"M", 3}, {"d", 0.1}}}, {"dynamics", {{"t_anneal_ns", 10}}}});
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].field == "bath");
  CHECK(errors[0].message.find("missing") != std::string::npos);

  CHECK(experiment::validate({{"experiment", "fig4"}}).empty());
  for (const auto& n : experiment::kind_names()) {
    if (n.rfind("fig", 0) == 0) CHECK(experiment::validate({{"experiment", n}}).empty());
  }
}

TEST_CASE("errors are aggregated with field paths") {
  const Json cfg = {{"experiment", "svmc_sweep"},
                    {"seed", -3},
                    {"colour", "red"},
                    {"params", {{"M", 1}, {"d", 0.1}, {"Q", 1}}},
                    {"campaign", {{"variants", {"svmc", "quantum"}}, {"sweeps", {10, 0}}, {"repeats", "many"}}}};
  const auto errors = experiment::validate(cfg);
  CHECK(has_error(errors, "seed"));
  CHECK(has_error(errors, "colour"));
  CHECK(has_error(errors, "params.M"));
  CHECK(has_error(errors, "params.Q"));
  CHECK(has_error(errors, "campaign.variants[1]"));
  CHECK(has_error(errors, "campaign.sweeps[1]"));
  CHECK(has_error(errors, "campaign.repeats"));
  CHECK(errors.size() == 7);
}

TEST_CASE("malformed input never throws") {
  for (const Json& cfg : {Json(nullptr), Json(3), Json::array(), Json{{"experiment", 5}}, Json{{"experiment", "nope"}},
                          Json{{"experiment", "thermo"}, {"params", "x"}, {"beta", {{"start", 1}}}},
                          Json{{"experiment", "spectrum"}, {"params", {{"M", {}}, {"d", Json::object()}}},
                               {"s_grid", {{"start", 0}, {"stop", 1}, {"num", 1e12}}}},
                          Json{{"experiment", "landscape"}, {"params", {{"M", 2}, {"d", 0.1}}},
                               {"landscape", {{"s", {0.5}}, {"n_theta", -4}}}},
                          Json{{"experiment", "fig5"}, {"probe_s", "late"}, {"campaign", {{"sweeps", nullptr}}}}}) {
    std::vector<experiment::ValidationError> errors;
    CHECK_NOTHROW(errors = experiment::validate(cfg));
    CHECK(!errors.empty());
  }
}

TEST_CASE("size limits are enforced per experiment") {
  CHECK(has_error(
      experiment::validate({{"experiment", "quantum_closed"}, {"params", {{"M", 6}, {"d", 0.1}}}, {"dynamics", {{"t_anneal_ns", 1}}}}),
      "params.M"));
  CHECK(has_error(experiment::validate({{"experiment", "landscape"},
                                        {"params", {{"M", {2, 3}}, {"d", 0.1}}},
                                        {"landscape", {{"s", 0.5}}}}),
                  "params.M"));
  CHECK(experiment::validate({{"experiment", "landscape"}, {"params", {{"M", 40}, {"d", 0.01}}}, {"landscape", {{"s", 0.5}}}})
            .empty());
}

TEST_CASE("effective config fills defaults and keeps user values") {
  const Json eff = experiment::effective_config(
      {{"experiment", "fig6"}, {"seed", 5}, {"campaign", {{"n_samples", 7}}}, {"params", {{"d", {0.1}}}}});
  CHECK(eff["seed"] == 5);
  CHECK(eff["campaign"]["n_samples"] == 7);
  CHECK(eff["campaign"]["repeats"] == 50);
  CHECK(eff["params"]["M"] == 3);
  CHECK(eff["params"]["d"] == Json::array({0.1}));
  CHECK(eff["dynamics"]["t_anneal_ns"].size() == 6);
  CHECK(eff["bath"]["omega_c_ghz"] == 4.0);

  const Json fig5 = experiment::effective_config({{"experiment", "fig5"}});
  CHECK(fig5["probe_s"] == 0.83);
  CHECK(fig5["campaign"]["variants"] == Json::array({"spherical-svmc-tf"}));
  CHECK(fig5["campaign"]["sweeps"] == Json::array({10000}));
  CHECK(fig5["dynamics"]["t_anneal_ns"] == Json::array({200.0}));

  // Plain experiments only get defaults inside sections the user gave.
  const Json plain = experiment::effective_config({{"experiment", "quantum_open"}});
  CHECK(!plain.contains("bath"));
  CHECK(plain["output_dir"] == "pfc-out");
}

TEST_CASE("overrides take precedence over the file") {
  experiment::Overrides o;
  o.experiment = "fig4";
  o.has_seed = true;
  o.seed = 9;
  o.output_dir = "elsewhere";
  o.plot = true;
  o.threads = 3;
  const Json cfg = experiment::apply_overrides({{"experiment", "fig3"}, {"seed", 1}, {"output_dir", "x"}}, o);
  CHECK(cfg["experiment"] == "fig4");
  CHECK(cfg["seed"] == 9);
  CHECK(cfg["output_dir"] == "elsewhere");
  CHECK(cfg["plot"] == true);
  CHECK(cfg["threads"] == 3);
  const Json untouched = experiment::apply_overrides({{"seed", 1}}, experiment::Overrides{});
  CHECK(untouched == Json{{"seed", 1}});
}

TEST_CASE("runs list every produced file in the manifest") {
  const fs::path dir = fs::current_path() / "exp_thermo";
  fs::remove_all(dir);
  Json cfg = thermo_config(dir.string());
  cfg["plot"] = true;
  const auto m = experiment::run(cfg);
  std::set<std::string> on_disk;
  for (const auto& e : fs::directory_iterator(dir)) on_disk.insert(e.path().filename().string());
  std::set<std::string> listed{"manifest.json"};
  for (const auto& f : m.files) {
    listed.insert(f.path);
    CHECK(experiment::sha256_hex(slurp(dir / f.path)) == f.sha256);
    CHECK(fs::file_size(dir / f.path) == f.bytes);
  }
  CHECK(on_disk == listed);
  CHECK(on_disk.count("thermo.csv") == 1);
  CHECK(on_disk.count("thermo.svg") == 1);

  const Json written = Json::parse(slurp(dir / "manifest.json"));
  CHECK(written["config"]["beta"]["num"] == 7);
  CHECK(written["config"]["schedule"]["scale"] == 3.0);
  CHECK(written["version"] == m.version);
  CHECK(written["seed"] == 0);
  CHECK(written["files"].size() == m.files.size());

  const std::string csv = slurp(dir / "thermo.csv");
  CHECK(csv.rfind("M,R,d,beta,log_Z,F,avg_mag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2 * 7);
  // Rerunning into the same directory replaces the earlier outputs.
  CHECK_NOTHROW(experiment::run(cfg));
  fs::remove_all(dir);
}

TEST_CASE("identical config and seed give byte-identical csv") {
  const fs::path a = fs::current_path() / "exp_det_a", b = fs::current_path() / "exp_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  experiment::run(svmc_config(a.string(), 1));
  experiment::run(svmc_config(b.string(), 2));
  CHECK(slurp(a / "svmc.csv") == slurp(b / "svmc.csv"));
  const std::string csv = slurp(a / "svmc.csv");
  CHECK(csv.rfind("variant,M,R,d,sweeps,P_ground_median,P_ground_lo,P_ground_hi,P_manifold_median,P_manifold_lo,"
                  "P_manifold_hi,n_samples,repeats,seed\n",
                  0) == 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("invalid configs fail before touching the disk") {
  const fs::path dir = fs::current_path() / "exp_invalid";
  fs::remove_all(dir);
  Json cfg = thermo_config(dir.string());
  cfg["params"]["d"] = 1.5;
  bool validation = false;
  try {
    experiment::run(cfg);
  } catch (const Error& e) {
    validation = e.code() == ErrorCode::kValidation;
  }
  CHECK(validation);
  CHECK(!fs::exists(dir));
}

TEST_CASE("runtime failures leave no partial output") {
  const fs::path dir = fs::current_path() / "exp_fail";
  fs::remove_all(dir);
  // Tolerances this tight force the step size below its floor.
  const Json cfg = {{"experiment", "quantum_closed"},
                    {"output_dir", dir.string()},
                    {"params", {{"M", 2}, {"d", 0.1}}},
                    {"dynamics", {{"t_anneal_ns", 1.0}, {"rtol", 1e-300}, {"atol", 1e-300}, {"grid_points", 3}, {"dense_points", 0}}}};
  CHECK(experiment::validate(cfg).empty());
  bool underflow = false;
  try {
    experiment::run(cfg);
  } catch (const Error& e) {
    underflow = e.code() == ErrorCode::kStepUnderflow;
  }
  CHECK(underflow);
  CHECK(!fs::exists(dir));
}

TEST_CASE("small runs of each experiment family") {
  const fs::path root = fs::current_path() / "exp_small";
  fs::remove_all(root);
  auto run_in = [&](const std::string& name, Json cfg) {
    cfg["output_dir"] = (root / name).string();
    cfg["plot"] = true;
    const auto m = experiment::run(cfg);
    std::set<std::string> files;
    for (const auto& f : m.files) files.insert(f.path);
    return files;
  };
  auto f = run_in("spectrum", {{"experiment", "spectrum"},
                               {"params", {{"M", 2}, {"d", 0.09}}},
                               {"levels", 4},
                               {"s_grid", {{"start", 0}, {"stop", 1}, {"num", 11}}}});
  CHECK(f.count("spectrum_M2_d0.09.csv"));
  CHECK(f.count("gaps.csv"));
  CHECK(slurp(root / "spectrum" / "spectrum_M2_d0.09.csv").rfind("s,E0,E1,E2,E3\n", 0) == 0);

  f = run_in("phase", {{"experiment", "phase_diagram"},
                       {"params", {{"M", 2}}},
                       {"d_grid", {0.09, 0.5}},
                       {"s_grid", {{"start", 0}, {"stop", 1}, {"num", 21}}}});
  CHECK(f.count("phase_diagram.csv"));
  CHECK(f.count("phase_boundary.csv"));

  f = run_in("land", {{"experiment", "landscape"}, {"params", {{"M", 2}, {"d", 0.09}}}, {"landscape", {{"s", {0.5, 0.9}}, {"n_theta", 41}}}});
  CHECK(f.count("landscape_s0.5.csv"));
  CHECK(f.count("hyperplane_s0.9.csv"));
  CHECK(f.count("landscape_minima.csv"));
  CHECK(slurp(root / "land" / "landscape_s0.5.csv").rfind("# s = 0.5\ntheta_a,theta_b,V\n", 0) == 0);

  f = run_in("tn", {{"experiment", "trace_norm"}, {"params", {{"M", 2}, {"d", 0.09}}}, {"trace_norm", {{"s", 0.835}, {"n_theta", 41}}}});
  CHECK(f.count("trace_norm_s0.835.csv"));
  CHECK(f.count("trace_norm_hyperplane_s0.835.csv"));

  f = run_in("rate", {{"experiment", "rate_profile"}, {"params", {{"M", 2}, {"d", 0.09}}}, {"bath", Json::object()}, {"s_grid", {0.5, 1.0}}});
  CHECK(slurp(root / "rate" / "rate_M2_d0.09.csv").rfind("s,gamma_10\n", 0) == 0);

  f = run_in("closed", {{"experiment", "quantum_closed"},
                        {"params", {{"M", 2}, {"d", 0.3}}},
                        {"dynamics", {{"t_anneal_ns", {1, 2}}, {"grid_points", 11}, {"dense_points", 5}, {"report_levels", 3}}}});
  CHECK(f.count("endpoints.csv"));
  CHECK(f.count("populations_closed_M2_d0.3_T1.csv"));
  CHECK(slurp(root / "closed" / "populations_closed_M2_d0.3_T2.csv").rfind("s,P_E0,P_E1,P_E2\n", 0) == 0);
  const std::string endpoints = slurp(root / "closed" / "endpoints.csv");
  CHECK(endpoints.rfind("mode,M,d,t_anneal_ns,P_ground_final,P_manifold_final\n", 0) == 0);

  f = run_in("open", {{"experiment", "quantum_open"},
                      {"threads", 2},
                      {"params", {{"M", 2}, {"d", 0.3}}},
                      {"bath", Json::object()},
                      {"dynamics", {{"t_anneal_ns", 1}, {"grid_points", 11}, {"dense_points", 0}}}});
  CHECK(f.count("populations_open_M2_d0.3_T1.csv"));
  fs::remove_all(root);
}

}  // TEST_SUITE

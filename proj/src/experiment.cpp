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

#include "pfc/experiment.hpp"

#include "output_dir.hpp"

#include "pfc/ame.hpp"
#include "pfc/csv.hpp"
#include "pfc/error.hpp"
#include "pfc/semiclassical.hpp"
#include "pfc/spectral.hpp"
#include "pfc/svg.hpp"
#include "pfc/svmc.hpp"
#include "pfc/thermo.hpp"
#include "pfc/units.hpp"
#include "pfc/version.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace pfc::experiment {

namespace fs = std::filesystem;
using detail::Output;

namespace {

struct KindName {
  Kind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {Kind::kThermo, "thermo"},
    {Kind::kSpectrum, "spectrum"},
    {Kind::kPhaseDiagram, "phase_diagram"},
    {Kind::kLandscape, "landscape"},
    {Kind::kTraceNorm, "trace_norm"},
    {Kind::kSvmcSweep, "svmc_sweep"},
    {Kind::kSvmcScaling, "svmc_scaling"},
    {Kind::kQuantumClosed, "quantum_closed"},
    {Kind::kQuantumOpen, "quantum_open"},
    {Kind::kRateProfile, "rate_profile"},
    {Kind::kFig2, "fig2"},
    {Kind::kFig3, "fig3"},
    {Kind::kFig4, "fig4"},
    {Kind::kFig5, "fig5"},
    {Kind::kFig6, "fig6"},
    {Kind::kFig7, "fig7"},
    {Kind::kFig8, "fig8"},
    {Kind::kFig9, "fig9"},
    {Kind::kFig10, "fig10"},
};

// ---------------------------------------------------------------------------
// Defaults and presets

Json decades(int lo, int hi) {
  Json out = Json::array();
  for (int e = lo; e <= hi; ++e) out.push_back(static_cast<long long>(std::llround(std::pow(10.0, e))));
  return out;
}

Json linear_grid(double start, double stop, int num) { return {{"start", start}, {"stop", stop}, {"num", num}}; }

Json campaign_defaults() {
  return {{"variants", {"spherical-svmc-tf"}},
          {"n_samples", 20000},
          {"repeats", 50},
          {"temperature_mk", 12.0},
          {"bootstrap_resamples", 10000},
          {"readout_s", 1.0}};
}

Json bath_defaults() {
  return {{"temperature_mk", 12.0}, {"omega_c_ghz", 4.0}, {"eta_g2", 1e-3}, {"units", "angular"}};
}

Json dynamics_defaults() {
  return {{"grid_points", 201}, {"dense_points", 201}, {"dense_half_width", 0.05}, {"rtol", 1e-8},
          {"atol", 1e-10},      {"report_levels", 0},  {"bath_levels", 0}};
}

Json angle_section_defaults() { return {{"n_theta", 201}, {"hyperplane_points", 201}}; }

const std::map<std::string, std::function<Json()>>& section_defaults() {
  static const std::map<std::string, std::function<Json()>> m = {
      {"params", [] { return Json{{"R", 1.0}}; }},
      {"schedule", [] { return Json{{"scale", 3.0}}; }},
      {"campaign", campaign_defaults},
      {"bath", bath_defaults},
      {"dynamics", dynamics_defaults},
      {"landscape", angle_section_defaults},
      {"trace_norm", angle_section_defaults},
  };
  return m;
}

Json base_defaults() {
  return {{"seed", 0}, {"output_dir", "pfc-out"}, {"threads", 1}, {"plot", false}, {"schedule", {{"scale", 3.0}}}};
}

const Json kFig6Ds = {0.05, 0.1, 0.15, 0.227, 0.3};
const Json kAnnealTimes = {5.0, 10.0, 20.0, 50.0, 100.0, 200.0};

Json preset(Kind kind) {
  Json p = base_defaults();
  switch (kind) {
    case Kind::kFig2:
      p["params"] = {{"M", 2}, {"R", 1.0}};
      p["d_grid"] = linear_grid(0.01, 0.99, 99);
      p["s_grid"] = linear_grid(0.0, 1.0, 101);
      p["cross_sections"] = {0.05, 0.09, 0.2, 0.5};
      p["cross_section_s"] = linear_grid(0.0, 1.0, 501);
      break;
    case Kind::kFig3:
      p["params"] = {{"M", 2}, {"R", 1.0}, {"d", 0.09}};
      p["landscape"] = angle_section_defaults();
      p["landscape"]["s"] = {0.5, 0.78, 0.841, 0.9, 1.0};
      p["trace_norm"] = angle_section_defaults();
      p["trace_norm"]["s"] = {0.835, 0.845};
      break;
    case Kind::kFig4:
    case Kind::kFig8:
      p["params"] = {{"M", {2, 3, 4, 5, 6, 7, 8}}, {"R", 1.0}, {"d", 0.1}};
      p["campaign"] = campaign_defaults();
      p["campaign"]["variants"] =
          kind == Kind::kFig4 ? Json{"svmc", "spherical-svmc-tf"} : Json{"svmc-tf", "spherical-svmc"};
      p["campaign"]["sweeps"] = decades(1, 6);
      break;
    case Kind::kFig5:
      p["params"] = {{"M", 3}, {"R", 1.0}, {"d", 0.1}};
      p["probe_s"] = 0.83;
      p["dynamics"] = dynamics_defaults();
      p["dynamics"]["t_anneal_ns"] = {200.0};
      p["bath"] = bath_defaults();
      p["campaign"] = campaign_defaults();
      p["campaign"]["variants"] = {"spherical-svmc-tf"};
      p["campaign"]["sweeps"] = {10000};
      p["campaign"]["readout_s"] = 0.83;
      break;
    case Kind::kFig6:
    case Kind::kFig9:
    case Kind::kFig10:
      p["params"] = {{"M", kind == Kind::kFig10 ? 2 : 3}, {"R", 1.0}, {"d", kFig6Ds}};
      p["dynamics"] = dynamics_defaults();
      p["dynamics"]["t_anneal_ns"] = kAnnealTimes;
      p["bath"] = bath_defaults();
      p["campaign"] = campaign_defaults();
      p["campaign"]["sweeps"] = decades(1, 6);
      if (kind == Kind::kFig6) p["campaign"]["variants"] = {"svmc", "spherical-svmc-tf"};
      if (kind == Kind::kFig9) p["campaign"]["variants"] = {"svmc-tf", "spherical-svmc"};
      if (kind == Kind::kFig10) p["campaign"]["variants"] = {"svmc", "svmc-tf", "spherical-svmc", "spherical-svmc-tf"};
      break;
    case Kind::kFig7:
      p["params"] = {{"M", 3}, {"R", 1.0}, {"d", 0.05}};
      p["dynamics"] = dynamics_defaults();
      p["dynamics"]["t_anneal_ns"] = {200.0};
      p["bath"] = bath_defaults();
      break;
    default:
      break;
  }
  return p;
}

bool is_preset(Kind k) { return k >= Kind::kFig2; }

// Sections each plain experiment needs from the user.
std::vector<std::string> required_sections(Kind k) {
  switch (k) {
    case Kind::kThermo: return {"params", "beta"};
    case Kind::kSpectrum: return {"params", "s_grid"};
    case Kind::kPhaseDiagram: return {"params", "d_grid", "s_grid"};
    case Kind::kLandscape: return {"params", "landscape"};
    case Kind::kTraceNorm: return {"params", "trace_norm"};
    case Kind::kSvmcSweep:
    case Kind::kSvmcScaling: return {"params", "campaign"};
    case Kind::kQuantumClosed: return {"params", "dynamics"};
    case Kind::kQuantumOpen: return {"params", "dynamics", "bath"};
    case Kind::kRateProfile: return {"params", "bath", "s_grid"};
    default: return {};
  }
}

const std::set<std::string>& known_top_level() {
  static const std::set<std::string> s = {"experiment", "seed",     "output_dir", "threads",        "plot",
                                          "params",     "schedule", "campaign",   "bath",           "dynamics",
                                          "landscape",  "trace_norm", "beta",     "s_grid",         "d_grid",
                                          "levels",     "probe_s",  "cross_sections", "cross_section_s"};
  return s;
}

// ---------------------------------------------------------------------------
// Validation

class Checker {
 public:
  std::vector<ValidationError> errors;

  void error(const std::string& field, const std::string& message) { errors.push_back({field, message}); }

  const Json* section(const Json& cfg, const std::string& key, bool required) {
    if (!cfg.contains(key)) {
      if (required) error(key, "missing required field");
      return nullptr;
    }
    if (!cfg[key].is_object()) {
      error(key, "must be an object");
      return nullptr;
    }
    return &cfg[key];
  }

  void known_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) error(path + "." + k, "unknown field");
    }
  }

  // A finite number within [lo, hi] (open ends when the flags say so).
  bool number(const Json& j, const std::string& path, double lo, double hi, bool lo_open = false,
              bool hi_open = false) {
    if (!j.is_number()) {
      error(path, "must be a number");
      return false;
    }
    const double v = j.get<double>();
    const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    if (!ok) {
      std::ostringstream m;
      m << "out of range: " << format_number(v) << " not in " << (lo_open ? "(" : "[") << format_number(lo) << ", "
        << format_number(hi) << (hi_open ? ")" : "]");
      error(path, m.str());
    }
    return ok;
  }

  bool integer(const Json& j, const std::string& path, long long lo, long long hi) {
    if (!j.is_number_integer()) {
      error(path, "must be an integer");
      return false;
    }
    const auto v = j.get<long long>();
    if (j.is_number_unsigned() && j.get<unsigned long long>() > static_cast<unsigned long long>(hi)) {
      error(path, "out of range");
      return false;
    }
    if (v < lo || v > hi) {
      error(path, "out of range: " + std::to_string(v) + " not in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
      return false;
    }
    return true;
  }

  // Scalar, array, or {"start", "stop", "num", "log"} grid of numbers.
  void number_list(const Json& j, const std::string& path, double lo, double hi, bool lo_open = false,
                   bool hi_open = false) {
    if (j.is_number()) {
      number(j, path, lo, hi, lo_open, hi_open);
    } else if (j.is_array()) {
      if (j.empty()) error(path, "must not be empty");
      for (std::size_t i = 0; i < j.size(); ++i)
        number(j[i], path + "[" + std::to_string(i) + "]", lo, hi, lo_open, hi_open);
    } else if (j.is_object()) {
      known_keys(j, path, {"start", "stop", "num", "log"});
      for (const char* k : {"start", "stop", "num"})
        if (!j.contains(k)) error(path + "." + k, "missing required field");
      if (j.contains("start")) number(j["start"], path + ".start", lo, hi, lo_open, hi_open);
      if (j.contains("stop")) number(j["stop"], path + ".stop", lo, hi, lo_open, hi_open);
      if (j.contains("num")) integer(j["num"], path + ".num", 1, 1'000'000);
      if (j.contains("log")) {
        if (!j["log"].is_boolean()) error(path + ".log", "must be a boolean");
        else if (j["log"].get<bool>() && lo < 0) error(path + ".log", "log grid needs positive values");
      }
    } else {
      error(path, "must be a number, an array or a {start, stop, num} grid");
    }
  }

  void integer_list(const Json& j, const std::string& path, long long lo, long long hi) {
    if (j.is_array()) {
      if (j.empty()) error(path, "must not be empty");
      for (std::size_t i = 0; i < j.size(); ++i) integer(j[i], path + "[" + std::to_string(i) + "]", lo, hi);
    } else {
      integer(j, path, lo, hi);
    }
  }
};

struct Limits {
  int max_M = 1000;
  bool single = false;  // M and d must be scalars
};

Limits limits_for(Kind k) {
  switch (k) {
    case Kind::kSpectrum:
    case Kind::kTraceNorm:
    case Kind::kRateProfile:
    case Kind::kFig2:
    case Kind::kFig3: return {spectral::kMaxDenseQubits / 2, k == Kind::kTraceNorm || k == Kind::kFig3};
    case Kind::kPhaseDiagram: return {spectral::kMaxDenseQubits / 2, true};
    case Kind::kLandscape: return {1000, true};
    case Kind::kQuantumClosed:
    case Kind::kQuantumOpen:
    case Kind::kFig6:
    case Kind::kFig9:
    case Kind::kFig10: return {5, false};
    case Kind::kFig5:
    case Kind::kFig7: return {5, true};
    case Kind::kSvmcSweep:
    case Kind::kSvmcScaling:
    case Kind::kFig4:
    case Kind::kFig8: return {kMaxEnumerationQubits / 2, false};
    default: return {};
  }
}

void check_params(Checker& c, const Json& cfg, Kind kind) {
  const Json* p = c.section(cfg, "params", true);
  if (!p) return;
  c.known_keys(*p, "params", {"M", "R", "d"});
  const Limits lim = limits_for(kind);
  const bool needs_d = kind != Kind::kPhaseDiagram && kind != Kind::kFig2;
  if (!p->contains("M")) {
    c.error("params.M", "missing required field");
  } else if (lim.single && !(*p)["M"].is_number_integer()) {
    c.error("params.M", "must be a single integer for this experiment");
  } else {
    c.integer_list((*p)["M"], "params.M", 2, lim.max_M);
  }
  if (p->contains("R")) c.number((*p)["R"], "params.R", 0.0, 1e6, true);
  if (needs_d) {
    if (!p->contains("d")) {
      c.error("params.d", "missing required field");
    } else if (lim.single && !(*p)["d"].is_number()) {
      c.error("params.d", "must be a single number for this experiment");
    } else {
      c.number_list((*p)["d"], "params.d", 0.0, 1.0, true, true);
    }
  } else if (p->contains("d")) {
    c.error("params.d", "not used here; give the d values in d_grid");
  }
}

void check_campaign(Checker& c, const Json& cfg, bool required) {
  const Json* s = c.section(cfg, "campaign", required);
  if (!s) return;
  c.known_keys(*s, "campaign",
               {"variants", "sweeps", "n_samples", "repeats", "temperature_mk", "bootstrap_resamples", "readout_s"});
  if (!s->contains("sweeps")) c.error("campaign.sweeps", "missing required field");
  else c.integer_list((*s)["sweeps"], "campaign.sweeps", 1, 100'000'000);
  if (!s->contains("variants")) {
    c.error("campaign.variants", "missing required field");
  } else if (!(*s)["variants"].is_array() || (*s)["variants"].empty()) {
    c.error("campaign.variants", "must be a non-empty array of variant names");
  } else {
    for (std::size_t i = 0; i < (*s)["variants"].size(); ++i) {
      const Json& v = (*s)["variants"][i];
      const std::string path = "campaign.variants[" + std::to_string(i) + "]";
      if (!v.is_string()) {
        c.error(path, "must be a string");
        continue;
      }
      bool ok = false;
      for (auto var : svmc::kAllVariants) ok = ok || v.get<std::string>() == svmc::to_string(var);
      if (!ok) c.error(path, "unknown variant '" + v.get<std::string>() + "'");
    }
  }
  c.integer((*s)["n_samples"], "campaign.n_samples", 1, 100'000'000);
  c.integer((*s)["repeats"], "campaign.repeats", 1, 100'000);
  c.number((*s)["temperature_mk"], "campaign.temperature_mk", 0.0, 1e6, true);
  c.integer((*s)["bootstrap_resamples"], "campaign.bootstrap_resamples", 1, 10'000'000);
  c.number((*s)["readout_s"], "campaign.readout_s", 0.0, 1.0);
}

void check_bath(Checker& c, const Json& cfg, bool required) {
  const Json* s = c.section(cfg, "bath", required);
  if (!s) return;
  c.known_keys(*s, "bath", {"temperature_mk", "omega_c_ghz", "eta_g2", "units"});
  c.number((*s)["temperature_mk"], "bath.temperature_mk", 0.0, 1e6, true);
  c.number((*s)["omega_c_ghz"], "bath.omega_c_ghz", 0.0, 1e6, true);
  c.number((*s)["eta_g2"], "bath.eta_g2", 0.0, 1.0);
  const Json& u = (*s)["units"];
  if (!u.is_string() || (u != "angular" && u != "linear")) c.error("bath.units", "must be \"angular\" or \"linear\"");
}

void check_dynamics(Checker& c, const Json& cfg, bool required) {
  const Json* s = c.section(cfg, "dynamics", required);
  if (!s) return;
  c.known_keys(*s, "dynamics",
               {"t_anneal_ns", "grid_points", "dense_points", "dense_half_width", "rtol", "atol", "report_levels",
                "bath_levels"});
  if (!s->contains("t_anneal_ns")) c.error("dynamics.t_anneal_ns", "missing required field");
  else c.number_list((*s)["t_anneal_ns"], "dynamics.t_anneal_ns", 0.0, 1e7, true);
  c.integer((*s)["grid_points"], "dynamics.grid_points", 2, 1'000'000);
  c.integer((*s)["dense_points"], "dynamics.dense_points", 0, 1'000'000);
  c.number((*s)["dense_half_width"], "dynamics.dense_half_width", 0.0, 0.5, true);
  c.number((*s)["rtol"], "dynamics.rtol", 0.0, 1.0, true);
  c.number((*s)["atol"], "dynamics.atol", 0.0, 1.0, true);
  c.integer((*s)["report_levels"], "dynamics.report_levels", 0, 1 << 24);
  c.integer((*s)["bath_levels"], "dynamics.bath_levels", 0, 1 << 24);
}

void check_angle_section(Checker& c, const Json& cfg, const std::string& key, bool required) {
  const Json* s = c.section(cfg, key, required);
  if (!s) return;
  c.known_keys(*s, key, {"s", "n_theta", "hyperplane_points"});
  if (!s->contains("s")) c.error(key + ".s", "missing required field");
  else c.number_list((*s)["s"], key + ".s", 0.0, 1.0);
  c.integer((*s)["n_theta"], key + ".n_theta", 3, 4001);
  c.integer((*s)["hyperplane_points"], key + ".hyperplane_points", 2, 1'000'000);
}

void check_grid(Checker& c, const Json& cfg, const std::string& key, bool required, double lo, double hi,
                bool lo_open = false, bool hi_open = false) {
  if (!cfg.contains(key)) {
    if (required) c.error(key, "missing required field");
    return;
  }
  c.number_list(cfg[key], key, lo, hi, lo_open, hi_open);
}

std::vector<ValidationError> check(const Json& cfg, Kind kind) {
  Checker c;
  for (const auto& [k, v] : cfg.items())
    if (!known_top_level().count(k)) c.error(k, "unknown field");

  if (!cfg["seed"].is_number_integer() || (cfg["seed"].is_number_integer() && !cfg["seed"].is_number_unsigned() &&
                                           cfg["seed"].get<long long>() < 0))
    c.error("seed", "must be a non-negative integer");
  if (!cfg["output_dir"].is_string() || cfg["output_dir"].get<std::string>().empty())
    c.error("output_dir", "must be a non-empty string");
  c.integer(cfg["threads"], "threads", 1, 1024);
  if (!cfg["plot"].is_boolean()) c.error("plot", "must be a boolean");
  if (const Json* s = c.section(cfg, "schedule", true)) {
    c.known_keys(*s, "schedule", {"scale"});
    c.number((*s)["scale"], "schedule.scale", 0.0, 1e6, true);
  }

  check_params(c, cfg, kind);
  const auto req = required_sections(kind);
  auto needed = [&](const std::string& key) {
    if (is_preset(kind)) return cfg.contains(key);
    return std::find(req.begin(), req.end(), key) != req.end();
  };

  switch (kind) {
    case Kind::kThermo:
      check_grid(c, cfg, "beta", true, 0.0, 1e6, true);
      break;
    case Kind::kSpectrum:
      check_grid(c, cfg, "s_grid", true, 0.0, 1.0);
      if (cfg.contains("levels")) c.integer(cfg["levels"], "levels", 1, 1 << 12);
      break;
    case Kind::kPhaseDiagram:
    case Kind::kFig2:
      check_grid(c, cfg, "d_grid", true, 0.0, 1.0, true, true);
      check_grid(c, cfg, "s_grid", true, 0.0, 1.0);
      if (kind == Kind::kFig2) {
        check_grid(c, cfg, "cross_sections", true, 0.0, 1.0, true, true);
        check_grid(c, cfg, "cross_section_s", true, 0.0, 1.0);
      }
      break;
    case Kind::kLandscape:
      check_angle_section(c, cfg, "landscape", true);
      break;
    case Kind::kTraceNorm:
      check_angle_section(c, cfg, "trace_norm", true);
      break;
    case Kind::kFig3:
      check_angle_section(c, cfg, "landscape", true);
      check_angle_section(c, cfg, "trace_norm", true);
      break;
    case Kind::kRateProfile:
      check_grid(c, cfg, "s_grid", true, 0.0, 1.0);
      check_bath(c, cfg, true);
      break;
    case Kind::kFig5:
      c.number(cfg["probe_s"], "probe_s", 0.0, 1.0);
      break;
    default:
      break;
  }
  if (needed("campaign")) check_campaign(c, cfg, true);
  if (needed("bath")) check_bath(c, cfg, true);
  if (needed("dynamics")) check_dynamics(c, cfg, true);
  return c.errors;
}

// ---------------------------------------------------------------------------
// Reading validated values

std::vector<double> numbers(const Json& j) {
  if (j.is_number()) return {j.get<double>()};
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
  }
  const double a = j["start"].get<double>(), b = j["stop"].get<double>();
  const int n = j["num"].get<int>();
  const bool log = j.value("log", false);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a))) : a + t * (b - a));
  }
  return out;
}

std::vector<int> integers(const Json& j) {
  if (j.is_array()) {
    std::vector<int> out;
    for (const auto& v : j) out.push_back(v.get<int>());
    return out;
  }
  return {j.get<int>()};
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)};
  for (auto t : tags) {
    words.push_back(static_cast<std::uint32_t>(t));
    words.push_back(static_cast<std::uint32_t>(t >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::uint64_t tag(double x) { return static_cast<std::uint64_t>(std::llround(x * 1e9)); }

std::string label(const std::string& prefix, double v) { return prefix + format_number(v); }

template <class F>
void parallel_for(int n, int threads, F&& f) {
  const int workers = std::max(1, std::min(threads, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < n; i = next++) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Runners

struct Ctx {
  const Json& cfg;
  Output& out;
  AnnealSchedule schedule;
  std::uint64_t seed;
  int threads;
};

std::vector<PfcParams> param_list(const Json& cfg) {
  const Json& p = cfg["params"];
  std::vector<PfcParams> out;
  for (int M : integers(p["M"]))
    for (double d : numbers(p["d"])) {
      PfcParams pp{M, p["R"].get<double>(), d};
      pp.validate();
      out.push_back(pp);
    }
  return out;
}

std::string tag_name(const PfcParams& p) { return "M" + std::to_string(p.M) + "_" + label("d", p.d); }

void run_thermo(Ctx& ctx) {
  CsvTable t({"M", "R", "d", "beta", "log_Z", "F", "avg_mag"});
  svg::LineChart chart{"average magnetization", "beta (1/GHz)", "avg magnetization", true, false, {}};
  for (const auto& p : param_list(ctx.cfg)) {
    svg::Series series{tag_name(p), {}, {}};
    for (double beta : numbers(ctx.cfg["beta"])) {
      const auto row = thermo::thermo_row(p, beta);
      t.add_row({static_cast<long long>(p.M), p.R, p.d, beta, row.log_Z, row.free_energy, row.average_magnetization});
      series.x.push_back(beta);
      series.y.push_back(row.average_magnetization);
    }
    chart.series.push_back(std::move(series));
  }
  ctx.out.csv("thermo.csv", t);
  ctx.out.chart("thermo.svg", [&] { return svg::render(chart); });
}

void run_spectrum(Ctx& ctx) {
  CsvTable gaps({"M", "R", "d", "s_min", "gap"});
  const auto s_grid = numbers(ctx.cfg["s_grid"]);
  for (const auto& p : param_list(ctx.cfg)) {
    const spectral::TfimHamiltonian ham(build_pfc(p), ctx.schedule);
    const int dim = static_cast<int>(ham.dim());
    const int k = std::min(dim, ctx.cfg.value("levels", std::min(dim, 8)));
    std::vector<std::string> header{"s"};
    for (int j = 0; j < k; ++j) header.push_back("E" + std::to_string(j));
    CsvTable t(header);
    svg::LineChart chart{"spectrum " + tag_name(p), "s", "energy (GHz)", false, false, {}};
    chart.series.resize(k);
    for (int j = 0; j < k; ++j) chart.series[j].name = "E" + std::to_string(j);
    for (double s : s_grid) {
      const auto snap = spectral::snapshot(ham, s, k);
      std::vector<CsvTable::Cell> row{s};
      for (int j = 0; j < k; ++j) {
        row.push_back(snap.eigenvalues[j]);
        chart.series[j].x.push_back(s);
        chart.series[j].y.push_back(snap.eigenvalues[j]);
      }
      t.add_row(std::move(row));
    }
    const auto mg = spectral::min_gap(ham);
    gaps.add_row({static_cast<long long>(p.M), p.R, p.d, mg.s_min, mg.gap});
    ctx.out.csv("spectrum_" + tag_name(p) + ".csv", t);
    ctx.out.chart("spectrum_" + tag_name(p) + ".svg", [&] { return svg::render(chart); });
  }
  ctx.out.csv("gaps.csv", gaps);
}

void run_phase_diagram(Ctx& ctx, const std::string& prefix) {
  const int M = ctx.cfg["params"]["M"].get<int>();
  const double R = ctx.cfg["params"]["R"].get<double>();
  const auto d_grid = numbers(ctx.cfg["d_grid"]);
  const auto s_grid = numbers(ctx.cfg["s_grid"]);
  const auto pd = spectral::phase_diagram(M, R, d_grid, s_grid, ctx.schedule);

  CsvTable grid({"d", "s", "mag"});
  for (std::size_t i = 0; i < d_grid.size(); ++i)
    for (std::size_t j = 0; j < s_grid.size(); ++j)
      grid.add_row({d_grid[i], s_grid[j], pd.magnetization(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  ctx.out.csv(prefix + "phase_diagram.csv", grid);

  CsvTable boundary({"d", "s_sign_change"});
  for (std::size_t i = 0; i < d_grid.size(); ++i)
    for (double s : pd.sign_changes[i]) boundary.add_row({d_grid[i], s});
  ctx.out.csv(prefix + "phase_boundary.csv", boundary);

  CsvTable gaps({"M", "R", "d", "s_min", "gap"});
  for (double d : d_grid) {
    const auto mg = spectral::min_gap(build_pfc({M, R, d}), ctx.schedule);
    gaps.add_row({static_cast<long long>(M), R, d, mg.s_min, mg.gap});
  }
  ctx.out.csv(prefix + "gaps.csv", gaps);

  ctx.out.chart(prefix + "phase_diagram.svg", [&] {
    svg::Heatmap map{"ground-state magnetization, M=" + std::to_string(M), "s", "d", s_grid, d_grid,
                     pd.magnetization};
    return svg::render(map);
  });
}

void run_cross_sections(Ctx& ctx) {
  const int M = ctx.cfg["params"]["M"].get<int>();
  const double R = ctx.cfg["params"]["R"].get<double>();
  const auto ds = numbers(ctx.cfg["cross_sections"]);
  const auto s_grid = numbers(ctx.cfg["cross_section_s"]);
  const auto pd = spectral::phase_diagram(M, R, ds, s_grid, ctx.schedule);
  CsvTable t({"d", "s", "mag"});
  svg::LineChart chart{"magnetization cross-sections", "s", "avg magnetization", false, false, {}};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    svg::Series series{label("d=", ds[i]), {}, {}};
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
      const double m = pd.magnetization(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      t.add_row({ds[i], s_grid[j], m});
      series.x.push_back(s_grid[j]);
      series.y.push_back(m);
    }
    chart.series.push_back(std::move(series));
  }
  ctx.out.csv("fig2_cross_sections.csv", t);
  ctx.out.chart("fig2_cross_sections.svg", [&] { return svg::render(chart); });
}

PfcParams single_params(const Json& cfg) {
  PfcParams p{cfg["params"]["M"].get<int>(), cfg["params"]["R"].get<double>(), cfg["params"]["d"].get<double>()};
  p.validate();
  return p;
}

svg::Heatmap landscape_map(const semiclassical::Landscape& land, const std::string& title) {
  // rows theta_a, columns theta_b
  return {title, "theta_b", "theta_a", land.grid.theta_b, land.grid.theta_a, land.values};
}

CsvTable landscape_table(const semiclassical::Landscape& land, const char* value_name) {
  CsvTable t({"theta_a", "theta_b", value_name});
  t.add_comment("s = " + format_number(land.s));
  for (std::size_t i = 0; i < land.grid.theta_a.size(); ++i)
    for (std::size_t j = 0; j < land.grid.theta_b.size(); ++j)
      t.add_row({land.grid.theta_a[i], land.grid.theta_b[j],
                 land.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return t;
}

// Hyper-plane through the global minimum and the runner-up minimum, extended
// by half the separation on both sides; through the global minimum along
// theta_b when the landscape has a single well.
std::pair<semiclassical::CoherentAngles, semiclassical::CoherentAngles> hyperplane_ends(
    const semiclassical::Landscape& land, const std::vector<semiclassical::GridPoint>& mins) {
  const auto g = land.angles(land.argmin);
  if (mins.size() < 2) return {{g.theta_a, -units::kPi}, {g.theta_a, units::kPi}};
  const auto b = land.angles(mins[1]);
  const double da = b.theta_a - g.theta_a, db = b.theta_b - g.theta_b;
  return {{g.theta_a - 0.5 * da, g.theta_b - 0.5 * db}, {b.theta_a + 0.5 * da, b.theta_b + 0.5 * db}};
}

void run_landscape(Ctx& ctx) {
  const PfcParams p = single_params(ctx.cfg);
  const Json& sec = ctx.cfg["landscape"];
  const auto grid = semiclassical::AngleGrid::square(sec["n_theta"].get<int>());
  CsvTable minima({"s", "rank", "theta_a", "theta_b", "V"});
  for (double s : numbers(sec["s"])) {
    const auto land = semiclassical::landscape(p, ctx.schedule, s, grid);
    const auto mins = semiclassical::local_minima(land);
    for (std::size_t r = 0; r < mins.size(); ++r) {
      const auto a = land.angles(mins[r]);
      minima.add_row({s, static_cast<long long>(r), a.theta_a, a.theta_b, mins[r].value});
    }
    const auto [from, to] = hyperplane_ends(land, mins);
    const auto scan = semiclassical::hyperplane_scan(p, ctx.schedule, s, from, to, sec["hyperplane_points"].get<int>());
    CsvTable hp({"t", "V", "theta_a", "theta_b"});
    hp.add_comment("s = " + format_number(s));
    svg::LineChart chart{"potential along hyper-plane, s=" + format_number(s), "t", "V (GHz)", false, false, {}};
    chart.series.push_back({"V", {}, {}});
    for (const auto& pt : scan) {
      hp.add_row({pt.t, pt.value, pt.angles.theta_a, pt.angles.theta_b});
      chart.series[0].x.push_back(pt.t);
      chart.series[0].y.push_back(pt.value);
    }
    ctx.out.csv(label("landscape_s", s) + ".csv", landscape_table(land, "V"));
    ctx.out.csv(label("hyperplane_s", s) + ".csv", hp);
    ctx.out.chart(label("landscape_s", s) + ".svg",
                  [&] { return svg::render(landscape_map(land, "potential, s=" + format_number(s))); });
    ctx.out.chart(label("hyperplane_s", s) + ".svg", [&] { return svg::render(chart); });
  }
  ctx.out.csv("landscape_minima.csv", minima);
}

void run_trace_norm(Ctx& ctx) {
  const PfcParams p = single_params(ctx.cfg);
  const Json& sec = ctx.cfg["trace_norm"];
  const auto grid = semiclassical::AngleGrid::square(sec["n_theta"].get<int>());
  const spectral::TfimHamiltonian ham(build_pfc(p), ctx.schedule);
  CsvTable minima({"s", "rank", "theta_a", "theta_b", "D"});
  for (double s : numbers(sec["s"])) {
    const auto land = semiclassical::distance_landscape(spectral::snapshot(ham, s, 1), p, grid);
    const auto mins = semiclassical::local_minima(land);
    for (std::size_t r = 0; r < mins.size(); ++r) {
      const auto a = land.angles(mins[r]);
      minima.add_row({s, static_cast<long long>(r), a.theta_a, a.theta_b, mins[r].value});
    }
    // Distance profile along the potential's hyper-plane at the same s.
    const auto pot = semiclassical::landscape(p, ctx.schedule, s, grid);
    const auto [from, to] = hyperplane_ends(pot, semiclassical::local_minima(pot));
    const auto snap = spectral::snapshot(ham, s, 1);
    const auto scan = semiclassical::line_scan(
        [&](const semiclassical::CoherentAngles& a) { return semiclassical::trace_norm_distance(snap, p, a); }, from,
        to, sec["hyperplane_points"].get<int>());
    CsvTable hp({"t", "D", "theta_a", "theta_b"});
    hp.add_comment("s = " + format_number(s));
    for (const auto& pt : scan) hp.add_row({pt.t, pt.value, pt.angles.theta_a, pt.angles.theta_b});
    ctx.out.csv(label("trace_norm_hyperplane_s", s) + ".csv", hp);
    ctx.out.csv(label("trace_norm_s", s) + ".csv", landscape_table(land, "D"));
    ctx.out.chart(label("trace_norm_s", s) + ".svg",
                  [&] { return svg::render(landscape_map(land, "trace-norm distance, s=" + format_number(s))); });
  }
  ctx.out.csv("trace_norm_minima.csv", minima);
}

svmc::CampaignSpec campaign_spec(const Ctx& ctx, int sweeps) {
  const Json& c = ctx.cfg["campaign"];
  svmc::CampaignSpec spec;
  spec.sweeps = sweeps;
  spec.n_samples = c["n_samples"].get<int>();
  spec.repeats = c["repeats"].get<int>();
  spec.temperature_mk = c["temperature_mk"].get<double>();
  spec.bootstrap_resamples = c["bootstrap_resamples"].get<int>();
  spec.threads = ctx.threads;
  return spec;
}

void run_svmc(Ctx& ctx, bool scaling) {
  const Json& c = ctx.cfg["campaign"];
  CsvTable t({"variant", "M", "R", "d", "sweeps", "P_ground_median", "P_ground_lo", "P_ground_hi",
              "P_manifold_median", "P_manifold_lo", "P_manifold_hi", "n_samples", "repeats", "seed"});
  svmc::AnnealOptions opts;
  opts.s_stop = c["readout_s"].get<double>();
  svg::LineChart chart{scaling ? "ground-state probability vs size" : "ground-state probability", "sweeps",
                       "probability", true, true, {}};
  for (const auto& name : c["variants"]) {
    const auto v = svmc::variant_from_string(name.get<std::string>());
    for (const auto& p : param_list(ctx.cfg)) {
      const IsingProblem problem = build_pfc(p);
      svg::Series g{std::string(svmc::to_string(v)) + " " + tag_name(p), {}, {}};
      svg::Series m{g.name + " manifold", {}, {}, true};
      for (int sweeps : integers(c["sweeps"])) {
        svmc::CampaignSpec spec = campaign_spec(ctx, sweeps);
        spec.seed = derive_seed(ctx.seed, {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(p.M), tag(p.d),
                                           static_cast<std::uint64_t>(sweeps)});
        const auto r = svmc::campaign(problem, ctx.schedule, v, spec, opts);
        t.add_row({std::string(svmc::to_string(v)), static_cast<long long>(p.M), p.R, p.d,
                   static_cast<long long>(sweeps), r.ground.median, r.ground.lo, r.ground.hi, r.manifold.median,
                   r.manifold.lo, r.manifold.hi, static_cast<long long>(spec.n_samples),
                   static_cast<long long>(spec.repeats), static_cast<long long>(ctx.seed)});
        g.x.push_back(sweeps);
        g.y.push_back(r.ground.median);
        m.x.push_back(sweeps);
        m.y.push_back(r.manifold.median);
      }
      chart.series.push_back(std::move(g));
      if (!scaling) chart.series.push_back(std::move(m));
    }
  }
  ctx.out.csv("svmc.csv", t);
  ctx.out.chart("svmc.svg", [&] { return svg::render(chart); });
}

ame::BathParams bath_params(const Json& cfg) {
  const Json& b = cfg["bath"];
  ame::BathParams bath;
  bath.temperature_mk = b["temperature_mk"].get<double>();
  bath.omega_c_ghz = b["omega_c_ghz"].get<double>();
  bath.eta_g2 = b["eta_g2"].get<double>();
  bath.units = ame::bath_units_from_string(b["units"].get<std::string>());
  return bath;
}

ame::EvolveOptions evolve_options(const Json& cfg) {
  const Json& d = cfg["dynamics"];
  ame::EvolveOptions o;
  o.rtol = d["rtol"].get<double>();
  o.atol = d["atol"].get<double>();
  o.report_levels = d["report_levels"].get<int>();
  o.bath_levels = d["bath_levels"].get<int>();
  return o;
}

std::vector<double> dynamics_grid(const Json& cfg, double s_min, std::vector<double> extra = {}) {
  const Json& d = cfg["dynamics"];
  auto g = ame::output_grid(d["grid_points"].get<int>(), s_min, d["dense_half_width"].get<double>(),
                            d["dense_points"].get<int>());
  g.insert(g.end(), extra.begin(), extra.end());
  std::sort(g.begin(), g.end());
  std::vector<double> out;
  for (double x : g)
    if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
  return out;
}

struct QuantumJob {
  PfcParams params;
  double t_anneal = 0.0;
  bool open = false;
};

struct QuantumResult {
  ame::Trajectory trajectory;
  double p_ground = 0.0;
  double p_manifold = 0.0;
};

QuantumResult run_quantum_job(const Ctx& ctx, const QuantumJob& job, const std::vector<double>& extra_grid = {}) {
  const IsingProblem problem = build_pfc(job.params);
  const spectral::TfimHamiltonian ham(problem, ctx.schedule);
  const auto grid = dynamics_grid(ctx.cfg, spectral::min_gap(ham).s_min, extra_grid);
  const auto opts = evolve_options(ctx.cfg);
  QuantumResult r;
  r.trajectory = job.open ? ame::evolve_ame(ham, bath_params(ctx.cfg), job.t_anneal, grid, opts)
                          : ame::evolve_closed(ham, job.t_anneal, grid, opts);
  // Endpoint probabilities in the computational basis.
  const auto census = low_energy_census(problem);
  const auto& rho = r.trajectory.final_rho;
  r.p_ground = rho(static_cast<Eigen::Index>(census.ground.index()), static_cast<Eigen::Index>(census.ground.index())).real();
  for (const auto& c : census.first_excited)
    r.p_manifold += rho(static_cast<Eigen::Index>(c.index()), static_cast<Eigen::Index>(c.index())).real();
  return r;
}

CsvTable population_table(const ame::Trajectory& tr) {
  const auto k = tr.populations.empty() ? 0 : tr.populations.front().size();
  std::vector<std::string> header{"s"};
  for (Eigen::Index j = 0; j < k; ++j) header.push_back("P_E" + std::to_string(j));
  CsvTable t(header);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<CsvTable::Cell> row{tr.times[i]};
    for (Eigen::Index j = 0; j < k; ++j) row.push_back(tr.populations[i][j]);
    t.add_row(std::move(row));
  }
  return t;
}

std::string job_name(const QuantumJob& j) {
  return std::string(j.open ? "open" : "closed") + "_" + tag_name(j.params) + "_" + label("T", j.t_anneal);
}

// Runs every (mode, params, t_anneal) combination in parallel and writes the
// endpoint table, optionally with the population traces.
void run_quantum_grid(Ctx& ctx, const std::vector<bool>& modes, bool traces, const std::string& endpoints_name) {
  std::vector<QuantumJob> jobs;
  for (bool open : modes)
    for (const auto& p : param_list(ctx.cfg))
      for (double t : numbers(ctx.cfg["dynamics"]["t_anneal_ns"])) jobs.push_back({p, t, open});
  std::vector<QuantumResult> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), ctx.threads,
               [&](int i) { results[i] = run_quantum_job(ctx, jobs[i]); });

  CsvTable t({"mode", "M", "d", "t_anneal_ns", "P_ground_final", "P_manifold_final"});
  std::map<std::string, svg::Series> series;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    t.add_row({std::string(j.open ? "open" : "closed"), static_cast<long long>(j.params.M), j.params.d, j.t_anneal,
               results[i].p_ground, results[i].p_manifold});
    const std::string key = std::string(j.open ? "open " : "closed ") + tag_name(j.params);
    series[key].name = key;
    series[key].x.push_back(j.t_anneal);
    series[key].y.push_back(results[i].p_ground);
    if (traces) ctx.out.csv("populations_" + job_name(j) + ".csv", population_table(results[i].trajectory));
  }
  ctx.out.csv(endpoints_name, t);
  ctx.out.chart("quantum_endpoints.svg", [&] {
    svg::LineChart chart{"final ground-state probability", "t_anneal (ns)", "P_ground", true, false, {}};
    for (auto& [k, s] : series) chart.series.push_back(s);
    return svg::render(chart);
  });
}

void run_rate_profile(Ctx& ctx) {
  const auto bath = bath_params(ctx.cfg);
  const auto s_grid = numbers(ctx.cfg["s_grid"]);
  for (const auto& p : param_list(ctx.cfg)) {
    const spectral::TfimHamiltonian ham(build_pfc(p), ctx.schedule);
    const auto rates = ame::transition_rate_profile(ham, bath, s_grid);
    CsvTable t({"s", "gamma_10"});
    svg::LineChart chart{"relaxation rate " + tag_name(p), "s", "gamma_10 (1/ns)", false, false, {{"gamma_10", {}, {}}}};
    for (const auto& r : rates) {
      t.add_row({r.s, r.gamma10});
      chart.series[0].x.push_back(r.s);
      chart.series[0].y.push_back(r.gamma10);
    }
    ctx.out.csv("rate_" + tag_name(p) + ".csv", t);
    ctx.out.chart("rate_" + tag_name(p) + ".svg", [&] { return svg::render(chart); });
  }
}

void run_fig5(Ctx& ctx) {
  const PfcParams p = single_params(ctx.cfg);
  const double probe = ctx.cfg["probe_s"].get<double>();
  const double t_anneal = numbers(ctx.cfg["dynamics"]["t_anneal_ns"]).front();
  const QuantumResult q = run_quantum_job(ctx, {p, t_anneal, true}, {probe});
  const auto& tr = q.trajectory;
  const auto it = std::find_if(tr.times.begin(), tr.times.end(), [&](double s) { return std::abs(s - probe) < 1e-12; });
  const Eigen::VectorXd& pops = tr.populations[static_cast<std::size_t>(it - tr.times.begin())];
  CsvTable ame_t({"level", "probability"});
  ame_t.add_comment("s = " + format_number(probe));
  for (Eigen::Index j = 0; j < pops.size(); ++j) ame_t.add_row({static_cast<long long>(j), pops[j]});
  ctx.out.csv("fig5_ame_populations.csv", ame_t);
  ctx.out.csv("fig5_ame_trace.csv", population_table(tr));

  const Json& c = ctx.cfg["campaign"];
  const auto v = svmc::variant_from_string(c["variants"][0].get<std::string>());
  const int sweeps = integers(c["sweeps"]).front();
  svmc::CampaignSpec spec = campaign_spec(ctx, sweeps);
  spec.seed = derive_seed(ctx.seed, {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(p.M), tag(p.d),
                                     static_cast<std::uint64_t>(sweeps)});
  svmc::AnnealOptions opts;
  opts.s_stop = c["readout_s"].get<double>();
  const IsingProblem problem = build_pfc(p);
  const auto r = svmc::campaign(problem, ctx.schedule, v, spec, opts);
  const auto census = low_energy_census(problem);
  std::set<std::uint64_t> manifold;
  for (const auto& e : census.first_excited) manifold.insert(e.index());
  double total = 0;
  for (auto n : r.histogram) total += static_cast<double>(n);
  CsvTable hist({"index", "config", "energy_ghz", "class", "probability"});
  hist.add_comment(std::string(svmc::to_string(v)) + ", " + std::to_string(sweeps) +
                   " sweeps, readout at s = " + format_number(opts.s_stop));
  for (std::size_t i = 0; i < r.histogram.size(); ++i) {
    const auto cfg = SpinConfig::from_index(i, problem.n_qubits());
    const char* cls = i == census.ground.index() ? "ground" : manifold.count(i) ? "first_excited" : "other";
    hist.add_row({static_cast<long long>(i), cfg.str(), classical_energy(problem, cfg), std::string(cls),
                  static_cast<double>(r.histogram[i]) / total});
  }
  ctx.out.csv("fig5_svmc_histogram.csv", hist);
  ctx.out.chart("fig5.svg", [&] {
    svg::LineChart chart{"state probability at s=" + format_number(probe), "level / state index", "probability",
                         false, false, {{"AME (instantaneous levels)", {}, {}}, {"SVMC (basis states)", {}, {}, true}}};
    for (Eigen::Index j = 0; j < pops.size(); ++j) {
      chart.series[0].x.push_back(static_cast<double>(j));
      chart.series[0].y.push_back(pops[j]);
    }
    for (std::size_t i = 0; i < r.histogram.size(); ++i) {
      chart.series[1].x.push_back(static_cast<double>(i));
      chart.series[1].y.push_back(static_cast<double>(r.histogram[i]) / total);
    }
    return svg::render(chart);
  });
}

void run_fig7(Ctx& ctx) {
  const PfcParams p = single_params(ctx.cfg);
  const double t_anneal = numbers(ctx.cfg["dynamics"]["t_anneal_ns"]).front();
  const QuantumResult q = run_quantum_job(ctx, {p, t_anneal, true});
  const auto& tr = q.trajectory;
  const auto bath = bath_params(ctx.cfg);
  const spectral::TfimHamiltonian ham(build_pfc(p), ctx.schedule);
  const auto rates = ame::transition_rate_profile(ham, bath, tr.times);
  const double beta = units::beta_per_ghz(bath.temperature_mk);
  CsvTable t({"s", "P0_AME", "P0_Gibbs", "gamma_10"});
  svg::LineChart chart{"ground-state probability and relaxation rate", "s", "value", false, false,
                       {{"P0 AME", {}, {}}, {"P0 Gibbs", {}, {}, true}, {"gamma_10 (1/ns)", {}, {}}}};
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double gibbs = spectral::gibbs_ground_population(spectral::snapshot(ham, tr.times[i]), beta);
    t.add_row({tr.times[i], tr.populations[i][0], gibbs, rates[i].gamma10});
    chart.series[0].x.push_back(tr.times[i]);
    chart.series[0].y.push_back(tr.populations[i][0]);
    chart.series[1].x.push_back(tr.times[i]);
    chart.series[1].y.push_back(gibbs);
    chart.series[2].x.push_back(tr.times[i]);
    chart.series[2].y.push_back(rates[i].gamma10);
  }
  ctx.out.csv("fig7_trace.csv", t);
  ctx.out.chart("fig7.svg", [&] { return svg::render(chart); });
}

void dispatch(Kind kind, Ctx& ctx) {
  switch (kind) {
    case Kind::kThermo: return run_thermo(ctx);
    case Kind::kSpectrum: return run_spectrum(ctx);
    case Kind::kPhaseDiagram: return run_phase_diagram(ctx, "");
    case Kind::kLandscape: return run_landscape(ctx);
    case Kind::kTraceNorm: return run_trace_norm(ctx);
    case Kind::kSvmcSweep: return run_svmc(ctx, false);
    case Kind::kSvmcScaling: return run_svmc(ctx, true);
    case Kind::kQuantumClosed: return run_quantum_grid(ctx, {false}, true, "endpoints.csv");
    case Kind::kQuantumOpen: return run_quantum_grid(ctx, {true}, true, "endpoints.csv");
    case Kind::kRateProfile: return run_rate_profile(ctx);
    case Kind::kFig2:
      run_phase_diagram(ctx, "fig2_");
      return run_cross_sections(ctx);
    case Kind::kFig3:
      run_landscape(ctx);
      return run_trace_norm(ctx);
    case Kind::kFig4:
    case Kind::kFig8: return run_svmc(ctx, true);
    case Kind::kFig5: return run_fig5(ctx);
    case Kind::kFig6:
    case Kind::kFig9:
    case Kind::kFig10:
      run_quantum_grid(ctx, {false, true}, false, "quantum_endpoints.csv");
      return run_svmc(ctx, false);
    case Kind::kFig7: return run_fig7(ctx);
  }
}

Kind kind_of(const Json& config) {
  if (!config.is_object()) fail(ErrorCode::kValidation, "experiment: config must be a JSON object");
  if (!config.contains("experiment") || !config["experiment"].is_string())
    fail(ErrorCode::kValidation, "experiment: missing required field");
  Kind k;
  if (!kind_from_string(config["experiment"].get<std::string>(), k))
    fail(ErrorCode::kValidation, "experiment: unknown experiment '" + config["experiment"].get<std::string>() + "'");
  return k;
}

}  // namespace

const char* to_string(Kind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "?";
}

bool kind_from_string(std::string_view name, Kind& kind) {
  for (const auto& k : kKinds)
    if (name == k.name) {
      kind = k.kind;
      return true;
    }
  return false;
}

std::vector<std::string> kind_names() {
  std::vector<std::string> out;
  for (const auto& k : kKinds) out.emplace_back(k.name);
  return out;
}

std::string format_errors(const std::vector<ValidationError>& errors) {
  std::string out;
  for (const auto& e : errors) out += e.field + ": " + e.message + "\n";
  return out;
}

Json apply_overrides(Json config, const Overrides& o) {
  if (!config.is_object()) config = Json::object();
  if (!o.experiment.empty()) config["experiment"] = o.experiment;
  if (o.has_seed) config["seed"] = o.seed;
  if (!o.output_dir.empty()) config["output_dir"] = o.output_dir;
  if (o.plot) config["plot"] = true;
  if (o.threads > 0) config["threads"] = o.threads;
  return config;
}

Json effective_config(const Json& config) {
  const Kind kind = kind_of(config);
  Json eff = is_preset(kind) ? preset(kind) : base_defaults();
  if (!is_preset(kind)) {
    // Defaults only for the sections the user supplied, so missing required
    // sections are still reported as missing.
    for (const auto& [name, make] : section_defaults())
      if (config.contains(name) && config[name].is_object()) eff[name] = make();
  }
  eff.merge_patch(config);
  return eff;
}

std::vector<ValidationError> validate(const Json& config) {
  try {
    const Kind kind = kind_of(config);
    return check(effective_config(config), kind);
  } catch (const Error& e) {
    std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon != std::string::npos) return {{what.substr(0, colon), what.substr(colon + 2)}};
    return {{"experiment", what}};
  } catch (const std::exception& e) {
    return {{"config", e.what()}};
  }
}

Json ResultManifest::to_json() const {
  Json files_json = Json::array();
  for (const auto& f : files) files_json.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  return {{"software", "pfc-lab"}, {"version", version},         {"seed", seed},
          {"wall_clock_s", wall_clock_s}, {"config", config}, {"files", files_json}};
}

ResultManifest run(const Json& config) {
  const auto errors = validate(config);
  if (!errors.empty()) fail(ErrorCode::kValidation, "invalid configuration:\n" + format_errors(errors));
  const Kind kind = kind_of(config);
  const Json eff = effective_config(config);

  const auto start = std::chrono::steady_clock::now();
  Output out(eff["output_dir"].get<std::string>(), eff["plot"].get<bool>());
  out.prepare();
  ResultManifest manifest;
  try {
    const double scale = eff["schedule"]["scale"].get<double>();
    Ctx ctx{eff, out, AnnealSchedule::linear(scale), eff["seed"].get<std::uint64_t>(), eff["threads"].get<int>()};
    dispatch(kind, ctx);
    manifest.config = eff;
    manifest.files = out.files();
    manifest.version = kVersion;
    manifest.seed = ctx.seed;
    manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.write_manifest(manifest);
  } catch (...) {
    out.remove_partial();
    throw;
  }
  return manifest;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::kIo, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace pfc::experiment

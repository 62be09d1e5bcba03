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

#include "pfc/csv.hpp"
#include "pfc/error.hpp"
#include "pfc/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

namespace pfc::experiment::detail {

namespace fs = std::filesystem;

// Files written by one run. The directory must be empty or hold the output of
// an earlier run (recognised by its manifest), which is cleared first.
class Output {
 public:
  Output(fs::path dir, bool plot) : dir_(std::move(dir)), plot_(plot) {}

  void prepare() {
    if (fs::exists(dir_)) {
      if (!fs::is_directory(dir_)) fail(ErrorCode::kIo, "output path " + dir_.string() + " is not a directory");
      // Files from an earlier run of this tool are replaced; anything else is
      // left alone and stops the run.
      const fs::path old = dir_ / kManifestName;
      if (fs::exists(old)) {
        std::ifstream in(old);
        Json m = Json::parse(in, nullptr, false);
        if (!m.is_discarded() && m.contains("files") && m["files"].is_array())
          for (const auto& f : m["files"])
            if (f.contains("path") && f["path"].is_string()) {
              const fs::path p = dir_ / f["path"].get<std::string>();
              if (p.lexically_normal().string().rfind(dir_.lexically_normal().string(), 0) == 0) fs::remove(p);
            }
        fs::remove(old);
      }
      if (!fs::is_empty(dir_))
        fail(ErrorCode::kIo, "output directory " + dir_.string() + " holds files this tool did not write");
    } else {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    {
      std::ofstream out(p, std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorCode::kIo, "cannot write " + p.string());
      out << content;
      if (!out) fail(ErrorCode::kIo, "write failed for " + p.string());
    }
    std::lock_guard<std::mutex> lock(mu_);
    files_.push_back({name, content.size(), sha256_hex(content)});
  }

  void csv(const std::string& name, const CsvTable& table) { write(name, table.str()); }

  void chart(const std::string& name, const std::function<std::string()>& render) {
    if (plot_) write(name, render());
  }

  void remove_partial() noexcept {
    std::error_code ec;
    for (const auto& f : files_) fs::remove(dir_ / f.path, ec);
    fs::remove(dir_ / (std::string(kManifestName) + ".tmp"), ec);
    if (created_dir_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

  void write_manifest(const ResultManifest& m) {
    const fs::path tmp = dir_ / (std::string(kManifestName) + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorCode::kIo, "cannot write " + tmp.string());
      out << m.to_json().dump(2) << "\n";
      if (!out) fail(ErrorCode::kIo, "write failed for " + tmp.string());
    }
    fs::rename(tmp, dir_ / kManifestName);
  }

  std::vector<ManifestFile> files() const {
    auto f = files_;
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
    return f;
  }

 private:
  fs::path dir_;
  bool plot_;
  bool created_dir_ = false;
  std::mutex mu_;
  std::vector<ManifestFile> files_;
};

}  // namespace pfc::experiment::detail

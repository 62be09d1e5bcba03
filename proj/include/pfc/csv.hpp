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

#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace pfc {

// Minimal CSV table: header row, '.' decimal separator, numbers printed with
// 12 significant digits so repeated runs give identical bytes.
class CsvTable {
 public:
  using Cell = std::variant<double, long long, std::string>;

  explicit CsvTable(std::vector<std::string> header);

  // Optional comment lines written as "# ..." before the header.
  void add_comment(std::string line) { comments_.push_back(std::move(line)); }
  void add_row(std::vector<Cell> row);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_number(double value);

}  // namespace pfc

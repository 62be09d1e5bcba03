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

// Small dependency-free SVG charts for quick looks at experiment output.
// CSV files remain the data of record.

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace pfc::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<Series> series;
};

std::string render(const LineChart& chart);

// z(i, j) drawn at (x[j], y[i]) with a blue-white-red scale centred on 0
// when the data change sign, otherwise a white-to-blue ramp.
struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  Eigen::MatrixXd z;
};

std::string render(const Heatmap& map);

}  // namespace pfc::svg

// Copyright 2026 The fairbench Authors
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

#include <cstddef>
#include <vector>

namespace fairbench {

/// Row-major dense matrix of doubles; just enough for factor storage.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data((std::size_t)r * c, fill) {}

  double* row(int r) { return data.data() + (std::size_t)r * cols; }
  const double* row(int r) const { return data.data() + (std::size_t)r * cols; }
  double& at(int r, int c) { return data[(std::size_t)r * cols + c]; }
  double at(int r, int c) const { return data[(std::size_t)r * cols + c]; }
};

}  // namespace fairbench

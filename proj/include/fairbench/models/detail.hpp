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

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "fairbench/linalg.hpp"
#include "fairbench/model.hpp"

namespace fairbench::detail {

// Shared checkpoint fields parsed before family dispatch.
struct BaseFields {
  ModelSpec spec;
  std::string train_ref;
  double global_mean = 0.0;
  std::vector<std::string> users, items;
};

ModelSpec parse_spec_line(const std::string& line);

void write_matrix(std::ostream& out, const std::string& name, const Matrix& m);
Matrix read_matrix(std::istream& in, const std::string& expect_name);
void write_vector(std::ostream& out, const std::string& name,
                  const std::vector<double>& v);
std::vector<double> read_vector(std::istream& in,
                                const std::string& expect_name);

std::unique_ptr<FittedModel> load_popularity(std::istream& in,
                                             const BaseFields& base);
std::unique_ptr<FittedModel> load_knn(std::istream& in,
                                      const BaseFields& base);
std::unique_ptr<FittedModel> load_mf(std::istream& in, const BaseFields& base);
std::unique_ptr<FittedModel> load_als(std::istream& in,
                                      const BaseFields& base);
std::unique_ptr<FittedModel> load_slim(std::istream& in,
                                       const BaseFields& base);
std::unique_ptr<FittedModel> load_adjusted(std::istream& in,
                                           const BaseFields& base);

}  // namespace fairbench::detail

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

#include <cstdint>
#include <map>
#include <string>

#include "fairbench/model.hpp"

namespace fairbench {

enum class MitigationKind {
  resample,                 // pre:  balanced interaction resampling
  kamishima_independence,   // in:   independence-regularized MF
  slim_balance,             // in:   neighborhood balance term on SLIM-U
  li_rerank,                // post: utility-constrained re-ranking
  ashokan_adjust,           // post: group rating adjustment
  antidote,                 // pre:  optimized synthetic users for ALS
};

enum class MitigationStage { pre, in_processing, post };

const char* mitigation_name(MitigationKind k);
MitigationKind mitigation_from_name(const std::string& name);
MitigationStage mitigation_stage(MitigationKind k);
// Procedure label used in reports (the original method's authors).
const char* mitigation_label(MitigationKind k);

struct MitigationSpec {
  MitigationKind kind = MitigationKind::resample;
  std::map<std::string, double> params;
  std::map<std::string, std::string> sparams;
  std::uint64_t seed = 0;

  double get(const std::string& name, double fallback) const;
  std::string sget(const std::string& name, const std::string& fallback) const;
  void validate() const;
  std::string canonical() const;
};

// Which mitigations attach to which model families on which task.
bool mitigation_compatible(MitigationKind kind, ModelFamily family,
                           const std::string& task);
// Machine-readable dump of the full matrix (TSV: mitigation, family, task,
// allowed) that the harness validates configs against.
std::string compatibility_matrix_tsv();

}  // namespace fairbench

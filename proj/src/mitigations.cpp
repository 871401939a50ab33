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

#include "fairbench/mitigations.hpp"

#include <cmath>
#include <sstream>

#include "fairbench/errors.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

namespace {

constexpr MitigationKind kAllKinds[] = {
    MitigationKind::resample,      MitigationKind::kamishima_independence,
    MitigationKind::slim_balance,  MitigationKind::li_rerank,
    MitigationKind::ashokan_adjust, MitigationKind::antidote,
};

constexpr ModelFamily kAllFamilies[] = {
    ModelFamily::popularity, ModelFamily::avg_rating, ModelFamily::user_knn,
    ModelFamily::item_knn,   ModelFamily::mf_sgd,     ModelFamily::als,
    ModelFamily::slim_u,
};

}  // namespace

const char* mitigation_name(MitigationKind k) {
  switch (k) {
    case MitigationKind::resample: return "resample";
    case MitigationKind::kamishima_independence: return "kamishima";
    case MitigationKind::slim_balance: return "slim_balance";
    case MitigationKind::li_rerank: return "li_rerank";
    case MitigationKind::ashokan_adjust: return "ashokan_adjust";
    case MitigationKind::antidote: return "antidote";
  }
  return "?";
}

const char* mitigation_label(MitigationKind k) {
  switch (k) {
    case MitigationKind::resample: return "Ekstrand et al.";
    case MitigationKind::kamishima_independence: return "Kamishima et al.";
    case MitigationKind::slim_balance: return "Burke et al.";
    case MitigationKind::li_rerank: return "Li et al.";
    case MitigationKind::ashokan_adjust: return "Ashokan & Haas";
    case MitigationKind::antidote: return "Rastegarpanah et al.";
  }
  return "?";
}

MitigationKind mitigation_from_name(const std::string& name) {
  for (MitigationKind k : kAllKinds) {
    if (name == mitigation_name(k)) return k;
  }
  throw ConfigError("unknown mitigation: " + name);
}

MitigationStage mitigation_stage(MitigationKind k) {
  switch (k) {
    case MitigationKind::resample:
    case MitigationKind::antidote:
      return MitigationStage::pre;
    case MitigationKind::kamishima_independence:
    case MitigationKind::slim_balance:
      return MitigationStage::in_processing;
    case MitigationKind::li_rerank:
    case MitigationKind::ashokan_adjust:
      return MitigationStage::post;
  }
  return MitigationStage::pre;
}

double MitigationSpec::get(const std::string& name, double fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

std::string MitigationSpec::sget(const std::string& name,
                                 const std::string& fallback) const {
  auto it = sparams.find(name);
  return it == sparams.end() ? fallback : it->second;
}

void MitigationSpec::validate() const {
  switch (kind) {
    case MitigationKind::resample: {
      const std::string unit = sget("unit", "interactions");
      if (unit != "interactions" && unit != "users")
        throw ConfigError("resample: unit must be interactions or users");
      break;
    }
    case MitigationKind::kamishima_independence: {
      const double eta = get("eta", 1.0);
      if (!std::isfinite(eta) || eta < 0.0)
        throw ConfigError("kamishima: eta must be finite and >= 0");
      const std::string term = sget("term", "mean_m");
      if (term != "mean_m" && term != "bdist_m" && term != "mi_normal")
        throw ConfigError("kamishima: unknown term " + term);
      break;
    }
    case MitigationKind::slim_balance:
      if (get("lambda_bal", 0.0) < 0.0)
        throw ConfigError("slim_balance: lambda_bal must be >= 0");
      break;
    case MitigationKind::li_rerank:
      if (get("epsilon", 0.0) < 0.0)
        throw ConfigError("li_rerank: epsilon must be >= 0");
      if (get("pool", 20.0) < 1.0)
        throw ConfigError("li_rerank: pool must be >= 1");
      break;
    case MitigationKind::ashokan_adjust: {
      const std::string mode = sget("mode", "parity");
      if (mode != "value" && mode != "parity")
        throw ConfigError("ashokan_adjust: mode must be value or parity");
      break;
    }
    case MitigationKind::antidote:
      if (get("budget", 1.0) < 0.0)
        throw ConfigError("antidote: budget must be >= 0");
      if (get("step", 1.0) <= 0.0)
        throw ConfigError("antidote: step must be > 0");
      if (get("iters", 1.0) < 0.0)
        throw ConfigError("antidote: iters must be >= 0");
      break;
  }
}

std::string MitigationSpec::canonical() const {
  std::ostringstream out;
  out << mitigation_name(kind);
  for (const auto& [key, value] : params)
    out << ' ' << key << '=' << format_double(value);
  for (const auto& [key, value] : sparams) out << ' ' << key << '=' << value;
  out << " seed=" << seed;
  return out.str();
}

bool mitigation_compatible(MitigationKind kind, ModelFamily family,
                           const std::string& task) {
  if (task != "topn" && task != "rating")
    throw ConfigError("unknown task: " + task);
  switch (kind) {
    case MitigationKind::resample:
      return true;  // retraining on transformed data fits any family
    case MitigationKind::kamishima_independence:
      return family == ModelFamily::mf_sgd;
    case MitigationKind::slim_balance:
      return family == ModelFamily::slim_u;
    case MitigationKind::li_rerank:
      return task == "topn";  // re-ranks any model's lists
    case MitigationKind::ashokan_adjust:
      return true;  // adjusts any model's predicted scores
    case MitigationKind::antidote:
      return family == ModelFamily::als;
  }
  return false;
}

std::string compatibility_matrix_tsv() {
  std::ostringstream out;
  out << "mitigation\tfamily\ttask\tallowed\n";
  for (MitigationKind k : kAllKinds) {
    for (ModelFamily f : kAllFamilies) {
      for (const char* task : {"topn", "rating"}) {
        out << mitigation_name(k) << '\t' << family_name(f) << '\t' << task
            << '\t' << (mitigation_compatible(k, f, task) ? 1 : 0) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace fairbench

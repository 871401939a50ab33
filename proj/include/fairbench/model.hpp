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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairbench/interactions.hpp"

namespace fairbench {

enum class ModelFamily {
  popularity,
  avg_rating,
  user_knn,
  item_knn,
  mf_sgd,
  als,
  slim_u,
};

const char* family_name(ModelFamily f);
ModelFamily family_from_name(const std::string& name);

/// Model family plus hyperparameters. Numeric and string-valued parameters
/// are kept separately; the seed is explicit.
struct ModelSpec {
  ModelFamily family = ModelFamily::popularity;
  std::map<std::string, double> params;
  std::map<std::string, std::string> sparams;
  std::uint64_t seed = 0;

  double get(const std::string& name, double fallback) const;
  double require(const std::string& name) const;
  std::string sget(const std::string& name, const std::string& fallback) const;

  // Family-specific required keys present and positive where required.
  void validate() const;
  // Canonical one-line rendering (sorted keys), used in checkpoints and
  // cache hashing.
  std::string canonical() const;
};

namespace detail {
struct BaseFields;
}

/// A trained recommender: deterministic, side-effect-free scoring over the
/// training id space, plus checkpoint serialization. Immutable after fit.
class FittedModel {
 public:
  virtual ~FittedModel() = default;

  // Predicted relevance for index pair; u or i may be -1 (unknown entity).
  virtual double predict(int u, int i) const = 0;

  // Id-based scoring with the declared unknown-entity fallback.
  double predict_id(const std::string& user, const std::string& item) const;

  const ModelSpec& spec() const { return spec_; }
  double global_mean() const { return global_mean_; }
  const std::vector<std::string>& users() const { return users_; }
  const std::vector<std::string>& items() const { return items_; }
  int user_index(const std::string& id) const;
  int item_index(const std::string& id) const;
  const std::string& train_reference() const { return train_reference_; }

  void save(const std::filesystem::path& path) const;
  void save(std::ostream& out) const;

 protected:
  void init_base(const ModelSpec& spec, const InteractionSet& train);
  void init_base(const detail::BaseFields& fields);
  virtual void save_params(std::ostream& out) const = 0;
  virtual const char* kind() const = 0;

  ModelSpec spec_;
  std::vector<std::string> users_, items_;
  std::map<std::string, int> user_index_, item_index_;
  double global_mean_ = 0.0;
  std::string train_reference_;
};

std::unique_ptr<FittedModel> load_model(const std::filesystem::path& path);
std::unique_ptr<FittedModel> load_model(std::istream& in);

/// Predicted relevance per requested (user, item) pair, insertion-ordered.
class ScoreTable {
 public:
  struct Entry {
    std::string user;
    std::string item;
    double score;
  };

  void add(const std::string& user, const std::string& item, double score);
  std::optional<double> get(const std::string& user,
                            const std::string& item) const;
  const std::vector<Entry>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  void save(const std::filesystem::path& path) const;
  static ScoreTable load(const std::filesystem::path& path);

 private:
  std::vector<Entry> rows_;
  std::map<std::pair<std::string, std::string>, double> index_;
};

struct RankedItem {
  std::string item;
  double score;
};

/// user -> items with scores, descending.
using TopNLists = std::map<std::string, std::vector<RankedItem>>;

void save_topn(const TopNLists& lists, const std::filesystem::path& path);
TopNLists load_topn(const std::filesystem::path& path);

// Deterministic scoring of exactly the requested pairs.
ScoreTable predict_scores(
    const FittedModel& model,
    const std::vector<std::pair<std::string, std::string>>& pairs);

// Scores every test pair.
ScoreTable predict_scores(const FittedModel& model, const InteractionSet& set);

// Candidates are all model items minus the user's train items; ranked by
// score descending, ties by ascending item index; exactly min(n, candidates)
// per user.
TopNLists recommend_topn(const FittedModel& model, const InteractionSet& train,
                         int n);

// Training entry points.
std::unique_ptr<FittedModel> fit_model(const InteractionSet& train,
                                       const ModelSpec& spec);
std::unique_ptr<FittedModel> fit_popularity(const InteractionSet& train,
                                            const ModelSpec& spec);
std::unique_ptr<FittedModel> fit_knn(const InteractionSet& train,
                                     const ModelSpec& spec);
std::unique_ptr<FittedModel> fit_mf_sgd(const InteractionSet& train,
                                        const ModelSpec& spec);
std::unique_ptr<FittedModel> fit_als(const InteractionSet& train,
                                     const ModelSpec& spec);

struct SlimBalance {
  const GroupAssignment* groups = nullptr;
  double lambda_bal = 0.0;
};

std::unique_ptr<FittedModel> fit_slim_u(
    const InteractionSet& train, const ModelSpec& spec,
    const std::optional<SlimBalance>& balance = std::nullopt);

}  // namespace fairbench

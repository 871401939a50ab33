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

#include "fairbench/linalg.hpp"
#include "fairbench/model.hpp"

namespace fairbench {

/// Neighborhood model over users or items. Similarities are computed on the
/// shared-rating vectors, shrunk by |overlap| / (|overlap| + shrinkage), and
/// kept as a dense symmetric table. Prediction is the similarity-weighted
/// average of the N most similar co-raters; pearson predictions are
/// mean-centered. Fallback when no neighbor exists is the item mean, then
/// the global mean.
class KnnModel : public FittedModel {
 public:
  enum class Axis { user, item };
  enum class Similarity { cosine, pearson };

  KnnModel(const ModelSpec& spec, const InteractionSet& train);
  KnnModel(const detail::BaseFields& base, Axis axis, Similarity sim,
           int neighbors, Matrix table,
           std::vector<std::vector<std::pair<int, double>>> by_user,
           std::vector<std::vector<std::pair<int, double>>> by_item,
           std::vector<double> user_mean, std::vector<double> item_mean);

  double predict(int u, int i) const override;
  const Matrix& similarity_table() const { return table_; }
  Axis axis() const { return axis_; }

 protected:
  void save_params(std::ostream& out) const override;
  const char* kind() const override { return "knn"; }

 private:
  Axis axis_ = Axis::item;
  Similarity sim_ = Similarity::cosine;
  int neighbors_ = 20;
  Matrix table_;  // n x n similarity, diagonal unused
  std::vector<std::vector<std::pair<int, double>>> by_user_, by_item_;
  std::vector<double> user_mean_, item_mean_;
};

struct Neighbor {
  double similarity;
  double rating;
  double rater_mean;  // mean rating of the co-rater, for pearson centering
};

// Similarity-weighted average; pearson centers each neighbor's rating on the
// rater's mean and re-adds target_mean. Returns fallback when the weight
// mass is zero.
double knn_weighted_average(const std::vector<Neighbor>& neighbors,
                            bool pearson, double target_mean, double fallback);

// Similarity of two sparse vectors restricted to their shared coordinates,
// before shrinkage. Inputs must be sorted by coordinate.
double shared_cosine(const std::vector<std::pair<int, double>>& a,
                     const std::vector<std::pair<int, double>>& b);
double shared_pearson(const std::vector<std::pair<int, double>>& a,
                      const std::vector<std::pair<int, double>>& b);

}  // namespace fairbench

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

#include "fairbench/model.hpp"

namespace fairbench {

/// Non-personalized scoring: interaction counts (TopPopular) or damped item
/// mean ratings (AvgRating). Predictions are user-independent.
class PopularityModel : public FittedModel {
 public:
  enum class Mode { count, mean_rating };

  PopularityModel(const ModelSpec& spec, const InteractionSet& train);
  PopularityModel(const detail::BaseFields& base, Mode mode,
                  std::vector<double> item_scores);

  double predict(int u, int i) const override;
  Mode mode() const { return mode_; }
  const std::vector<double>& item_scores() const { return item_scores_; }

 protected:
  void save_params(std::ostream& out) const override;
  const char* kind() const override { return "popularity"; }

 private:
  Mode mode_ = Mode::count;
  std::vector<double> item_scores_;
};

// Damped item mean: (damping * prior + sum of ratings) / (damping + count).
double damped_mean(double rating_sum, std::size_t count, double damping,
                   double prior);

}  // namespace fairbench

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

#include <array>
#include <memory>

#include "fairbench/interactions.hpp"
#include "fairbench/model.hpp"

namespace fairbench {

enum class AdjustMode { value, parity };

AdjustMode adjust_mode_from(const std::string& name);

/// Per-group additive offsets derived from the training set:
///   value:  delta_g = mean over group g's train pairs of (actual - predicted)
///   parity: group 1 shifted by (mean train prediction of group 0) - (group 1),
///           so post-adjustment train group means coincide.
std::array<double, 2> adjustment_offsets(const FittedModel& model,
                                         const InteractionSet& train,
                                         const GroupAssignment& groups,
                                         AdjustMode mode);

/// Applies the offsets to a prediction table and clips to the rating scale.
ScoreTable adjust_ratings(const ScoreTable& predictions,
                          const FittedModel& model, const InteractionSet& train,
                          const GroupAssignment& groups, AdjustMode mode,
                          RatingScale scale);

/// Scoring decorator used for ranking tasks: inner prediction plus the
/// user's group offset, clipped to the rating scale.
class AdjustedModel : public FittedModel {
 public:
  AdjustedModel(std::unique_ptr<FittedModel> inner,
                const GroupAssignment& groups, std::array<double, 2> offsets,
                RatingScale scale);
  AdjustedModel(const detail::BaseFields& base,
                std::unique_ptr<FittedModel> inner, std::vector<int> group_of,
                std::array<double, 2> offsets, RatingScale scale);

  double predict(int u, int i) const override;
  const std::array<double, 2>& offsets() const { return offsets_; }

 protected:
  void save_params(std::ostream& out) const override;
  const char* kind() const override { return "adjusted"; }

 private:
  std::unique_ptr<FittedModel> inner_;
  std::vector<int> group_of_;  // by user index
  std::array<double, 2> offsets_{0.0, 0.0};
  RatingScale scale_{};
};

std::unique_ptr<FittedModel> make_adjusted_model(
    std::unique_ptr<FittedModel> inner, const InteractionSet& train,
    const GroupAssignment& groups, AdjustMode mode);

}  // namespace fairbench

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

#include <string>
#include <utility>
#include <vector>

#include "fairbench/data_io.hpp"
#include "fairbench/interactions.hpp"

namespace fairbench {

struct PreprocessResult {
  InteractionSet interactions;
  AttributeTable attributes;  // restricted to surviving users
  // All aggregated log-counts were equal; every rating was set to the scale
  // maximum and a warning was emitted.
  bool degenerate_normalization = false;
};

/// Play-log preprocessing: drop users with missing gender/age or an age
/// outside (age_bounds.first, age_bounds.second), aggregate plays per
/// (user, artist), drop users with fewer than min_items distinct artists,
/// then map rating = lo + (hi-lo) * (ln(1+plays) - m) / (M - m) with m, M the
/// global extrema of ln(1+plays) taken after filtering.
PreprocessResult aggregate_and_normalize_events(
    const std::vector<PlayEvent>& events, const AttributeTable& attributes,
    int min_items, std::pair<int, int> age_bounds,
    RatingScale scale = {1.0, 5.0});

/// Chooses the consecutive-category cut minimizing the user-share imbalance
/// over the given users (lower cut on ties); group 1 is the smaller-share
/// side (higher categories on a tie). A binary attribute passes through.
GroupAssignment binarize_attribute(const AttributeTable& table,
                                   const std::string& attribute,
                                   const std::vector<std::string>& user_ids);

GroupAssignment binarize_attribute(const AttributeTable& table,
                                   const std::string& attribute,
                                   const InteractionSet& users);

/// Single-pass removal of users with fewer than k interactions.
InteractionSet filter_min_interactions(const InteractionSet& set, int k);

}  // namespace fairbench

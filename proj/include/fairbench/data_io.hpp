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

#include <filesystem>
#include <string>
#include <vector>

#include "fairbench/interactions.hpp"

namespace fairbench {

/// Delimiter and column layout of a delimited interaction/attribute file.
/// Column indices are 0-based; -1 marks an absent column.
struct ColumnLayout {
  std::string delimiter = "\t";
  int user_col = 0;
  int item_col = 1;
  int rating_col = 2;
  int timestamp_col = 3;  // optional; -1 when the file has none
};

// Named presets for the shipped dataset formats.
ColumnLayout ml1m_ratings_layout();     // u::i::r::ts
ColumnLayout canonical_layout();        // tab-separated u i r ts
ColumnLayout lfm_events_layout();       // tab-separated user ts artist-id artist-name

struct AttributeColumn {
  std::string name;
  int col = -1;
};

struct AttributeLayout {
  std::string delimiter = "\t";
  int user_col = 0;
  std::vector<AttributeColumn> attributes;
};

AttributeLayout ml1m_users_layout();    // UserID::Gender::Age::Occupation::Zip
AttributeLayout lfm_users_layout();     // id \t gender \t age \t country \t signup

InteractionSet load_interactions(const std::filesystem::path& path,
                                 const ColumnLayout& layout,
                                 RatingScale scale);

AttributeTable load_attributes(const std::filesystem::path& path,
                               const AttributeLayout& layout);

// Canonical interaction file: tab-separated user, item, rating, timestamp
// ("-" when absent). Round-trips the interaction multiset exactly.
void save_canonical(const InteractionSet& set,
                    const std::filesystem::path& path);
InteractionSet load_canonical(const std::filesystem::path& path,
                              RatingScale scale = {1.0, 5.0});

/// One listening/play record before aggregation.
struct PlayEvent {
  std::string user;
  std::string artist;
  double plays = 1.0;
};

// Loads play events; when plays_col is -1 every row counts as one play (the
// raw LFM layout has one row per play).
std::vector<PlayEvent> load_play_events(const std::filesystem::path& path,
                                        const std::string& delimiter,
                                        int user_col, int artist_col,
                                        int plays_col);

}  // namespace fairbench

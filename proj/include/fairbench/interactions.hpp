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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fairbench {

struct RatingScale {
  double lo = 1.0;
  double hi = 5.0;
};

struct Interaction {
  std::string user;
  std::string item;
  double rating = 0.0;
  std::optional<std::int64_t> timestamp;
};

/// User-item-rating records plus contiguous index maps. The universal
/// training/evaluation currency; immutable once built. Row order is
/// preserved; indices are assigned by first appearance.
class InteractionSet {
 public:
  InteractionSet() = default;
  InteractionSet(std::vector<Interaction> rows, RatingScale scale);

  const std::vector<Interaction>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  std::size_t n_users() const { return users_.size(); }
  std::size_t n_items() const { return items_.size(); }

  // -1 when the id is unknown.
  int user_index(const std::string& id) const;
  int item_index(const std::string& id) const;
  const std::string& user_id(int idx) const { return users_.at(idx); }
  const std::string& item_id(int idx) const { return items_.at(idx); }
  const std::vector<std::string>& users() const { return users_; }
  const std::vector<std::string>& items() const { return items_; }

  RatingScale scale() const { return scale_; }
  bool all_timestamped() const { return all_timestamped_; }

  // Re-checks the type invariants; throws DataError on violation. Cheap
  // enough to run after every transformation.
  void validate() const;

 private:
  std::vector<Interaction> rows_;
  std::vector<std::string> users_, items_;
  std::unordered_map<std::string, int> user_index_, item_index_;
  RatingScale scale_{};
  bool all_timestamped_ = false;
};

/// Index-space view of an InteractionSet with per-user and per-item
/// adjacency, built once per training run.
struct IndexedRatings {
  int n_users = 0;
  int n_items = 0;
  // (item index, rating) per user / (user index, rating) per item, in row
  // order of the source set.
  std::vector<std::vector<std::pair<int, double>>> by_user;
  std::vector<std::vector<std::pair<int, double>>> by_item;
  std::vector<double> user_mean, item_mean;  // global mean where empty
  double global_mean = 0.0;

  static IndexedRatings build(const InteractionSet& set);
};

/// Per-user categorical attributes keyed by a declared schema.
class AttributeTable {
 public:
  AttributeTable() = default;
  explicit AttributeTable(std::vector<std::string> schema)
      : schema_(std::move(schema)) {}

  void set(const std::string& user, const std::string& attribute,
           const std::string& label);
  std::optional<std::string> get(const std::string& user,
                                 const std::string& attribute) const;
  bool has_user(const std::string& user) const {
    return rows_.count(user) > 0;
  }
  std::size_t n_users() const { return rows_.size(); }
  const std::vector<std::string>& schema() const { return schema_; }
  // Users in insertion order.
  const std::vector<std::string>& users() const { return user_order_; }

 private:
  std::vector<std::string> schema_;
  std::vector<std::string> user_order_;
  std::unordered_map<std::string, std::map<std::string, std::string>> rows_;
};

/// Binary protected-group labels per user: 0 = majority/non-protected,
/// 1 = minority/protected.
struct GroupAssignment {
  std::string attribute;
  std::unordered_map<std::string, int> labels;
  std::array<double, 2> group_shares{0.0, 0.0};

  // Throws DataError when the user has no label.
  int label_of(const std::string& user) const;

  // Checks labels cover the target set, shares match the labels within
  // 1e-12, and both groups are non-empty.
  void validate(const InteractionSet& target) const;
};

}  // namespace fairbench

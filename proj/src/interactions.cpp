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

#include "fairbench/interactions.hpp"

#include <cmath>
#include <unordered_set>

#include "fairbench/errors.hpp"

namespace fairbench {

InteractionSet::InteractionSet(std::vector<Interaction> rows,
                               RatingScale scale)
    : rows_(std::move(rows)), scale_(scale) {
  all_timestamped_ = !rows_.empty();
  for (const auto& r : rows_) {
    if (auto [it, inserted] = user_index_.try_emplace(r.user,
                                                      (int)users_.size());
        inserted) {
      users_.push_back(r.user);
    }
    if (auto [it, inserted] = item_index_.try_emplace(r.item,
                                                      (int)items_.size());
        inserted) {
      items_.push_back(r.item);
    }
    if (!r.timestamp) all_timestamped_ = false;
  }
  validate();
}

int InteractionSet::user_index(const std::string& id) const {
  auto it = user_index_.find(id);
  return it == user_index_.end() ? -1 : it->second;
}

int InteractionSet::item_index(const std::string& id) const {
  auto it = item_index_.find(id);
  return it == item_index_.end() ? -1 : it->second;
}

void InteractionSet::validate() const {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(rows_.size() * 2);
  for (const auto& r : rows_) {
    const int u = user_index(r.user);
    const int i = item_index(r.item);
    if (u < 0 || i < 0) throw DataError("interaction references unindexed id");
    const std::uint64_t key =
        (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(i);
    if (!seen.insert(key).second) {
      throw DataError("duplicate (user,item) pair: " + r.user + "," + r.item);
    }
    if (!(r.rating >= scale_.lo && r.rating <= scale_.hi) ||
        !std::isfinite(r.rating)) {
      throw DataError("rating outside scale for pair " + r.user + "," +
                      r.item);
    }
  }
  if (users_.size() != user_index_.size() ||
      items_.size() != item_index_.size()) {
    throw DataError("index maps are not bijective");
  }
}

IndexedRatings IndexedRatings::build(const InteractionSet& set) {
  IndexedRatings ix;
  ix.n_users = (int)set.n_users();
  ix.n_items = (int)set.n_items();
  ix.by_user.resize(ix.n_users);
  ix.by_item.resize(ix.n_items);
  double total = 0.0;
  for (const auto& r : set.rows()) {
    const int u = set.user_index(r.user);
    const int i = set.item_index(r.item);
    ix.by_user[u].emplace_back(i, r.rating);
    ix.by_item[i].emplace_back(u, r.rating);
    total += r.rating;
  }
  ix.global_mean = set.empty() ? 0.0 : total / (double)set.size();
  ix.user_mean.resize(ix.n_users, ix.global_mean);
  ix.item_mean.resize(ix.n_items, ix.global_mean);
  for (int u = 0; u < ix.n_users; ++u) {
    if (ix.by_user[u].empty()) continue;
    double s = 0.0;
    for (auto& [i, r] : ix.by_user[u]) s += r;
    ix.user_mean[u] = s / (double)ix.by_user[u].size();
  }
  for (int i = 0; i < ix.n_items; ++i) {
    if (ix.by_item[i].empty()) continue;
    double s = 0.0;
    for (auto& [u, r] : ix.by_item[i]) s += r;
    ix.item_mean[i] = s / (double)ix.by_item[i].size();
  }
  return ix;
}

void AttributeTable::set(const std::string& user, const std::string& attribute,
                         const std::string& label) {
  auto [it, inserted] = rows_.try_emplace(user);
  if (inserted) user_order_.push_back(user);
  it->second[attribute] = label;
}

std::optional<std::string> AttributeTable::get(
    const std::string& user, const std::string& attribute) const {
  auto it = rows_.find(user);
  if (it == rows_.end()) return std::nullopt;
  auto jt = it->second.find(attribute);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

int GroupAssignment::label_of(const std::string& user) const {
  auto it = labels.find(user);
  if (it == labels.end()) throw DataError("user has no group label: " + user);
  return it->second;
}

void GroupAssignment::validate(const InteractionSet& target) const {
  std::size_t counts[2] = {0, 0};
  for (const auto& [user, g] : labels) {
    if (g != 0 && g != 1) throw DataError("group label outside {0,1}");
    ++counts[g];
  }
  if (counts[0] == 0 || counts[1] == 0)
    throw DataError("a group is empty in assignment for " + attribute);
  for (const auto& u : target.users()) {
    if (!labels.count(u))
      throw DataError("user " + u + " missing from group assignment");
  }
  const double total = (double)(counts[0] + counts[1]);
  if (std::abs(group_shares[0] - counts[0] / total) > 1e-12 ||
      std::abs(group_shares[1] - counts[1] / total) > 1e-12) {
    throw DataError("stored group shares disagree with labels");
  }
}

}  // namespace fairbench

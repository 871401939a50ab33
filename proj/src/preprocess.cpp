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

#include "fairbench/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <unordered_map>

#include "fairbench/errors.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

PreprocessResult aggregate_and_normalize_events(
    const std::vector<PlayEvent>& events, const AttributeTable& attributes,
    int min_items, std::pair<int, int> age_bounds, RatingScale scale) {
  if (min_items < 1) throw ConfigError("min_items must be >= 1");

  // Attribute filter: both gender and age present, age strictly inside the
  // bounds.
  auto user_ok = [&](const std::string& user) {
    const auto gender = attributes.get(user, "gender");
    const auto age = attributes.get(user, "age");
    if (!gender || !age) return false;
    double a;
    if (!parse_double(*age, a)) return false;
    return a > age_bounds.first && a < age_bounds.second;
  };

  // Aggregate plays per (user, artist), preserving first-appearance order.
  std::unordered_map<std::string, std::map<std::string, double>> plays;
  std::vector<std::string> user_order;
  std::unordered_map<std::string, std::vector<std::string>> artist_order;
  for (const auto& e : events) {
    if (e.plays < 1.0) throw DataError("play count below 1 for " + e.user);
    if (!user_ok(e.user)) continue;
    auto [it, inserted] = plays.try_emplace(e.user);
    if (inserted) user_order.push_back(e.user);
    auto [jt, fresh] = it->second.try_emplace(e.artist, 0.0);
    if (fresh) artist_order[e.user].push_back(e.artist);
    jt->second += e.plays;
  }

  // Min-items filter, then global log-count extrema over what survives.
  double lo_log = std::numeric_limits<double>::infinity();
  double hi_log = -std::numeric_limits<double>::infinity();
  std::vector<std::string> kept_users;
  for (const auto& u : user_order) {
    const auto& per_artist = plays[u];
    if ((int)per_artist.size() < min_items) continue;
    kept_users.push_back(u);
    for (const auto& [artist, count] : per_artist) {
      const double l = std::log1p(count);
      lo_log = std::min(lo_log, l);
      hi_log = std::max(hi_log, l);
    }
  }
  if (kept_users.empty())
    throw DataError("all users filtered out by preprocessing");

  PreprocessResult result;
  const bool degenerate = !(hi_log > lo_log);
  if (degenerate) {
    std::cerr << "warning: degenerate play-count normalization (all "
                 "aggregated counts equal); ratings set to "
              << format_double(scale.hi) << "\n";
  }

  std::vector<Interaction> rows;
  for (const auto& u : kept_users) {
    const auto& per_artist = plays[u];
    for (const auto& artist : artist_order[u]) {
      const double count = per_artist.at(artist);
      double rating;
      if (degenerate) {
        rating = scale.hi;
      } else {
        const double t = (std::log1p(count) - lo_log) / (hi_log - lo_log);
        rating = scale.lo + (scale.hi - scale.lo) * t;
      }
      rows.push_back({u, artist, rating, std::nullopt});
    }
  }
  result.interactions = InteractionSet(std::move(rows), scale);
  result.degenerate_normalization = degenerate;

  AttributeTable filtered(attributes.schema());
  for (const auto& u : kept_users) {
    for (const auto& attr : attributes.schema()) {
      if (auto v = attributes.get(u, attr)) filtered.set(u, attr, *v);
    }
  }
  result.attributes = std::move(filtered);
  return result;
}

namespace {

struct Category {
  std::string label;
  double numeric = 0.0;
  bool is_numeric = false;
  std::size_t count = 0;
};

}  // namespace

GroupAssignment binarize_attribute(const AttributeTable& table,
                                   const std::string& attribute,
                                   const std::vector<std::string>& user_ids) {
  if (user_ids.empty()) throw DataError("no users to binarize");

  std::map<std::string, std::size_t> counts;
  for (const auto& u : user_ids) {
    const auto label = table.get(u, attribute);
    if (!label)
      throw DataError("user " + u + " missing attribute " + attribute);
    ++counts[*label];
  }
  if (counts.size() < 2)
    throw DataError("attribute " + attribute +
                    " has one observed category; cannot binarize");

  std::vector<Category> cats;
  bool all_numeric = true;
  for (const auto& [label, count] : counts) {
    Category c;
    c.label = label;
    c.count = count;
    c.is_numeric = parse_double(label, c.numeric);
    all_numeric = all_numeric && c.is_numeric;
    cats.push_back(std::move(c));
  }
  // Ordinal order: numeric when every label parses, else lexicographic (the
  // map already yields lexicographic order).
  if (all_numeric) {
    std::stable_sort(cats.begin(), cats.end(),
                     [](const Category& a, const Category& b) {
                       return a.numeric < b.numeric;
                     });
  }

  const double total = (double)user_ids.size();
  std::size_t best_cut = 0;
  double best_imbalance = std::numeric_limits<double>::infinity();
  std::size_t cumulative = 0;
  for (std::size_t cut = 1; cut < cats.size(); ++cut) {
    cumulative += cats[cut - 1].count;
    const double lower_share = (double)cumulative / total;
    const double imbalance = std::abs(lower_share - (1.0 - lower_share));
    if (imbalance < best_imbalance) {  // strict: ties keep the lower cut
      best_imbalance = imbalance;
      best_cut = cut;
    }
  }

  std::size_t lower_count = 0;
  for (std::size_t c = 0; c < best_cut; ++c) lower_count += cats[c].count;
  const double lower_share = (double)lower_count / total;
  // Group 1 is the smaller-share side; ties go to the higher categories.
  const bool lower_is_minority = lower_share < 0.5;

  GroupAssignment ga;
  ga.attribute = attribute;
  std::unordered_map<std::string, int> side;  // label -> 0 lower / 1 upper
  for (std::size_t c = 0; c < cats.size(); ++c) side[cats[c].label] = c >= best_cut;
  std::size_t minority = 0;
  for (const auto& u : user_ids) {
    const int s = side[*table.get(u, attribute)];
    const int g = lower_is_minority ? 1 - s : s;
    ga.labels[u] = g;
    minority += g;
  }
  ga.group_shares = {1.0 - (double)minority / total, (double)minority / total};
  return ga;
}

GroupAssignment binarize_attribute(const AttributeTable& table,
                                   const std::string& attribute,
                                   const InteractionSet& users) {
  return binarize_attribute(table, attribute, users.users());
}

InteractionSet filter_min_interactions(const InteractionSet& set, int k) {
  if (k < 0) throw ConfigError("k must be >= 0");
  std::unordered_map<std::string, int> count;
  for (const auto& r : set.rows()) ++count[r.user];
  std::vector<Interaction> rows;
  rows.reserve(set.size());
  for (const auto& r : set.rows()) {
    if (count[r.user] >= k) rows.push_back(r);
  }
  if (rows.empty()) throw DataError("filter removed every interaction");
  return InteractionSet(std::move(rows), set.scale());
}

}  // namespace fairbench

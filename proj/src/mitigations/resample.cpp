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

#include "fairbench/mitigations/resample.hpp"

#include <algorithm>
#include <numeric>

#include "fairbench/errors.hpp"
#include "fairbench/rng.hpp"

namespace fairbench {

namespace {

// Uniform sample of `want` elements without replacement, returned as a kept
// mask over the pool (selection by seeded shuffle of pool positions).
std::vector<char> sample_mask(std::size_t pool, std::size_t want, Rng& rng) {
  std::vector<std::size_t> order(pool);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<char> keep(pool, 0);
  for (std::size_t i = 0; i < want; ++i) keep[order[i]] = 1;
  return keep;
}

}  // namespace

InteractionSet resample_balanced(const InteractionSet& train,
                                 const GroupAssignment& groups,
                                 std::uint64_t seed, ResampleUnit unit) {
  std::size_t count[2] = {0, 0};
  for (const auto& r : train.rows()) ++count[groups.label_of(r.user)];
  if (count[0] == 0 || count[1] == 0)
    throw DataError("resample: a group has zero interactions");

  Rng rng(seed);

  if (unit == ResampleUnit::users) {
    std::size_t user_count[2] = {0, 0};
    for (const auto& u : train.users()) ++user_count[groups.label_of(u)];
    const int larger = user_count[0] >= user_count[1] ? 0 : 1;
    const std::size_t want = std::min(user_count[0], user_count[1]);
    std::vector<std::string> pool;
    for (const auto& u : train.users()) {
      if (groups.label_of(u) == larger) pool.push_back(u);
    }
    const auto keep_mask = sample_mask(pool.size(), want, rng);
    std::unordered_map<std::string, char> keep_user;
    for (std::size_t i = 0; i < pool.size(); ++i)
      keep_user[pool[i]] = keep_mask[i];
    std::vector<Interaction> rows;
    for (const auto& r : train.rows()) {
      if (groups.label_of(r.user) != larger || keep_user[r.user])
        rows.push_back(r);
    }
    return InteractionSet(std::move(rows), train.scale());
  }

  if (count[0] == count[1]) return train;  // already balanced
  const int larger = count[0] > count[1] ? 0 : 1;
  const std::size_t want = std::min(count[0], count[1]);

  std::vector<std::size_t> pool;  // row positions of the larger group
  pool.reserve(count[larger]);
  for (std::size_t pos = 0; pos < train.rows().size(); ++pos) {
    if (groups.label_of(train.rows()[pos].user) == larger)
      pool.push_back(pos);
  }
  const auto keep_mask = sample_mask(pool.size(), want, rng);
  std::vector<char> keep_row(train.rows().size(), 1);
  for (std::size_t i = 0; i < pool.size(); ++i) keep_row[pool[i]] = keep_mask[i];

  std::vector<Interaction> rows;
  rows.reserve(want * 2);
  for (std::size_t pos = 0; pos < train.rows().size(); ++pos) {
    if (keep_row[pos]) rows.push_back(train.rows()[pos]);
  }
  return InteractionSet(std::move(rows), train.scale());
}

}  // namespace fairbench

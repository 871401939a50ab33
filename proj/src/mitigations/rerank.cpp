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

#include "fairbench/mitigations/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "fairbench/errors.hpp"

namespace fairbench {

namespace {

struct UserState {
  const std::string* user;
  int group;
  std::vector<double> scores;   // pool scores, base order
  std::vector<char> selected;   // |pool|, exactly n_sel ones
  int n_sel = 0;
  double sel_sum = 0.0;         // sum of selected scores
};

struct Swap {
  int user = -1;
  int out_pos = -1;
  int in_pos = -1;
  double utility_delta = 0.0;  // score(in) - score(out), < 0 when costly
  double new_gap = 0.0;
};

}  // namespace

TopNLists rerank_fair(const TopNLists& base, const ScoreTable& scores,
                      const GroupAssignment& groups, const InteractionSet& test,
                      int n, double epsilon) {
  if (n < 1) throw ConfigError("rerank: n must be >= 1");
  if (std::isnan(epsilon) || epsilon < 0.0)
    throw ConfigError("rerank: epsilon must be >= 0");

  // Users that count toward the group utilities.
  std::unordered_set<std::string> evaluated;
  for (const auto& r : test.rows()) evaluated.insert(r.user);

  std::vector<UserState> states;
  double group_util_sum[2] = {0, 0};
  std::size_t group_count[2] = {0, 0};
  for (const auto& [user, pool] : base) {
    if (!evaluated.count(user) || pool.empty()) continue;
    UserState st;
    st.user = &user;
    st.group = groups.label_of(user);
    st.n_sel = std::min<int>(n, (int)pool.size());
    st.scores.reserve(pool.size());
    st.selected.assign(pool.size(), 0);
    for (std::size_t p = 0; p < pool.size(); ++p) {
      const auto table_score = scores.get(user, pool[p].item);
      st.scores.push_back(table_score ? *table_score : pool[p].score);
      if ((int)p < st.n_sel) {
        st.selected[p] = 1;
        st.sel_sum += st.scores.back();
      }
    }
    group_util_sum[st.group] += st.sel_sum / (double)st.n_sel;
    ++group_count[st.group];
    states.push_back(std::move(st));
  }

  auto truncate_all = [&]() {
    TopNLists out;
    for (const auto& [user, pool] : base) {
      auto& lst = out[user];
      const std::size_t take = std::min<std::size_t>(n, pool.size());
      lst.assign(pool.begin(), pool.begin() + take);
    }
    return out;
  };

  if (group_count[0] == 0 || group_count[1] == 0)
    throw DataError("rerank: a group has no evaluated users");

  auto gap_of = [&](double sum0, double sum1) {
    return std::abs(sum0 / (double)group_count[0] -
                    sum1 / (double)group_count[1]);
  };

  double gap = gap_of(group_util_sum[0], group_util_sum[1]);

  // Best configuration seen, tracked as selections snapshot.
  double best_gap = gap;
  double best_util = group_util_sum[0] + group_util_sum[1];
  std::vector<std::vector<char>> best_sel;
  best_sel.reserve(states.size());
  for (const auto& st : states) best_sel.push_back(st.selected);
  bool best_feasible = gap <= epsilon;

  const int max_rounds = 100000;
  for (int round = 0; gap > epsilon && round < max_rounds; ++round) {
    Swap best;
    bool found = false;
    for (int s = 0; s < (int)states.size(); ++s) {
      const auto& st = states[s];
      const double per_user = 1.0 / (double)st.n_sel;
      for (int out_pos = 0; out_pos < (int)st.scores.size(); ++out_pos) {
        if (!st.selected[out_pos]) continue;
        for (int in_pos = 0; in_pos < (int)st.scores.size(); ++in_pos) {
          if (st.selected[in_pos]) continue;
          const double delta = st.scores[in_pos] - st.scores[out_pos];
          double sum0 = group_util_sum[0], sum1 = group_util_sum[1];
          (st.group == 0 ? sum0 : sum1) += delta * per_user;
          const double new_gap = gap_of(sum0, sum1);
          if (new_gap >= gap - 1e-15) continue;  // must strictly reduce
          if (!found || delta > best.utility_delta + 1e-15 ||
              (std::abs(delta - best.utility_delta) <= 1e-15 &&
               new_gap < best.new_gap)) {
            best = {s, out_pos, in_pos, delta, new_gap};
            found = true;
          }
        }
      }
    }
    if (!found) break;

    auto& st = states[best.user];
    st.selected[best.out_pos] = 0;
    st.selected[best.in_pos] = 1;
    st.sel_sum += best.utility_delta;
    group_util_sum[st.group] += best.utility_delta / (double)st.n_sel;
    gap = gap_of(group_util_sum[0], group_util_sum[1]);

    const double util = group_util_sum[0] + group_util_sum[1];
    const bool feasible = gap <= epsilon;
    if ((feasible && !best_feasible) ||
        (feasible == best_feasible &&
         (gap < best_gap - 1e-15 ||
          (std::abs(gap - best_gap) <= 1e-15 && util > best_util)))) {
      best_gap = gap;
      best_util = util;
      best_feasible = feasible;
      for (std::size_t s = 0; s < states.size(); ++s)
        best_sel[s] = states[s].selected;
    }
  }

  // Emit the best configuration; untracked users get the plain prefix.
  TopNLists out = truncate_all();
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& st = states[s];
    const auto& pool = base.at(*st.user);
    auto& lst = out[*st.user];
    lst.clear();
    for (std::size_t p = 0; p < pool.size(); ++p) {
      if (best_sel[s][p]) lst.push_back(pool[p]);
    }
  }
  return out;
}

}  // namespace fairbench

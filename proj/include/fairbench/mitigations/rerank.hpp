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

#include "fairbench/interactions.hpp"
#include "fairbench/model.hpp"

namespace fairbench {

/// Selects n items per user out of each baseline list (pool of size m >= n)
/// to maximize total predicted score subject to |U0 - U1| <= epsilon, where
/// U_g is group g's mean per-user utility and a user's utility is the mean
/// predicted score of their selected items. Solved by greedy exchange:
/// starting from the top-n prefixes, repeatedly apply the gap-reducing swap
/// that costs the least utility until the constraint holds or no such swap
/// exists; returns the feasible solution, else the least-infeasible one
/// found. Only users with at least one test interaction enter the group
/// utilities; other users keep their top-n prefix.
///
/// Scores come from the table when present, else from the baseline lists.
TopNLists rerank_fair(const TopNLists& base, const ScoreTable& scores,
                      const GroupAssignment& groups, const InteractionSet& test,
                      int n, double epsilon);

}  // namespace fairbench

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

#include <cstdint>
#include <filesystem>

#include "fairbench/interactions.hpp"

namespace fairbench {

enum class SplitStrategy { temporal, random };

const char* strategy_name(SplitStrategy s);

/// Pairwise-disjoint per-user partitions whose union is the input set.
struct SplitBundle {
  InteractionSet train;
  InteractionSet validation;
  InteractionSet test;
  std::uint64_t seed = 0;
  SplitStrategy strategy = SplitStrategy::random;
};

/// Per-user holdout: round(test_frac * n) interactions to test (the most
/// recent when timestamps cover the set, seeded shuffle otherwise and for
/// ties), then round(valid_frac * remainder) of the remainder to validation
/// by the same rule. Rounding is half away from zero. Every user keeps at
/// least one train interaction. Outputs are canonically ordered (user index,
/// then item index of the input set).
SplitBundle split_per_user(const InteractionSet& set, double test_frac,
                           double valid_frac, std::uint64_t seed);

// Split manifest: three canonical interaction files plus a metadata file
// recording seed, fractions, and strategy.
void save_split(const SplitBundle& bundle, double test_frac, double valid_frac,
                const std::filesystem::path& dir);
SplitBundle load_split(const std::filesystem::path& dir,
                       RatingScale scale = {1.0, 5.0});

}  // namespace fairbench

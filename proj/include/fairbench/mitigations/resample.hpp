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

#include "fairbench/interactions.hpp"

namespace fairbench {

enum class ResampleUnit { interactions, users };

/// Balances group representation in the training set by uniform sampling
/// without replacement from the larger group, leaving the smaller group
/// untouched. With ResampleUnit::interactions (the default) the larger
/// group's interactions are subsampled to the smaller group's interaction
/// count; with ResampleUnit::users whole users are kept or dropped until the
/// user counts match. Row order of surviving interactions is preserved.
InteractionSet resample_balanced(
    const InteractionSet& train, const GroupAssignment& groups,
    std::uint64_t seed, ResampleUnit unit = ResampleUnit::interactions);

}  // namespace fairbench

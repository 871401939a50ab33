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
#include <string>

#include "fairbench/interactions.hpp"
#include "fairbench/linalg.hpp"
#include "fairbench/model.hpp"

namespace fairbench {

// Reserved id namespace for synthetic users; they are excluded from
// evaluation and group statistics downstream.
inline constexpr const char* kAntidoteUserPrefix = "__antidote__";
bool is_synthetic_user(const std::string& user_id);

/// Fixed alternation schedule used for one augmentation step, frozen so the
/// objective X -> GLV is a closed-form chain of ridge solves:
///   1. synthetic factors  p_b = (Q^T Q + reg I)^-1 Q^T x_b
///   2. item factors       q'_i from frozen real P, synthetic p, ratings + X
///   3. real user factors  p'_u from q'_i and real ratings
///   4. GLV of the real (user,item) pairs under p', q'
struct AntidoteProblem {
  Matrix P;  // frozen real-user factors, n_real x k
  Matrix Q;  // frozen item factors, n_items x k
  double reg = 0.1;
  std::vector<std::vector<std::pair<int, double>>> by_user;  // real ratings
  std::vector<std::vector<std::pair<int, double>>> by_item;
  std::vector<int> user_group;  // 0/1 per real user
};

// GLV of the schedule above; when grad is non-null it receives dGLV/dX
// (same shape as X), obtained by implicit differentiation of the three
// ridge solves. Optionally returns the refit factors.
double antidote_glv(const AntidoteProblem& problem, const Matrix& X,
                    Matrix* grad, Matrix* refit_P = nullptr,
                    Matrix* refit_Q = nullptr);

struct AntidoteConfig {
  int budget = 1;       // B synthetic users
  double step = 1.0;    // gradient step on X
  int iters = 10;       // T
  std::uint64_t seed = 0;
};

/// Appends `budget` synthetic users whose dense ratings are optimized by
/// projected gradient descent on the group loss variance of the refit model.
/// Real interactions are returned untouched.
InteractionSet antidote_augment(const InteractionSet& train,
                                const GroupAssignment& groups,
                                const ModelSpec& als_spec,
                                const AntidoteConfig& config);

}  // namespace fairbench

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

#include <memory>
#include <string>
#include <vector>

#include "fairbench/interactions.hpp"
#include "fairbench/model.hpp"
#include "fairbench/models/mf.hpp"

namespace fairbench {

/// Differentiable group-independence terms on predicted ratings. All three
/// are >= 0 and exactly 0 when the two groups' prediction statistics
/// coincide:
///   mean_m:    (m0 - m1)^2
///   bdist_m:   Bhattacharyya distance of per-group Gaussian rating models
///   mi_normal: mutual information between prediction and group under a
///              Gaussian model, (ln v - sum_g pi_g ln v_g) / 2
/// Group means/variances are those of the prediction vector (population
/// variances, floored additively for stability).
enum class IndependenceTerm { mean_m, bdist_m, mi_normal };

IndependenceTerm independence_term_from(const std::string& name);
const char* independence_term_name(IndependenceTerm t);

// Penalty value; when grad is non-null it receives d(penalty)/d(pred_j),
// gradients propagated through the group statistics.
double independence_penalty(const std::vector<double>& preds,
                            const std::vector<int>& group_of,
                            IndependenceTerm term,
                            std::vector<double>* grad = nullptr);

/// MF fit whose objective gains eta * penalty(term); with eta = 0 the result
/// is bit-identical to the plain mf_sgd fit under the same seed. Group
/// statistics are refreshed at the start of every epoch.
std::unique_ptr<FittedModel> fit_pmf_independent(const InteractionSet& train,
                                                 const GroupAssignment& groups,
                                                 IndependenceTerm term,
                                                 double eta,
                                                 const ModelSpec& spec);

// Test helper: penalty as a function of MF factors, with its analytic
// gradient in factor space (chain through the output-scale predictions).
double independence_objective_gradient(const MfFactors& f, MfVariant variant,
                                       const MfProblem& data,
                                       RatingScale out_scale,
                                       const std::vector<int>& group_of,
                                       IndependenceTerm term, MfFactors* grad);

}  // namespace fairbench

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

#include "fairbench/linalg.hpp"
#include "fairbench/model.hpp"

namespace fairbench {

/// Alternating least squares on the observed entries: each sweep solves the
/// per-user and per-item ridge problems exactly, so the regularized
/// objective never increases. Stops after `epochs` sweeps or when the train
/// RMSE improves by less than `tol`.
class AlsModel : public FittedModel {
 public:
  AlsModel(const ModelSpec& spec, const InteractionSet& train);
  AlsModel(const detail::BaseFields& base, Matrix P, Matrix Q);

  double predict(int u, int i) const override;
  const Matrix& user_factors() const { return P_; }
  const Matrix& item_factors() const { return Q_; }
  // Train RMSE after each sweep.
  const std::vector<double>& sweep_rmse() const { return sweep_rmse_; }
  const std::vector<double>& sweep_objective() const {
    return sweep_objective_;
  }

 protected:
  void save_params(std::ostream& out) const override;
  const char* kind() const override { return "als"; }

 private:
  Matrix P_, Q_;
  std::vector<double> sweep_rmse_, sweep_objective_;
};

// One block of ALS: ridge-solve every row factor of `solve_users ? P : Q`
// from the opposite block, in place. Exposed for the augmentation procedure,
// which re-runs single alternations with synthetic users included.
void als_solve_block(Matrix& target, const Matrix& fixed,
                     const std::vector<std::vector<std::pair<int, double>>>&
                         adjacency,  // per target row: (fixed row, rating)
                     double reg);

}  // namespace fairbench

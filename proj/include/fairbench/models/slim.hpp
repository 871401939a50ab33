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

#include "fairbench/model.hpp"

namespace fairbench {

/// User-based sparse linear method: each user's ratings are predicted as a
/// non-negative sparse combination of peer users' rating rows, learned by
/// cyclic coordinate descent on
///   1/2 |r_u - R^T w|^2 + l1 |w|_1 + l2/2 |w|^2 + lambda_bal/2 (p.w)^2
/// with w >= 0, w_u = 0, and p the signed group vector (+1 non-protected,
/// -1 protected) when a balance term is attached.
class SlimUModel : public FittedModel {
 public:
  SlimUModel(const ModelSpec& spec, const InteractionSet& train,
             const std::optional<SlimBalance>& balance);
  SlimUModel(const detail::BaseFields& base,
             std::vector<std::vector<std::pair<int, double>>> weights,
             std::vector<std::vector<std::pair<int, double>>> ratings_by_item);

  double predict(int u, int i) const override;

  // Sparse peer weights of one user: (peer index, weight), weight > 0.
  const std::vector<std::pair<int, double>>& weights(int u) const {
    return weights_[u];
  }
  // Signed group balance p.w of one user's weights under the given signs.
  double balance_dot(int u, const std::vector<double>& signs) const;

 protected:
  void save_params(std::ostream& out) const override;
  const char* kind() const override { return "slim"; }

 private:
  std::vector<std::vector<std::pair<int, double>>> weights_;  // per user
  std::vector<std::vector<std::pair<int, double>>> by_item_;  // train ratings
};

/// The coordinate-descent objective for one target user, exposed so tests
/// can check the solver against independent minimizers.
double slim_objective(const std::vector<double>& w,
                      const std::vector<std::vector<double>>& peer_rows,
                      const std::vector<double>& target_row, double l1,
                      double l2, double lambda_bal,
                      const std::vector<double>& signs);

}  // namespace fairbench

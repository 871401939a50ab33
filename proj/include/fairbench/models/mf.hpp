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

#include <functional>
#include <vector>

#include "fairbench/linalg.hpp"
#include "fairbench/model.hpp"

namespace fairbench {

enum class MfVariant { funk, biased, pmf };

MfVariant mf_variant_from(const std::string& name);
const char* mf_variant_name(MfVariant v);

struct MfFactors {
  Matrix P;                // users x k
  Matrix Q;                // items x k
  std::vector<double> bu;  // biased only
  std::vector<double> bi;  // biased only
  double mu = 0.0;
};

/// Optional additive term on the training objective, evaluated on the
/// output-scale predictions of all train rows. eval fills grad (same length
/// as preds) with d(term)/d(pred) and returns the term value. The weighted
/// term weight * term(preds) joins the squared-error objective; statistics
/// are refreshed once per epoch.
struct PredictionPenalty {
  double weight = 0.0;
  std::function<double(const std::vector<double>& preds,
                       std::vector<double>& grad)>
      eval;
};

/// Regularized matrix factorization trained by seeded SGD over shuffled
/// interactions. funk/pmf predict p.q (pmf on ratings mapped into [0,1] and
/// mapped back); biased predicts mu + bu + bi + p.q.
class MfModel : public FittedModel {
 public:
  MfModel(const ModelSpec& spec, const InteractionSet& train,
          const PredictionPenalty* penalty = nullptr);
  MfModel(const detail::BaseFields& base, MfVariant variant, MfFactors f,
          RatingScale out_scale);

  double predict(int u, int i) const override;
  const MfFactors& factors() const { return factors_; }
  MfVariant variant() const { return variant_; }
  // Full objective after each epoch (squared error + regularization +
  // weighted penalty term when present).
  const std::vector<double>& epoch_objectives() const {
    return epoch_objectives_;
  }

 protected:
  void save_params(std::ostream& out) const override;
  const char* kind() const override { return "mf"; }

 private:
  MfVariant variant_ = MfVariant::biased;
  MfFactors factors_;
  RatingScale out_scale_{};
  std::vector<double> epoch_objectives_;
};

/// Train-set view in model index space with internal-scale ratings, shared
/// by the objective helpers below.
struct MfProblem {
  std::vector<std::tuple<int, int, double>> rows;  // (user, item, rating)
  int n_users = 0;
  int n_items = 0;
};

// Full-batch objective sum(err^2) + reg * (|P|^2 + |Q|^2 [+ |bu|^2 + |bi|^2])
// and its analytic gradient in factor space (biased adds the bias norms and
// gradients; mu is treated as a constant).
double mf_objective(const MfFactors& f, MfVariant variant,
                    const MfProblem& data, double reg);
MfFactors mf_objective_gradient(const MfFactors& f, MfVariant variant,
                                const MfProblem& data, double reg);

// Output-scale predictions for every row of the problem.
std::vector<double> mf_predictions(const MfFactors& f, MfVariant variant,
                                   const MfProblem& data,
                                   RatingScale out_scale);

}  // namespace fairbench

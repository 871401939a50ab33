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

#include "fairbench/mitigations/independence.hpp"

#include <cmath>

#include "fairbench/errors.hpp"

namespace fairbench {

namespace {

// Additive variance floor; keeps logs finite on degenerate prediction sets
// while staying smooth (the finite-difference oracle sees the same floored
// function).
constexpr double kVarianceFloor = 1e-9;

struct GroupStats {
  double n[2] = {0, 0};
  double mean[2] = {0, 0};
  double var[2] = {0, 0};  // population variance + floor
  double mean_all = 0.0;
  double var_all = 0.0;
};

GroupStats compute_stats(const std::vector<double>& preds,
                         const std::vector<int>& group_of) {
  GroupStats s;
  double sum[2] = {0, 0}, sum_all = 0.0;
  for (std::size_t j = 0; j < preds.size(); ++j) {
    sum[group_of[j]] += preds[j];
    s.n[group_of[j]] += 1.0;
    sum_all += preds[j];
  }
  if (s.n[0] == 0 || s.n[1] == 0)
    throw DataError("independence penalty needs both groups in the batch");
  s.mean[0] = sum[0] / s.n[0];
  s.mean[1] = sum[1] / s.n[1];
  s.mean_all = sum_all / (double)preds.size();
  double ss[2] = {0, 0}, ss_all = 0.0;
  for (std::size_t j = 0; j < preds.size(); ++j) {
    const int g = group_of[j];
    ss[g] += (preds[j] - s.mean[g]) * (preds[j] - s.mean[g]);
    ss_all += (preds[j] - s.mean_all) * (preds[j] - s.mean_all);
  }
  s.var[0] = ss[0] / s.n[0] + kVarianceFloor;
  s.var[1] = ss[1] / s.n[1] + kVarianceFloor;
  s.var_all = ss_all / (double)preds.size() + kVarianceFloor;
  return s;
}

}  // namespace

IndependenceTerm independence_term_from(const std::string& name) {
  if (name == "mean_m") return IndependenceTerm::mean_m;
  if (name == "bdist_m") return IndependenceTerm::bdist_m;
  if (name == "mi_normal") return IndependenceTerm::mi_normal;
  throw ConfigError("unknown independence term: " + name);
}

const char* independence_term_name(IndependenceTerm t) {
  switch (t) {
    case IndependenceTerm::mean_m: return "mean_m";
    case IndependenceTerm::bdist_m: return "bdist_m";
    case IndependenceTerm::mi_normal: return "mi_normal";
  }
  return "?";
}

double independence_penalty(const std::vector<double>& preds,
                            const std::vector<int>& group_of,
                            IndependenceTerm term, std::vector<double>* grad) {
  if (preds.size() != group_of.size())
    throw DataError("independence penalty: size mismatch");
  const GroupStats s = compute_stats(preds, group_of);
  const double dm = s.mean[0] - s.mean[1];

  if (grad) grad->assign(preds.size(), 0.0);

  switch (term) {
    case IndependenceTerm::mean_m: {
      if (grad) {
        for (std::size_t j = 0; j < preds.size(); ++j) {
          const int g = group_of[j];
          (*grad)[j] = 2.0 * dm * (g == 0 ? 1.0 : -1.0) / s.n[g];
        }
      }
      return dm * dm;
    }
    case IndependenceTerm::bdist_m: {
      const double v_sum = s.var[0] + s.var[1];
      const double pen = 0.25 * dm * dm / v_sum + 0.5 * std::log(v_sum) -
                         0.5 * std::log(2.0) - 0.25 * std::log(s.var[0]) -
                         0.25 * std::log(s.var[1]);
      if (grad) {
        // d pen / d m_g and d pen / d v_g, then chain through the group
        // statistics of each prediction.
        const double dpen_dm[2] = {0.5 * dm / v_sum, -0.5 * dm / v_sum};
        double dpen_dv[2];
        for (int g = 0; g < 2; ++g) {
          dpen_dv[g] = -0.25 * dm * dm / (v_sum * v_sum) + 0.5 / v_sum -
                       0.25 / s.var[g];
        }
        for (std::size_t j = 0; j < preds.size(); ++j) {
          const int g = group_of[j];
          const double dmg = 1.0 / s.n[g];
          const double dvg = 2.0 * (preds[j] - s.mean[g]) / s.n[g];
          (*grad)[j] = dpen_dm[g] * dmg + dpen_dv[g] * dvg;
        }
      }
      return pen;
    }
    case IndependenceTerm::mi_normal: {
      const double n = (double)preds.size();
      const double pi[2] = {s.n[0] / n, s.n[1] / n};
      const double pen = 0.5 * (std::log(s.var_all) - pi[0] * std::log(s.var[0]) -
                                pi[1] * std::log(s.var[1]));
      if (grad) {
        for (std::size_t j = 0; j < preds.size(); ++j) {
          const int g = group_of[j];
          (*grad)[j] = (preds[j] - s.mean_all) / (n * s.var_all) -
                       (preds[j] - s.mean[g]) / (n * s.var[g]);
        }
      }
      return pen;
    }
  }
  throw ConfigError("unhandled independence term");
}

std::unique_ptr<FittedModel> fit_pmf_independent(const InteractionSet& train,
                                                 const GroupAssignment& groups,
                                                 IndependenceTerm term,
                                                 double eta,
                                                 const ModelSpec& spec) {
  if (!std::isfinite(eta) || eta < 0.0)
    throw ConfigError("independence weight must be finite and >= 0");

  std::vector<int> group_of;
  group_of.reserve(train.size());
  for (const auto& r : train.rows())
    group_of.push_back(groups.label_of(r.user));

  PredictionPenalty penalty;
  penalty.weight = eta;
  penalty.eval = [term, group_of = std::move(group_of)](
                     const std::vector<double>& preds,
                     std::vector<double>& grad) {
    return independence_penalty(preds, group_of, term, &grad);
  };
  return std::make_unique<MfModel>(spec, train, &penalty);
}

double independence_objective_gradient(const MfFactors& f, MfVariant variant,
                                       const MfProblem& data,
                                       RatingScale out_scale,
                                       const std::vector<int>& group_of,
                                       IndependenceTerm term,
                                       MfFactors* grad) {
  const auto preds = mf_predictions(f, variant, data, out_scale);
  std::vector<double> dpen;
  const double pen = independence_penalty(preds, group_of, term, &dpen);
  if (!grad) return pen;

  const int k = f.P.cols;
  grad->P = Matrix(f.P.rows, k);
  grad->Q = Matrix(f.Q.rows, k);
  grad->bu.assign(f.bu.size(), 0.0);
  grad->bi.assign(f.bi.size(), 0.0);
  grad->mu = 0.0;
  const double span =
      variant == MfVariant::pmf ? (out_scale.hi - out_scale.lo) : 1.0;
  for (std::size_t j = 0; j < data.rows.size(); ++j) {
    const auto& [u, i, r] = data.rows[j];
    const double gp = dpen[j] * span;
    for (int c = 0; c < k; ++c) {
      grad->P.at(u, c) += gp * f.Q.at(i, c);
      grad->Q.at(i, c) += gp * f.P.at(u, c);
    }
    if (variant == MfVariant::biased) {
      grad->bu[u] += gp;
      grad->bi[i] += gp;
    }
  }
  return pen;
}

}  // namespace fairbench

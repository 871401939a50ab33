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

#include "fairbench/models/mf.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "fairbench/errors.hpp"
#include "fairbench/kernels.hpp"
#include "fairbench/models/detail.hpp"
#include "fairbench/rng.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

MfVariant mf_variant_from(const std::string& name) {
  if (name == "funk") return MfVariant::funk;
  if (name == "biased") return MfVariant::biased;
  if (name == "pmf") return MfVariant::pmf;
  throw ConfigError("unknown mf variant: " + name);
}

const char* mf_variant_name(MfVariant v) {
  switch (v) {
    case MfVariant::funk: return "funk";
    case MfVariant::biased: return "biased";
    case MfVariant::pmf: return "pmf";
  }
  return "?";
}

namespace {

// pmf trains on ratings mapped into [0,1]; the other variants train on the
// raw scale.
double to_internal(double rating, MfVariant v, RatingScale s) {
  if (v != MfVariant::pmf) return rating;
  return (rating - s.lo) / (s.hi - s.lo);
}

double internal_span(MfVariant v, RatingScale s) {
  return v == MfVariant::pmf ? (s.hi - s.lo) : 1.0;
}

double internal_offset(MfVariant v, RatingScale s) {
  return v == MfVariant::pmf ? s.lo : 0.0;
}

double predict_internal(const MfFactors& f, MfVariant v, int u, int i) {
  double y = kernels::dot(f.P.row(u), f.Q.row(i), (std::size_t)f.P.cols);
  if (v == MfVariant::biased) y += f.mu + f.bu[u] + f.bi[i];
  return y;
}

MfFactors init_factors(int n_users, int n_items, int k, MfVariant variant,
                       std::uint64_t seed, double mu) {
  MfFactors f;
  f.P = Matrix(n_users, k);
  f.Q = Matrix(n_items, k);
  const double scale = 1.0 / std::sqrt((double)k);
  Rng rng(seed);
  for (double& x : f.P.data) x = rng.uniform(-0.1, 0.1) * scale;
  for (double& x : f.Q.data) x = rng.uniform(-0.1, 0.1) * scale;
  if (variant == MfVariant::biased) {
    f.bu.assign(n_users, 0.0);
    f.bi.assign(n_items, 0.0);
    f.mu = mu;
  }
  return f;
}

}  // namespace

std::vector<double> mf_predictions(const MfFactors& f, MfVariant variant,
                                   const MfProblem& data,
                                   RatingScale out_scale) {
  std::vector<double> preds;
  preds.reserve(data.rows.size());
  const double span = internal_span(variant, out_scale);
  const double offset = internal_offset(variant, out_scale);
  for (const auto& [u, i, r] : data.rows) {
    preds.push_back(offset + span * predict_internal(f, variant, u, i));
  }
  return preds;
}

double mf_objective(const MfFactors& f, MfVariant variant,
                    const MfProblem& data, double reg) {
  double obj = 0.0;
  for (const auto& [u, i, r] : data.rows) {
    const double e = r - predict_internal(f, variant, u, i);
    obj += e * e;
  }
  obj += reg * (kernels::sumsq(f.P.data.data(), f.P.data.size()) +
                kernels::sumsq(f.Q.data.data(), f.Q.data.size()));
  if (variant == MfVariant::biased) {
    obj += reg * (kernels::sumsq(f.bu.data(), f.bu.size()) +
                  kernels::sumsq(f.bi.data(), f.bi.size()));
  }
  return obj;
}

MfFactors mf_objective_gradient(const MfFactors& f, MfVariant variant,
                                const MfProblem& data, double reg) {
  MfFactors g;
  const int k = f.P.cols;
  g.P = Matrix(f.P.rows, k);
  g.Q = Matrix(f.Q.rows, k);
  if (variant == MfVariant::biased) {
    g.bu.assign(f.bu.size(), 0.0);
    g.bi.assign(f.bi.size(), 0.0);
  }
  for (const auto& [u, i, r] : data.rows) {
    const double e = r - predict_internal(f, variant, u, i);
    kernels::axpy(-2.0 * e, f.Q.row(i), g.P.row(u), (std::size_t)k);
    kernels::axpy(-2.0 * e, f.P.row(u), g.Q.row(i), (std::size_t)k);
    if (variant == MfVariant::biased) {
      g.bu[u] += -2.0 * e;
      g.bi[i] += -2.0 * e;
    }
  }
  kernels::axpy(2.0 * reg, f.P.data.data(), g.P.data.data(), f.P.data.size());
  kernels::axpy(2.0 * reg, f.Q.data.data(), g.Q.data.data(), f.Q.data.size());
  if (variant == MfVariant::biased) {
    kernels::axpy(2.0 * reg, f.bu.data(), g.bu.data(), f.bu.size());
    kernels::axpy(2.0 * reg, f.bi.data(), g.bi.data(), f.bi.size());
  }
  return g;
}

MfModel::MfModel(const ModelSpec& spec, const InteractionSet& train,
                 const PredictionPenalty* penalty) {
  init_base(spec, train);
  variant_ = mf_variant_from(spec.sget("variant", "biased"));
  out_scale_ = train.scale();
  const int k = (int)spec.require("k");
  const double lr = spec.require("lr");
  const double reg = spec.require("reg");
  const int epochs = (int)spec.require("epochs");

  MfProblem data;
  data.n_users = (int)train.n_users();
  data.n_items = (int)train.n_items();
  data.rows.reserve(train.size());
  for (const auto& r : train.rows()) {
    data.rows.emplace_back(train.user_index(r.user), train.item_index(r.item),
                           to_internal(r.rating, variant_, out_scale_));
  }

  const double mu_internal =
      std::accumulate(data.rows.begin(), data.rows.end(), 0.0,
                      [](double acc, const auto& row) {
                        return acc + std::get<2>(row);
                      }) /
      (double)data.rows.size();
  factors_ = init_factors(data.n_users, data.n_items, k, variant_, spec.seed,
                          mu_internal);

  const double span = internal_span(variant_, out_scale_);
  Rng shuffle_rng(Rng::mix(spec.seed, 0x56d));
  std::vector<std::size_t> order(data.rows.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> pen_grad;  // d(term)/d(pred), refreshed per epoch
  const bool has_penalty = penalty != nullptr && penalty->eval != nullptr;

  for (int epoch = 0; epoch < epochs; ++epoch) {
    if (has_penalty) {
      const auto preds = mf_predictions(factors_, variant_, data, out_scale_);
      pen_grad.assign(preds.size(), 0.0);
      penalty->eval(preds, pen_grad);
    }
    shuffle_rng.shuffle(order);
    double sse = 0.0;
    for (const std::size_t j : order) {
      const auto& [u, i, r] = data.rows[j];
      double* p = factors_.P.row(u);
      double* q = factors_.Q.row(i);
      const double pred = predict_internal(factors_, variant_, u, i);
      const double e = r - pred;
      sse += e * e;
      kernels::mf_sgd_update(p, q, (std::size_t)k, e, lr, reg);
      if (variant_ == MfVariant::biased) {
        factors_.bu[u] += lr * (e - reg * factors_.bu[u]);
        factors_.bi[i] += lr * (e - reg * factors_.bi[i]);
      }
      if (has_penalty) {
        // d(pred_out)/d(pred_internal) = span; statistics frozen per epoch.
        const double gp = penalty->weight * pen_grad[j] * span;
        if (gp != 0.0) {
          for (int c = 0; c < k; ++c) {
            const double pc = p[c];
            p[c] -= lr * gp * q[c];
            q[c] -= lr * gp * pc;
          }
          if (variant_ == MfVariant::biased) {
            factors_.bu[u] -= lr * gp;
            factors_.bi[i] -= lr * gp;
          }
        }
      }
    }
    const double rmse = std::sqrt(sse / (double)data.rows.size());
    if (!std::isfinite(rmse)) {
      throw TrainError("mf_sgd diverged at epoch " + std::to_string(epoch) +
                       " (train RMSE not finite; lr=" + format_double(lr) +
                       ", reg=" + format_double(reg) + ")");
    }
    double obj = mf_objective(factors_, variant_, data, reg);
    if (has_penalty) {
      const auto preds = mf_predictions(factors_, variant_, data, out_scale_);
      std::vector<double> unused(preds.size(), 0.0);
      obj += penalty->weight * penalty->eval(preds, unused);
    }
    epoch_objectives_.push_back(obj);
  }
}

MfModel::MfModel(const detail::BaseFields& base, MfVariant variant,
                 MfFactors f, RatingScale out_scale)
    : variant_(variant), factors_(std::move(f)), out_scale_(out_scale) {
  init_base(base);
}

double MfModel::predict(int u, int i) const {
  if (u < 0 || i < 0) return global_mean_;
  const double y = predict_internal(factors_, variant_, u, i);
  return internal_offset(variant_, out_scale_) +
         internal_span(variant_, out_scale_) * y;
}

void MfModel::save_params(std::ostream& out) const {
  out << "variant " << mf_variant_name(variant_) << "\n";
  out << "scale " << format_double(out_scale_.lo) << ' '
      << format_double(out_scale_.hi) << "\n";
  out << "mu " << format_double(factors_.mu) << "\n";
  detail::write_matrix(out, "P", factors_.P);
  detail::write_matrix(out, "Q", factors_.Q);
  detail::write_vector(out, "bu", factors_.bu);
  detail::write_vector(out, "bi", factors_.bi);
}

std::unique_ptr<FittedModel> fit_mf_sgd(const InteractionSet& train,
                                        const ModelSpec& spec) {
  return std::make_unique<MfModel>(spec, train);
}

namespace detail {

std::unique_ptr<FittedModel> load_mf(std::istream& in,
                                     const BaseFields& base) {
  std::string word, variant_name;
  in >> word >> variant_name;
  RatingScale scale;
  in >> word >> scale.lo >> scale.hi;
  MfFactors f;
  in >> word >> f.mu;
  f.P = read_matrix(in, "P");
  f.Q = read_matrix(in, "Q");
  f.bu = read_vector(in, "bu");
  f.bi = read_vector(in, "bi");
  return std::make_unique<MfModel>(base, mf_variant_from(variant_name),
                                   std::move(f), scale);
}

}  // namespace detail

}  // namespace fairbench

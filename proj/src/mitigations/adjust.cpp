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

#include "fairbench/mitigations/adjust.hpp"

#include <algorithm>
#include <ostream>

#include "fairbench/errors.hpp"
#include "fairbench/models/detail.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

AdjustMode adjust_mode_from(const std::string& name) {
  if (name == "value") return AdjustMode::value;
  if (name == "parity") return AdjustMode::parity;
  throw ConfigError("unknown adjust mode: " + name);
}

std::array<double, 2> adjustment_offsets(const FittedModel& model,
                                         const InteractionSet& train,
                                         const GroupAssignment& groups,
                                         AdjustMode mode) {
  double pred_sum[2] = {0, 0}, resid_sum[2] = {0, 0};
  std::size_t count[2] = {0, 0};
  for (const auto& r : train.rows()) {
    const int g = groups.label_of(r.user);
    const double pred = model.predict_id(r.user, r.item);
    pred_sum[g] += pred;
    resid_sum[g] += r.rating - pred;
    ++count[g];
  }
  if (count[0] == 0 || count[1] == 0)
    throw DataError("adjust_ratings: a group has no train pairs");

  if (mode == AdjustMode::value) {
    return {resid_sum[0] / (double)count[0], resid_sum[1] / (double)count[1]};
  }
  // parity: shift group 1 so the train-set group prediction means coincide.
  const double delta =
      pred_sum[0] / (double)count[0] - pred_sum[1] / (double)count[1];
  return {0.0, delta};
}

ScoreTable adjust_ratings(const ScoreTable& predictions,
                          const FittedModel& model, const InteractionSet& train,
                          const GroupAssignment& groups, AdjustMode mode,
                          RatingScale scale) {
  const auto offsets = adjustment_offsets(model, train, groups, mode);
  ScoreTable out;
  for (const auto& e : predictions.rows()) {
    const double adjusted = e.score + offsets[groups.label_of(e.user)];
    out.add(e.user, e.item, std::clamp(adjusted, scale.lo, scale.hi));
  }
  return out;
}

AdjustedModel::AdjustedModel(std::unique_ptr<FittedModel> inner,
                             const GroupAssignment& groups,
                             std::array<double, 2> offsets, RatingScale scale)
    : inner_(std::move(inner)), offsets_(offsets), scale_(scale) {
  detail::BaseFields fields;
  fields.spec = inner_->spec();
  fields.train_ref = inner_->train_reference();
  fields.global_mean = inner_->global_mean();
  fields.users = inner_->users();
  fields.items = inner_->items();
  init_base(fields);
  group_of_.reserve(users_.size());
  for (const auto& u : users_) group_of_.push_back(groups.label_of(u));
}

AdjustedModel::AdjustedModel(const detail::BaseFields& base,
                             std::unique_ptr<FittedModel> inner,
                             std::vector<int> group_of,
                             std::array<double, 2> offsets, RatingScale scale)
    : inner_(std::move(inner)),
      group_of_(std::move(group_of)),
      offsets_(offsets),
      scale_(scale) {
  init_base(base);
}

double AdjustedModel::predict(int u, int i) const {
  const double base = inner_->predict(u, i);
  const double offset =
      (u >= 0 && u < (int)group_of_.size()) ? offsets_[group_of_[u]] : 0.0;
  return std::clamp(base + offset, scale_.lo, scale_.hi);
}

void AdjustedModel::save_params(std::ostream& out) const {
  out << "offsets " << format_double(offsets_[0]) << ' '
      << format_double(offsets_[1]) << "\n";
  out << "scale " << format_double(scale_.lo) << ' '
      << format_double(scale_.hi) << "\n";
  out << "groups " << group_of_.size();
  for (int g : group_of_) out << ' ' << g;
  out << "\n";
  inner_->save(out);
}

std::unique_ptr<FittedModel> make_adjusted_model(
    std::unique_ptr<FittedModel> inner, const InteractionSet& train,
    const GroupAssignment& groups, AdjustMode mode) {
  const auto offsets = adjustment_offsets(*inner, train, groups, mode);
  const RatingScale scale = train.scale();
  return std::make_unique<AdjustedModel>(std::move(inner), groups, offsets,
                                         scale);
}

namespace detail {

std::unique_ptr<FittedModel> load_adjusted(std::istream& in,
                                           const BaseFields& base) {
  std::string word;
  std::array<double, 2> offsets;
  in >> word >> offsets[0] >> offsets[1];
  RatingScale scale;
  in >> word >> scale.lo >> scale.hi;
  std::size_t n;
  in >> word >> n;
  std::vector<int> group_of(n);
  for (auto& g : group_of) in >> g;
  std::string rest;
  std::getline(in, rest);  // consume the line break before the inner header
  if (!in) throw DataError("adjusted checkpoint truncated");
  auto inner = load_model(in);
  return std::make_unique<AdjustedModel>(base, std::move(inner),
                                         std::move(group_of), offsets, scale);
}

}  // namespace detail

}  // namespace fairbench

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

#include "fairbench/models/popularity.hpp"

#include <ostream>

#include "fairbench/errors.hpp"
#include "fairbench/models/detail.hpp"

namespace fairbench {

double damped_mean(double rating_sum, std::size_t count, double damping,
                   double prior) {
  return (damping * prior + rating_sum) / (damping + (double)count);
}

PopularityModel::PopularityModel(const ModelSpec& spec,
                                 const InteractionSet& train) {
  init_base(spec, train);
  const std::string mode_name =
      spec.sget("mode", spec.family == ModelFamily::avg_rating ? "mean_rating"
                                                               : "count");
  if (mode_name == "count") {
    mode_ = Mode::count;
  } else if (mode_name == "mean_rating") {
    mode_ = Mode::mean_rating;
  } else {
    throw ConfigError("popularity: unknown mode " + mode_name);
  }

  std::vector<double> sums(items_.size(), 0.0);
  std::vector<std::size_t> counts(items_.size(), 0);
  for (const auto& r : train.rows()) {
    const int i = item_index(r.item);
    sums[i] += r.rating;
    ++counts[i];
  }

  item_scores_.resize(items_.size());
  if (mode_ == Mode::count) {
    for (std::size_t i = 0; i < items_.size(); ++i)
      item_scores_[i] = (double)counts[i];
  } else {
    const double damping = spec.get("damping", 10.0);
    const double prior = spec.get("prior", global_mean_);
    for (std::size_t i = 0; i < items_.size(); ++i)
      item_scores_[i] = damped_mean(sums[i], counts[i], damping, prior);
  }
}

PopularityModel::PopularityModel(const detail::BaseFields& base, Mode mode,
                                 std::vector<double> item_scores)
    : mode_(mode), item_scores_(std::move(item_scores)) {
  init_base(base);
}

double PopularityModel::predict(int /*u*/, int i) const {
  if (i < 0 || i >= (int)item_scores_.size()) return global_mean_;
  return item_scores_[i];
}

void PopularityModel::save_params(std::ostream& out) const {
  out << "mode " << (mode_ == Mode::count ? "count" : "mean_rating") << "\n";
  detail::write_vector(out, "item_scores", item_scores_);
}

std::unique_ptr<FittedModel> fit_popularity(const InteractionSet& train,
                                            const ModelSpec& spec) {
  return std::make_unique<PopularityModel>(spec, train);
}

namespace detail {

std::unique_ptr<FittedModel> load_popularity(std::istream& in,
                                             const BaseFields& base) {
  std::string word, mode_name;
  in >> word >> mode_name;
  if (word != "mode") throw DataError("popularity checkpoint: missing mode");
  auto scores = read_vector(in, "item_scores");
  return std::make_unique<PopularityModel>(
      base,
      mode_name == "count" ? PopularityModel::Mode::count
                           : PopularityModel::Mode::mean_rating,
      std::move(scores));
}

}  // namespace detail

}  // namespace fairbench

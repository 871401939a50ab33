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

#include "fairbench/models/knn.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fairbench/errors.hpp"
#include "fairbench/models/detail.hpp"
#include "fairbench/parallel.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

namespace {

// Walks two coordinate-sorted sparse vectors in lockstep.
template <typename F>
void for_overlap(const std::vector<std::pair<int, double>>& a,
                 const std::vector<std::pair<int, double>>& b, F&& f) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      f(a[i].second, b[j].second);
      ++i;
      ++j;
    }
  }
}

}  // namespace

double shared_cosine(const std::vector<std::pair<int, double>>& a,
                     const std::vector<std::pair<int, double>>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for_overlap(a, b, [&](double x, double y) {
    dot += x * y;
    na += x * x;
    nb += y * y;
  });
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

double shared_pearson(const std::vector<std::pair<int, double>>& a,
                      const std::vector<std::pair<int, double>>& b) {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for_overlap(a, b, [&](double x, double y) {
    sx += x;
    sy += y;
    ++n;
  });
  if (n == 0) return 0.0;
  const double mx = sx / (double)n, my = sy / (double)n;
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for_overlap(a, b, [&](double x, double y) {
    dot += (x - mx) * (y - my);
    nx += (x - mx) * (x - mx);
    ny += (y - my) * (y - my);
  });
  if (nx <= 0.0 || ny <= 0.0) return 0.0;
  return dot / std::sqrt(nx * ny);
}

double knn_weighted_average(const std::vector<Neighbor>& neighbors,
                            bool pearson, double target_mean,
                            double fallback) {
  double num = 0.0, den = 0.0;
  for (const auto& nb : neighbors) {
    den += std::abs(nb.similarity);
    num += pearson ? nb.similarity * (nb.rating - nb.rater_mean)
                   : nb.similarity * nb.rating;
  }
  if (den <= 0.0) return fallback;
  return pearson ? target_mean + num / den : num / den;
}

KnnModel::KnnModel(const ModelSpec& spec, const InteractionSet& train) {
  init_base(spec, train);
  axis_ = spec.family == ModelFamily::user_knn ? Axis::user : Axis::item;
  sim_ = spec.sget("similarity", "cosine") == "pearson" ? Similarity::pearson
                                                        : Similarity::cosine;
  neighbors_ = (int)spec.get("neighbors", 20.0);
  const double shrinkage = spec.get("shrinkage", 0.0);

  const auto ix = IndexedRatings::build(train);
  by_user_ = ix.by_user;
  by_item_ = ix.by_item;
  user_mean_ = ix.user_mean;
  item_mean_ = ix.item_mean;
  for (auto& row : by_user_)
    std::sort(row.begin(), row.end());
  for (auto& row : by_item_)
    std::sort(row.begin(), row.end());

  // Entity rating vectors along the chosen axis: users are vectors over
  // items (user axis) or items are vectors over users (item axis).
  const auto& vectors = axis_ == Axis::user ? by_user_ : by_item_;
  const int n = (int)vectors.size();
  table_ = Matrix(n, n, 0.0);
  parallel_for(0, n, [&](int a) {
    for (int b = a + 1; b < n; ++b) {
      double s = sim_ == Similarity::cosine
                     ? shared_cosine(vectors[a], vectors[b])
                     : shared_pearson(vectors[a], vectors[b]);
      if (s != 0.0 && shrinkage > 0.0) {
        std::size_t overlap = 0;
        for_overlap(vectors[a], vectors[b],
                    [&](double, double) { ++overlap; });
        s *= (double)overlap / ((double)overlap + shrinkage);
      }
      table_.at(a, b) = s;
      table_.at(b, a) = s;
    }
  });
}

KnnModel::KnnModel(const detail::BaseFields& base, Axis axis, Similarity sim,
                   int neighbors, Matrix table,
                   std::vector<std::vector<std::pair<int, double>>> by_user,
                   std::vector<std::vector<std::pair<int, double>>> by_item,
                   std::vector<double> user_mean, std::vector<double> item_mean)
    : axis_(axis),
      sim_(sim),
      neighbors_(neighbors),
      table_(std::move(table)),
      by_user_(std::move(by_user)),
      by_item_(std::move(by_item)),
      user_mean_(std::move(user_mean)),
      item_mean_(std::move(item_mean)) {
  init_base(base);
}

double KnnModel::predict(int u, int i) const {
  if (u < 0 || i < 0) return global_mean_;
  const bool pearson = sim_ == Similarity::pearson;

  // Co-raters: users who rated i (user axis) / items rated by u (item axis).
  const auto& co = axis_ == Axis::user ? by_item_[i] : by_user_[u];
  const int self = axis_ == Axis::user ? u : i;
  std::vector<std::pair<double, const std::pair<int, double>*>> cands;
  cands.reserve(co.size());
  for (const auto& entry : co) {
    if (entry.first == self) continue;
    const double s = table_.at(self, entry.first);
    if (s != 0.0) cands.emplace_back(s, &entry);
  }
  const std::size_t take = std::min<std::size_t>(neighbors_, cands.size());
  std::partial_sort(cands.begin(), cands.begin() + take, cands.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second->first < b.second->first;
                    });

  const double fallback = item_mean_.empty() ? global_mean_ : item_mean_[i];
  std::vector<Neighbor> top;
  top.reserve(take);
  for (std::size_t c = 0; c < take; ++c) {
    const auto [idx, rating] = *cands[c].second;
    const double rater_mean =
        axis_ == Axis::user ? user_mean_[idx] : item_mean_[idx];
    top.push_back({cands[c].first, rating, rater_mean});
  }
  const double target_mean = axis_ == Axis::user ? user_mean_[u] : item_mean_[i];
  return knn_weighted_average(top, pearson, target_mean, fallback);
}

void KnnModel::save_params(std::ostream& out) const {
  out << "axis " << (axis_ == Axis::user ? "user" : "item") << "\n";
  out << "similarity " << (sim_ == Similarity::pearson ? "pearson" : "cosine")
      << "\n";
  out << "neighbors " << neighbors_ << "\n";
  detail::write_matrix(out, "similarity_table", table_);
  detail::write_vector(out, "user_mean", user_mean_);
  detail::write_vector(out, "item_mean", item_mean_);
  // Ratings stored as (row, col, value) triplets per axis entity.
  out << "ratings " << by_user_.size() << "\n";
  for (std::size_t u = 0; u < by_user_.size(); ++u) {
    out << by_user_[u].size();
    for (const auto& [i, r] : by_user_[u]) {
      out << ' ' << i << ' ' << format_double(r);
    }
    out << "\n";
  }
}

std::unique_ptr<FittedModel> fit_knn(const InteractionSet& train,
                                     const ModelSpec& spec) {
  return std::make_unique<KnnModel>(spec, train);
}

namespace detail {

std::unique_ptr<FittedModel> load_knn(std::istream& in,
                                      const BaseFields& base) {
  std::string word, axis_name, sim_name;
  int neighbors;
  in >> word >> axis_name;
  in >> word >> sim_name;
  in >> word >> neighbors;
  Matrix table = read_matrix(in, "similarity_table");
  auto user_mean = read_vector(in, "user_mean");
  auto item_mean = read_vector(in, "item_mean");
  std::size_t n_users;
  in >> word >> n_users;
  if (word != "ratings") throw DataError("knn checkpoint: missing ratings");
  std::vector<std::vector<std::pair<int, double>>> by_user(n_users);
  std::vector<std::vector<std::pair<int, double>>> by_item(base.items.size());
  for (std::size_t u = 0; u < n_users; ++u) {
    std::size_t cnt;
    in >> cnt;
    by_user[u].resize(cnt);
    for (auto& [i, r] : by_user[u]) in >> i >> r;
    for (const auto& [i, r] : by_user[u]) by_item[i].emplace_back((int)u, r);
  }
  if (!in) throw DataError("knn checkpoint truncated");
  for (auto& row : by_item) std::sort(row.begin(), row.end());
  return std::make_unique<KnnModel>(
      base,
      axis_name == "user" ? KnnModel::Axis::user : KnnModel::Axis::item,
      sim_name == "pearson" ? KnnModel::Similarity::pearson
                            : KnnModel::Similarity::cosine,
      neighbors, std::move(table), std::move(by_user), std::move(by_item),
      std::move(user_mean), std::move(item_mean));
}

}  // namespace detail

}  // namespace fairbench

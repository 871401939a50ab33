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

#include "fairbench/models/slim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <ostream>

#include "fairbench/errors.hpp"
#include "fairbench/models/detail.hpp"
#include "fairbench/parallel.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

double slim_objective(const std::vector<double>& w,
                      const std::vector<std::vector<double>>& peer_rows,
                      const std::vector<double>& target_row, double l1,
                      double l2, double lambda_bal,
                      const std::vector<double>& signs) {
  const std::size_t n_items = target_row.size();
  double obj = 0.0;
  for (std::size_t i = 0; i < n_items; ++i) {
    double pred = 0.0;
    for (std::size_t v = 0; v < w.size(); ++v) pred += w[v] * peer_rows[v][i];
    const double e = target_row[i] - pred;
    obj += 0.5 * e * e;
  }
  double bal = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    obj += l1 * std::abs(w[v]) + 0.5 * l2 * w[v] * w[v];
    if (!signs.empty()) bal += signs[v] * w[v];
  }
  obj += 0.5 * lambda_bal * bal * bal;
  return obj;
}

namespace {

// Cyclic coordinate descent for one target user. peers[v] points at peer v's
// sparse rating row; signs is empty when no balance term is attached.
// Returns the dense weight vector over peers.
std::vector<double> solve_user(
    const std::vector<const std::vector<std::pair<int, double>>*>& peers,
    const std::vector<double>& peer_sumsq,
    const std::vector<std::pair<int, double>>& target, int n_items, double l1,
    double l2, double lambda_bal, const std::vector<double>& signs,
    int max_sweeps, double tol, bool* converged) {
  const std::size_t n_peers = peers.size();
  std::vector<double> w(n_peers, 0.0);
  std::vector<double> residual(n_items, 0.0);
  for (const auto& [i, r] : target) residual[i] = r;
  double signed_sum = 0.0;  // p.w

  *converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (std::size_t v = 0; v < n_peers; ++v) {
      if (peer_sumsq[v] <= 0.0) continue;
      // Correlation of peer v with the residual that excludes v itself.
      double g = w[v] * peer_sumsq[v];
      for (const auto& [i, r] : *peers[v]) g += r * residual[i];
      double numerator = g - l1;
      double denominator = peer_sumsq[v] + l2;
      if (lambda_bal > 0.0) {
        const double s_minus = signed_sum - signs[v] * w[v];
        numerator -= lambda_bal * signs[v] * s_minus;
        denominator += lambda_bal;
      }
      const double w_new = std::max(0.0, numerator / denominator);
      const double delta = w_new - w[v];
      if (delta != 0.0) {
        for (const auto& [i, r] : *peers[v]) residual[i] -= delta * r;
        if (lambda_bal > 0.0) signed_sum += signs[v] * delta;
        w[v] = w_new;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (max_delta < tol) {
      *converged = true;
      break;
    }
  }
  return w;
}

}  // namespace

SlimUModel::SlimUModel(const ModelSpec& spec, const InteractionSet& train,
                       const std::optional<SlimBalance>& balance) {
  init_base(spec, train);
  const double l1 = spec.get("l1", 0.1);
  const double l2 = spec.get("l2", 0.1);
  const int max_sweeps = (int)spec.get("sweeps", 50.0);
  const double tol = spec.get("tol", 1e-9);
  const double lambda_bal =
      balance && balance->groups ? balance->lambda_bal : 0.0;

  const auto ix = IndexedRatings::build(train);
  by_item_ = ix.by_item;
  for (auto& row : by_item_) std::sort(row.begin(), row.end());

  std::vector<double> sumsq(ix.n_users, 0.0);
  for (int v = 0; v < ix.n_users; ++v) {
    for (const auto& [i, r] : ix.by_user[v]) sumsq[v] += r * r;
  }

  std::vector<double> all_signs(ix.n_users, 0.0);
  if (lambda_bal > 0.0) {
    for (int v = 0; v < ix.n_users; ++v) {
      all_signs[v] =
          balance->groups->label_of(train.user_id(v)) == 0 ? 1.0 : -1.0;
    }
  }

  weights_.resize(ix.n_users);
  std::atomic<int> nonconverged{0};
  parallel_for(0, ix.n_users, [&](int u) {
    std::vector<const std::vector<std::pair<int, double>>*> peers;
    std::vector<double> peer_sumsq, signs;
    std::vector<int> peer_ids;
    peers.reserve(ix.n_users - 1);
    for (int v = 0; v < ix.n_users; ++v) {
      if (v == u) continue;  // zero diagonal
      peers.push_back(&ix.by_user[v]);
      peer_sumsq.push_back(sumsq[v]);
      peer_ids.push_back(v);
      if (lambda_bal > 0.0) signs.push_back(all_signs[v]);
    }
    bool converged = false;
    const auto w =
        solve_user(peers, peer_sumsq, ix.by_user[u], ix.n_items, l1, l2,
                   lambda_bal, signs, max_sweeps, tol, &converged);
    if (!converged) ++nonconverged;
    auto& out = weights_[u];
    for (std::size_t v = 0; v < w.size(); ++v) {
      if (w[v] > 0.0) out.emplace_back(peer_ids[v], w[v]);
    }
  });
  if (nonconverged > 0) {
    std::cerr << "warning: slim_u coordinate descent hit the sweep limit for "
              << nonconverged << " user(s); keeping the last iterate\n";
  }
}

SlimUModel::SlimUModel(
    const detail::BaseFields& base,
    std::vector<std::vector<std::pair<int, double>>> weights,
    std::vector<std::vector<std::pair<int, double>>> ratings_by_item)
    : weights_(std::move(weights)), by_item_(std::move(ratings_by_item)) {
  init_base(base);
}

double SlimUModel::predict(int u, int i) const {
  if (u < 0 || i < 0) return global_mean_;
  const auto& w = weights_[u];
  const auto& raters = by_item_[i];
  double pred = 0.0;
  std::size_t a = 0, b = 0;
  while (a < w.size() && b < raters.size()) {
    if (w[a].first < raters[b].first) {
      ++a;
    } else if (raters[b].first < w[a].first) {
      ++b;
    } else {
      pred += w[a].second * raters[b].second;
      ++a;
      ++b;
    }
  }
  return pred;
}

double SlimUModel::balance_dot(int u, const std::vector<double>& signs) const {
  double s = 0.0;
  for (const auto& [v, w] : weights_[u]) s += signs[v] * w;
  return s;
}

void SlimUModel::save_params(std::ostream& out) const {
  out << "weights " << weights_.size() << "\n";
  for (const auto& row : weights_) {
    out << row.size();
    for (const auto& [v, w] : row) out << ' ' << v << ' ' << format_double(w);
    out << "\n";
  }
  out << "ratings " << by_item_.size() << "\n";
  for (const auto& row : by_item_) {
    out << row.size();
    for (const auto& [u, r] : row) out << ' ' << u << ' ' << format_double(r);
    out << "\n";
  }
}

std::unique_ptr<FittedModel> fit_slim_u(
    const InteractionSet& train, const ModelSpec& spec,
    const std::optional<SlimBalance>& balance) {
  return std::make_unique<SlimUModel>(spec, train, balance);
}

namespace detail {

namespace {

std::vector<std::vector<std::pair<int, double>>> read_sparse_rows(
    std::istream& in, const char* tag_expect) {
  std::string tag;
  std::size_t n;
  in >> tag >> n;
  if (tag != tag_expect) throw DataError("slim checkpoint: missing block");
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  for (auto& row : rows) {
    std::size_t cnt;
    in >> cnt;
    row.resize(cnt);
    for (auto& [idx, val] : row) in >> idx >> val;
  }
  if (!in) throw DataError("slim checkpoint truncated");
  return rows;
}

}  // namespace

std::unique_ptr<FittedModel> load_slim(std::istream& in,
                                       const BaseFields& base) {
  auto weights = read_sparse_rows(in, "weights");
  auto by_item = read_sparse_rows(in, "ratings");
  return std::make_unique<SlimUModel>(base, std::move(weights),
                                      std::move(by_item));
}

}  // namespace detail

}  // namespace fairbench

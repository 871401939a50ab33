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

#include "fairbench/models/als.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <ostream>

#include "fairbench/errors.hpp"
#include "fairbench/kernels.hpp"
#include "fairbench/models/detail.hpp"
#include "fairbench/parallel.hpp"
#include "fairbench/rng.hpp"

namespace fairbench {

void als_solve_block(
    Matrix& target, const Matrix& fixed,
    const std::vector<std::vector<std::pair<int, double>>>& adjacency,
    double reg) {
  const int k = target.cols;
  parallel_for(0, target.rows, [&](int row) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
    for (const auto& [other, rating] : adjacency[row]) {
      const Eigen::Map<const Eigen::VectorXd> v(fixed.row(other), k);
      A.noalias() += v * v.transpose();
      b.noalias() += rating * v;
    }
    A.diagonal().array() += reg;
    Eigen::Map<Eigen::VectorXd>(target.row(row), k) = A.ldlt().solve(b);
  });
}

namespace {

double observed_rmse(
    const Matrix& P, const Matrix& Q,
    const std::vector<std::vector<std::pair<int, double>>>& by_user,
    std::size_t n_ratings) {
  double sse = 0.0;
  for (int u = 0; u < P.rows; ++u) {
    for (const auto& [i, r] : by_user[u]) {
      const double e = r - kernels::dot(P.row(u), Q.row(i), (std::size_t)P.cols);
      sse += e * e;
    }
  }
  return std::sqrt(sse / (double)n_ratings);
}

}  // namespace

AlsModel::AlsModel(const ModelSpec& spec, const InteractionSet& train) {
  init_base(spec, train);
  const int k = (int)spec.require("k");
  const double reg = spec.require("reg");
  const int epochs = (int)spec.require("epochs");
  const double tol = spec.get("tol", 1e-6);

  const auto ix = IndexedRatings::build(train);
  P_ = Matrix(ix.n_users, k);
  Q_ = Matrix(ix.n_items, k);
  const double scale = 1.0 / std::sqrt((double)k);
  Rng rng(spec.seed);
  for (double& x : P_.data) x = rng.uniform(-0.1, 0.1) * scale;
  for (double& x : Q_.data) x = rng.uniform(-0.1, 0.1) * scale;

  double prev_rmse = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < epochs; ++sweep) {
    als_solve_block(P_, Q_, ix.by_user, reg);
    als_solve_block(Q_, P_, ix.by_item, reg);
    const double rmse = observed_rmse(P_, Q_, ix.by_user, train.size());
    if (!std::isfinite(rmse))
      throw TrainError("als: non-finite train RMSE at sweep " +
                       std::to_string(sweep));
    sweep_rmse_.push_back(rmse);
    sweep_objective_.push_back(
        rmse * rmse * (double)train.size() +
        reg * (kernels::sumsq(P_.data.data(), P_.data.size()) +
               kernels::sumsq(Q_.data.data(), Q_.data.size())));
    if (prev_rmse - rmse < tol) break;
    prev_rmse = rmse;
  }
}

AlsModel::AlsModel(const detail::BaseFields& base, Matrix P, Matrix Q)
    : P_(std::move(P)), Q_(std::move(Q)) {
  init_base(base);
}

double AlsModel::predict(int u, int i) const {
  if (u < 0 || i < 0) return global_mean_;
  return kernels::dot(P_.row(u), Q_.row(i), (std::size_t)P_.cols);
}

void AlsModel::save_params(std::ostream& out) const {
  detail::write_matrix(out, "P", P_);
  detail::write_matrix(out, "Q", Q_);
}

std::unique_ptr<FittedModel> fit_als(const InteractionSet& train,
                                     const ModelSpec& spec) {
  return std::make_unique<AlsModel>(spec, train);
}

namespace detail {

std::unique_ptr<FittedModel> load_als(std::istream& in,
                                      const BaseFields& base) {
  Matrix P = read_matrix(in, "P");
  Matrix Q = read_matrix(in, "Q");
  return std::make_unique<AlsModel>(base, std::move(P), std::move(Q));
}

}  // namespace detail

}  // namespace fairbench

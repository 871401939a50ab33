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

#include "fairbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fairbench/errors.hpp"

namespace fairbench {

namespace {

// Value blocks of the pooled sample: (multiplicity, #from sample a).
struct TieBlock {
  int total = 0;
  int from_a = 0;
};

std::vector<TieBlock> pooled_blocks(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  std::vector<std::pair<double, int>> pool;
  pool.reserve(a.size() + b.size());
  for (double v : a) pool.emplace_back(v, 0);
  for (double v : b) pool.emplace_back(v, 1);
  std::sort(pool.begin(), pool.end());
  std::vector<TieBlock> blocks;
  for (std::size_t i = 0; i < pool.size();) {
    std::size_t j = i;
    TieBlock blk;
    while (j < pool.size() && pool[j].first == pool[i].first) {
      ++blk.total;
      blk.from_a += (pool[j].second == 0);
      ++j;
    }
    blocks.push_back(blk);
    i = j;
  }
  return blocks;
}

// Observed 2*U of sample a: per block, each a-element beats every b-element
// of earlier blocks (2 per pair) and half-ties the block's own b-elements.
std::int64_t observed_two_u(const std::vector<TieBlock>& blocks) {
  std::int64_t two_u = 0;
  std::int64_t b_before = 0;
  for (const auto& blk : blocks) {
    const std::int64_t from_b = blk.total - blk.from_a;
    two_u += blk.from_a * (2 * b_before + from_b);
    b_before += from_b;
  }
  return two_u;
}

// Null distribution of 2U by dynamic programming over tie blocks: counts of
// arrangements (choices of which pooled positions belong to sample a) per
// achievable 2U. Counts stay below 2^53 whenever n_a*n_b <= 400, so doubles
// hold them exactly.
std::vector<double> exact_two_u_distribution(
    const std::vector<TieBlock>& blocks, int n_a, int n_b) {
  const int max_two_u = 2 * n_a * n_b;
  // dp[a_used][2u]
  std::vector<std::vector<double>> dp(
      n_a + 1, std::vector<double>(max_two_u + 1, 0.0));
  dp[0][0] = 1.0;

  // Binomial table up to the largest block size.
  int max_t = 0;
  for (const auto& blk : blocks) max_t = std::max(max_t, blk.total);
  std::vector<std::vector<double>> choose(max_t + 1,
                                          std::vector<double>(max_t + 1, 0.0));
  for (int n = 0; n <= max_t; ++n) {
    choose[n][0] = 1.0;
    for (int k = 1; k <= n; ++k) {
      choose[n][k] = choose[n - 1][k - 1] + (k <= n - 1 ? choose[n - 1][k] : 0);
    }
  }

  int processed = 0;
  for (const auto& blk : blocks) {
    std::vector<std::vector<double>> next(
        n_a + 1, std::vector<double>(max_two_u + 1, 0.0));
    for (int a_used = 0; a_used <= std::min(n_a, processed); ++a_used) {
      const int b_before = processed - a_used;
      for (int two_u = 0; two_u <= max_two_u; ++two_u) {
        const double ways = dp[a_used][two_u];
        if (ways == 0.0) continue;
        const int j_max = std::min(blk.total, n_a - a_used);
        for (int j = 0; j <= j_max; ++j) {
          const int add = j * (2 * b_before + (blk.total - j));
          next[a_used + j][two_u + add] += ways * choose[blk.total][j];
        }
      }
    }
    dp.swap(next);
    processed += blk.total;
  }
  return dp[n_a];
}

double normal_sf_two_sided(double z_abs) {
  // 2 * (1 - Phi(z)) = erfc(z / sqrt(2))
  return std::erfc(z_abs / std::sqrt(2.0));
}

}  // namespace

MannWhitneyResult mann_whitney(const std::vector<double>& a,
                               const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw DataError("mann_whitney requires non-empty samples");
  const int n_a = (int)a.size();
  const int n_b = (int)b.size();
  const auto blocks = pooled_blocks(a, b);
  const std::int64_t two_u = observed_two_u(blocks);

  MannWhitneyResult res;
  res.u = (double)two_u / 2.0;

  const std::int64_t center = (std::int64_t)n_a * n_b;  // = 2 * (n_a n_b / 2)
  const std::int64_t dev = std::llabs(two_u - center);

  if ((std::int64_t)n_a * n_b <= 400) {
    res.exact = true;
    const auto dist = exact_two_u_distribution(blocks, n_a, n_b);
    double tail = 0.0, total = 0.0;
    for (std::size_t v = 0; v < dist.size(); ++v) {
      total += dist[v];
      if (std::llabs((std::int64_t)v - center) >= dev) tail += dist[v];
    }
    res.p = std::min(1.0, tail / total);
    return res;
  }

  // Normal approximation with tie correction and continuity correction.
  const double n = (double)(n_a + n_b);
  double tie_term = 0.0;
  for (const auto& blk : blocks) {
    const double t = (double)blk.total;
    tie_term += t * t * t - t;
  }
  const double var =
      ((double)n_a * n_b / 12.0) * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) {
    res.p = 1.0;
    return res;
  }
  const double diff = std::max(0.0, (double)dev / 2.0 - 0.5);
  res.p = std::min(1.0, normal_sf_two_sided(diff / std::sqrt(var)));
  return res;
}

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  const double a2 = -2.0 * x * x;
  double sum = 0.0;
  double sign = 2.0;
  double prev_term = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(a2 * (double)j * (double)j);
    sum += term;
    if (std::abs(term) <= 1e-3 * prev_term || std::abs(term) <= 1e-12 * sum) {
      return std::clamp(sum, 0.0, 1.0);
    }
    prev_term = std::abs(term);
    sign = -sign;
  }
  return 1.0;  // no convergence: x so small the tail mass is ~1
}

KsResult ks_two_sample(const std::vector<double>& g0,
                       const std::vector<double>& g1) {
  if (g0.empty() || g1.empty())
    throw DataError("ks_two_sample requires non-empty samples");
  std::vector<double> s0 = g0, s1 = g1;
  std::sort(s0.begin(), s0.end());
  std::sort(s1.begin(), s1.end());
  const double n0 = (double)s0.size();
  const double n1 = (double)s1.size();

  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < s0.size() && j < s1.size()) {
    const double v = std::min(s0[i], s1[j]);
    while (i < s0.size() && s0[i] == v) ++i;
    while (j < s1.size() && s1[j] == v) ++j;
    d = std::max(d, std::abs((double)i / n0 - (double)j / n1));
  }
  d = std::max(d, std::abs(1.0 - (double)j / n1));
  d = std::max(d, std::abs((double)i / n0 - 1.0));

  KsResult res;
  res.d = d;
  const double n_eff = n0 * n1 / (n0 + n1);
  res.p = kolmogorov_q(std::sqrt(n_eff) * d);
  return res;
}

}  // namespace fairbench

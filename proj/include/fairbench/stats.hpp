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

#include <vector>

namespace fairbench {

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of the first sample, midranks for ties
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Two-sided Mann-Whitney test. The exact permutation distribution (computed
/// over tied blocks, so ties are handled) is used when |a|*|b| <= 400;
/// otherwise the normal approximation with tie and continuity corrections.
/// Two-sided p is the null probability of |U - ab/2| at least as large as
/// observed.
MannWhitneyResult mann_whitney(const std::vector<double>& a,
                               const std::vector<double>& b);

struct KsResult {
  double d = 0.0;  // sup |F0 - F1|
  double p = 1.0;
};

/// Two-sample Kolmogorov-Smirnov: exact D via the empirical CDF walk, p from
/// the asymptotic Kolmogorov distribution at sqrt(n0*n1/(n0+n1)) * D.
KsResult ks_two_sample(const std::vector<double>& g0,
                       const std::vector<double>& g1);

// Survival function of the Kolmogorov distribution,
// Q(x) = 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2), clamped to [0,1].
double kolmogorov_q(double x);

}  // namespace fairbench

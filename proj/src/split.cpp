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

#include "fairbench/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fairbench/data_io.hpp"
#include "fairbench/errors.hpp"
#include "fairbench/rng.hpp"
#include "fairbench/text.hpp"

namespace fairbench {

const char* strategy_name(SplitStrategy s) {
  return s == SplitStrategy::temporal ? "temporal" : "random";
}

namespace {

std::int64_t round_half_away(double x) { return std::llround(x); }

InteractionSet make_canonical(const InteractionSet& parent,
                              std::vector<const Interaction*> rows) {
  std::sort(rows.begin(), rows.end(),
            [&](const Interaction* a, const Interaction* b) {
              const int ua = parent.user_index(a->user);
              const int ub = parent.user_index(b->user);
              if (ua != ub) return ua < ub;
              return parent.item_index(a->item) < parent.item_index(b->item);
            });
  std::vector<Interaction> out;
  out.reserve(rows.size());
  for (const Interaction* r : rows) out.push_back(*r);
  return InteractionSet(std::move(out), parent.scale());
}

}  // namespace

SplitBundle split_per_user(const InteractionSet& set, double test_frac,
                           double valid_frac, std::uint64_t seed) {
  if (test_frac < 0.0 || test_frac >= 1.0 || valid_frac < 0.0 ||
      valid_frac >= 1.0) {
    throw ConfigError("split fractions must lie in [0,1)");
  }
  if (test_frac + (1.0 - test_frac) * valid_frac >= 1.0) {
    throw ConfigError("nothing left for train after test/validation split");
  }

  const SplitStrategy strategy = set.all_timestamped()
                                     ? SplitStrategy::temporal
                                     : SplitStrategy::random;

  std::vector<std::vector<std::size_t>> by_user(set.n_users());
  for (std::size_t pos = 0; pos < set.rows().size(); ++pos) {
    by_user[set.user_index(set.rows()[pos].user)].push_back(pos);
  }

  std::vector<const Interaction*> train_rows, valid_rows, test_rows;
  for (std::size_t u = 0; u < by_user.size(); ++u) {
    auto& positions = by_user[u];
    const std::size_t n = positions.size();

    // Per-user substream so the outcome does not depend on user iteration
    // order or parallel scheduling.
    Rng rng(Rng::mix(seed, fnv1a(set.user_id((int)u))));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);  // tiebreak ranks
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[order[i]] = i;

    std::vector<std::size_t> local(n);
    std::iota(local.begin(), local.end(), 0);
    std::sort(local.begin(), local.end(), [&](std::size_t a, std::size_t b) {
      if (strategy == SplitStrategy::temporal) {
        const auto ta = *set.rows()[positions[a]].timestamp;
        const auto tb = *set.rows()[positions[b]].timestamp;
        if (ta != tb) return ta < tb;
      }
      return rank[a] < rank[b];
    });

    std::size_t n_test = 0, n_valid = 0;
    if (n >= 2) {
      n_test = std::min<std::size_t>(
          (std::size_t)std::max<std::int64_t>(
              0, round_half_away(test_frac * (double)n)),
          n - 1);
      const std::size_t remainder = n - n_test;
      if (remainder >= 2) {
        n_valid = std::min<std::size_t>(
            (std::size_t)std::max<std::int64_t>(
                0, round_half_away(valid_frac * (double)remainder)),
            remainder - 1);
      }
    }

    const std::size_t n_train = n - n_test - n_valid;
    for (std::size_t i = 0; i < n; ++i) {
      const Interaction* row = &set.rows()[positions[local[i]]];
      if (i < n_train) {
        train_rows.push_back(row);
      } else if (i < n_train + n_valid) {
        valid_rows.push_back(row);
      } else {
        test_rows.push_back(row);
      }
    }
  }

  SplitBundle bundle;
  bundle.train = make_canonical(set, std::move(train_rows));
  bundle.validation = make_canonical(set, std::move(valid_rows));
  bundle.test = make_canonical(set, std::move(test_rows));
  bundle.seed = seed;
  bundle.strategy = strategy;
  return bundle;
}

void save_split(const SplitBundle& bundle, double test_frac, double valid_frac,
                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_canonical(bundle.train, dir / "train.tsv");
  save_canonical(bundle.validation, dir / "validation.tsv");
  save_canonical(bundle.test, dir / "test.tsv");
  std::ofstream meta(dir / "split_meta.txt");
  if (!meta) throw DataError("cannot write split metadata");
  meta << "seed=" << bundle.seed << "\n"
       << "test_frac=" << format_double(test_frac) << "\n"
       << "valid_frac=" << format_double(valid_frac) << "\n"
       << "strategy=" << strategy_name(bundle.strategy) << "\n";
}

SplitBundle load_split(const std::filesystem::path& dir, RatingScale scale) {
  SplitBundle bundle;
  bundle.train = load_canonical(dir / "train.tsv", scale);
  bundle.validation = load_canonical(dir / "validation.tsv", scale);
  bundle.test = load_canonical(dir / "test.tsv", scale);
  std::ifstream meta(dir / "split_meta.txt");
  if (!meta) throw DataError("missing split metadata in " + dir.string());
  std::string line;
  while (std::getline(meta, line)) {
    const auto f = split(trim(line), "=");
    if (f.size() != 2) continue;
    if (f[0] == "seed") bundle.seed = std::stoull(f[1]);
    if (f[0] == "strategy") {
      bundle.strategy = (f[1] == "temporal") ? SplitStrategy::temporal
                                             : SplitStrategy::random;
    }
  }
  return bundle;
}

}  // namespace fairbench

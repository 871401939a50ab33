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

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fairbench {

inline unsigned worker_count() {
  if (const char* env = std::getenv("FAIRBENCH_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return (unsigned)n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Static block partition of [begin, end) over worker threads. Each index is
/// processed exactly once and bodies must write disjoint outputs, so results
/// are identical to the serial run regardless of thread count.
template <typename F>
void parallel_for(int begin, int end, F&& body) {
  const int n = end - begin;
  if (n <= 0) return;
  const unsigned workers = std::min<unsigned>(worker_count(), (unsigned)n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  const int chunk = (n + (int)workers - 1) / (int)workers;
  for (unsigned w = 0; w < workers; ++w) {
    const int lo = begin + (int)w * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fairbench

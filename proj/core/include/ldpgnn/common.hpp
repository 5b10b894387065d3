// Copyright 2026, The ldpgnn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPGNN_COMMON_HPP_
#define LDPGNN_COMMON_HPP_

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ldpgnn {

// Floor for every guarded log/division and the simplex clamp.
inline constexpr double kEpsFloor = 1e-8;

// Worker count: LDPGNN_THREADS when set and positive, else 1.  Parallel
// sections are row-partitioned, so results are identical for any count.
inline unsigned thread_count() {
  const char* env = std::getenv("LDPGNN_THREADS");
  if (env) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

// Runs fn(begin, end) over a partition of [0, n).  Each index is handled by
// exactly one worker, keeping per-row outputs bit-identical regardless of
// the worker count.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (threads <= 1 || n < 2 * threads) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace ldpgnn

#endif  // LDPGNN_COMMON_HPP_

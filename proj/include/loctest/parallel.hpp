// Copyright 2026 The loctest Authors
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

/**
 * @file
 * Deterministic fan-out over indexed, independent jobs. Each job's randomness
 * derives from its index alone, and results are consumed in index order, so
 * every reduction is identical for any worker count. Early stopping scans the
 * ordered prefix block by block; speculatively computed jobs past the stop
 * index are discarded.
 */

#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace loctest {

/// Runs job(0..count-1) with `workers` threads and returns results in index
/// order.
template <typename Result, typename Job>
std::vector<Result> run_indexed(std::size_t count, int workers, Job&& job) {
  std::vector<Result> results(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
      results[i] = job(i);
  };
  std::vector<std::thread> pool;
  const int spawn = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

/// Runs jobs in index order until `scan` (called once per result, in order)
/// returns true; returns the results up to and including the stopping index.
/// If scan never fires, all max_count results are returned.
template <typename Result, typename Job, typename Scan>
std::vector<Result> run_until(std::size_t max_count, int workers, Job&& job, Scan&& scan) {
  std::vector<Result> accepted;
  accepted.reserve(max_count);
  const std::size_t block = (workers <= 1) ? 1 : static_cast<std::size_t>(workers) * 8;
  std::size_t lo = 0;
  while (lo < max_count) {
    const std::size_t hi = std::min(max_count, lo + block);
    std::vector<Result> chunk =
        run_indexed<Result>(hi - lo, workers, [&](std::size_t i) { return job(lo + i); });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      accepted.push_back(std::move(chunk[i]));
      if (scan(accepted.back())) return accepted;
    }
    lo = hi;
  }
  return accepted;
}

}  // namespace loctest

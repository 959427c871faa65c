// Copyright 2026 The proxmf Authors
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
#ifndef PROXMF_PARALLEL_HPP
#define PROXMF_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace proxmf::detail {

inline int effective_threads(int requested, int64_t n) {
  if (requested < 1) requested = 1;
  return static_cast<int>(std::min<int64_t>(requested, std::max<int64_t>(n, 1)));
}

// Partitions [0, n) into one contiguous range per worker. Each index is owned
// by exactly one worker, so per-index outputs are identical for every thread
// count as long as `body` writes only to its own indices.
template <class Body>
void parallel_for_ranges(int64_t n, int threads, Body&& body) {
  threads = effective_threads(threads, n);
  if (threads == 1) {
    body(int64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads) - 1);
  const int64_t base = n / threads;
  const int64_t rem = n % threads;
  int64_t begin = 0;
  for (int t = 0; t < threads; ++t) {
    const int64_t len = base + (t < rem ? 1 : 0);
    const int64_t b = begin;
    const int64_t e = begin + len;
    begin = e;
    if (t + 1 == threads) {
      body(b, e);
    } else {
      pool.emplace_back([&body, b, e] { body(b, e); });
    }
  }
  for (auto& th : pool) th.join();
}

// Reduction over [0, n) whose result does not depend on the thread count: the
// chunk grid is fixed by `chunk` alone and partials are combined in ascending
// chunk order by a single thread.
template <class T, class MapChunk, class Combine>
T deterministic_reduce(int64_t n, int64_t chunk, int threads, T init, MapChunk&& map,
                       Combine&& combine) {
  if (n <= 0) return init;
  const int64_t num_chunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(static_cast<size_t>(num_chunks));
  parallel_for_ranges(num_chunks, threads, [&](int64_t cb, int64_t ce) {
    for (int64_t c = cb; c < ce; ++c) {
      const int64_t b = c * chunk;
      const int64_t e = std::min(n, b + chunk);
      partial[static_cast<size_t>(c)] = map(b, e);
    }
  });
  T acc = init;
  for (int64_t c = 0; c < num_chunks; ++c) acc = combine(acc, partial[static_cast<size_t>(c)]);
  return acc;
}

}  // namespace proxmf::detail

#endif  // PROXMF_PARALLEL_HPP

// include/hspitch/parallel.h

// Copyright 2026  HSPitch Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef HSPITCH_PARALLEL_H_
#define HSPITCH_PARALLEL_H_

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace hspitch {

inline int default_thread_count() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

// Runs fn(block_index, begin, end) over contiguous blocks of [0, n).
// Blocks must write disjoint outputs; results are independent of the
// thread count. Exceptions from workers are rethrown on the caller.
template <typename Fn>
void parallel_blocks(int n, int threads, Fn fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    if (n > 0) fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int b = 0; b < threads; ++b) {
    const int begin = b * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, b, begin, end] {
      try {
        fn(b, begin, end);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    });
  }
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hspitch

#endif  // HSPITCH_PARALLEL_H_

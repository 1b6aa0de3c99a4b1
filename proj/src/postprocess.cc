// src/postprocess.cc

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

#include "hspitch/postprocess.h"

#include <algorithm>
#include <stdexcept>

namespace hspitch {

std::vector<double> rectify(const std::vector<double> &scores,
                            const RectifyParams &params) {
  if (scores.empty())
    throw std::invalid_argument("rectify: empty score sequence");
  if (params.s < 1 || params.j < 0 || params.alpha < 0.0 ||
      params.alpha > 1.0)
    throw std::invalid_argument("rectify: bad parameters");

  std::vector<double> out = scores;
  const double threshold =
      *std::max_element(scores.begin(), scores.end()) / 2.0;
  const int n = static_cast<int>(out.size());

  int run = 0;  // consecutive frames above threshold
  int i = 0;
  while (i < n) {
    if (out[i] > threshold) {
      ++run;
      ++i;
      continue;
    }
    if (run < params.s) {
      // dip outside an established voiced run: pass through
      run = 0;
      ++i;
      continue;
    }
    // dip inside a voiced run: blend the window toward the history mean,
    // fixed at dip onset
    double avg = 0.0;
    for (int m = i - params.s; m < i; ++m) avg += out[m];
    avg /= params.s;

    const int window_end = std::min(i + params.j, n - 1);
    for (int m = i; m <= window_end; ++m)
      out[m] = params.alpha * out[m] + (1.0 - params.alpha) * avg;

    // restart the run from whatever trailing smoothed frames re-crossed
    run = 0;
    for (int m = window_end; m >= i && out[m] > threshold; --m) ++run;
    i = window_end + 1;
  }
  return out;
}

}  // namespace hspitch

// src/decode.cc

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

#include "hspitch/decode.h"

#include <algorithm>
#include <cmath>

namespace hspitch {

GeometricLagGrid make_geometric_grid(int l_min, int l_max,
                                     int upsample_factor) {
  if (l_min < 1 || l_max <= l_min)
    throw ConfigError("grid requires 0 < l_min < l_max");
  if (upsample_factor < 1) throw ConfigError("upsample factor must be >= 1");

  GeometricLagGrid grid;
  grid.upsample_factor = upsample_factor;
  const int n = upsample_factor * (l_max - l_min) + 1;
  grid.lags.resize(n);
  const double ratio = static_cast<double>(l_max) / l_min;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    grid.lags[i] = l_min * std::pow(ratio, t);
  }
  grid.lags.front() = l_min;  // pin endpoints against pow() rounding
  grid.lags.back() = l_max;
  return grid;
}

std::vector<double> geometric_upsample(const LikelihoodColumn &col,
                                       const GeometricLagGrid &grid) {
  const int lo = col.lag_offset;
  const int hi = col.lag_offset + static_cast<int>(col.values.size()) - 1;
  std::vector<double> out(grid.lags.size());
  for (size_t i = 0; i < grid.lags.size(); ++i) {
    const double lag = grid.lags[i];
    if (lag < lo || lag > hi)
      throw ConfigError("grid lag outside the column's lag range");
    int idx = static_cast<int>(std::floor(lag));
    if (idx >= hi) idx = hi - 1;  // top endpoint
    const double frac = lag - idx;
    const double a = col.values[idx - lo];
    const double b = col.values[idx + 1 - lo];
    out[i] = a + (b - a) * frac;
  }
  return out;
}

StatePath viterbi_decode(const std::vector<std::vector<double>> &lattice,
                         int max_step, ViterbiCostMode mode) {
  StatePath path;
  if (lattice.empty()) return path;
  const int n_frames = static_cast<int>(lattice.size());
  const int n_states = static_cast<int>(lattice[0].size());
  if (n_states == 0) return path;
  for (const auto &col : lattice)
    if (static_cast<int>(col.size()) != n_states)
      throw ConfigError("viterbi_decode: ragged lattice");
  if (max_step < 1) throw ConfigError("max_step must be >= 1");

  const bool sum_mode = (mode == ViterbiCostMode::sum_likelihood);
  std::vector<double> prev(n_states), cur(n_states);
  std::vector<std::vector<int>> backptr(
      n_frames, std::vector<int>(n_states, -1));

  for (int t = 0; t < n_states; ++t)
    prev[t] = sum_mode ? lattice[0][t] : 0.0;

  for (int i = 1; i < n_frames; ++i) {
    const std::vector<double> &col = lattice[i];
    const std::vector<double> &prev_col = lattice[i - 1];
    for (int t = 0; t < n_states; ++t) {
      const int lo = std::max(0, t - max_step);
      const int hi = std::min(n_states - 1, t + max_step);
      int best_src = lo;
      double best = prev[lo] - (sum_mode ? 0.0 : prev_col[lo]);
      for (int s = lo + 1; s <= hi; ++s) {
        const double cand = prev[s] - (sum_mode ? 0.0 : prev_col[s]);
        if (cand > best) {  // strict: ties keep the lower index
          best = cand;
          best_src = s;
        }
      }
      cur[t] = best + col[t];
      backptr[i][t] = best_src;
    }
    std::swap(prev, cur);
  }

  int best_state = 0;
  for (int t = 1; t < n_states; ++t)
    if (prev[t] > prev[best_state]) best_state = t;

  path.states.resize(n_frames);
  path.scores.resize(n_frames);
  int t = best_state;
  for (int i = n_frames - 1; i >= 0; --i) {
    path.states[i] = t;
    path.scores[i] = lattice[i][t];
    if (i > 0) t = backptr[i][t];
  }
  return path;
}

StatePath argmax_decode(const std::vector<std::vector<double>> &lattice) {
  StatePath path;
  path.states.reserve(lattice.size());
  path.scores.reserve(lattice.size());
  for (const auto &col : lattice) {
    int best = 0;
    for (int t = 1; t < static_cast<int>(col.size()); ++t)
      if (col[t] > col[best]) best = t;
    path.states.push_back(best);
    path.scores.push_back(col.empty() ? 0.0 : col[best]);
  }
  return path;
}

std::vector<double> path_to_f0(const StatePath &path,
                               const GeometricLagGrid &grid, int sample_rate) {
  std::vector<double> f0(path.states.size());
  for (size_t i = 0; i < path.states.size(); ++i) {
    const int s = path.states[i];
    if (s < 0 || s >= static_cast<int>(grid.lags.size()))
      throw ConfigError("path state outside the grid");
    f0[i] = sample_rate / grid.lags[s];
  }
  return f0;
}

}  // namespace hspitch

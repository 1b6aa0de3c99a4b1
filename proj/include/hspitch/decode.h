// include/hspitch/decode.h

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

#ifndef HSPITCH_DECODE_H_
#define HSPITCH_DECODE_H_

#include <vector>

#include "hspitch/config.h"
#include "hspitch/likelihood.h"

namespace hspitch {

/// Log-uniform lag grid l_t = l_min * (l_max/l_min)^t for t = 0, dt, .., 1
/// with dt = 1 / (U * (l_max - l_min)). Lag resolution is a constant
/// frequency ratio per step.
struct GeometricLagGrid {
  std::vector<double> lags;
  int upsample_factor = 1;
};

GeometricLagGrid make_geometric_grid(int l_min, int l_max, int upsample_factor);

// Linear interpolation of an integer-lag column at the grid lags; exact at
// integer grid points. Grid lags must lie within the column's range.
std::vector<double> geometric_upsample(const LikelihoodColumn &col,
                                       const GeometricLagGrid &grid);

/// A decoded pitch-state trajectory: one grid index per frame plus the
/// per-frame likelihood at the chosen state.
struct StatePath {
  std::vector<int> states;
  std::vector<double> scores;
};

// Dynamic-programming path search over a frames x states likelihood matrix.
// Transitions are limited to |state delta| <= max_step per frame. In
// sum_likelihood mode the path maximizes the summed state likelihoods; in
// transition_difference mode each transition contributes the likelihood
// difference between its endpoint states. Ties resolve toward the lower
// state index.
StatePath viterbi_decode(const std::vector<std::vector<double>> &lattice,
                         int max_step = 1,
                         ViterbiCostMode mode = ViterbiCostMode::sum_likelihood);

// Per-frame argmax, the no-Viterbi fallback. Ties resolve toward the lower
// state index.
StatePath argmax_decode(const std::vector<std::vector<double>> &lattice);

// f0[i] = sample_rate / grid.lags[path.states[i]].
std::vector<double> path_to_f0(const StatePath &path,
                               const GeometricLagGrid &grid, int sample_rate);

}  // namespace hspitch

#endif  // HSPITCH_DECODE_H_

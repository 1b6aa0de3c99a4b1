// include/hspitch/likelihood.h

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

#ifndef HSPITCH_LIKELIHOOD_H_
#define HSPITCH_LIKELIHOOD_H_

#include <vector>

#include "hspitch/config.h"
#include "hspitch/preprocess.h"

namespace hspitch {

enum class Stage { raw_namdf, sigmoid, harmonic, temporal };

const char *stage_name(Stage s);

/// Per-frame vector of pitch-state values over a contiguous integer lag
/// axis. values[j] belongs to lag lag_offset + j. Columns cover the full
/// [l_min, l_max] range up to the sigmoid stage and the truncated
/// [l_min, l_max/(H+1)] range from the harmonic stage on.
struct LikelihoodColumn {
  std::vector<double> values;
  int lag_offset = 0;
  Stage stage = Stage::raw_namdf;
};

struct LikelihoodLattice {
  std::vector<LikelihoodColumn> columns;
  int frame_stride = 1;
  int sample_rate = 0;

  int n_frames() const { return static_cast<int>(columns.size()); }
};

// Normalized average magnitude difference between two windowed,
// peak-normalized frames: sum |a - b| / (|a|^2 |b|^2)^(1/4).
// Degenerate energies fall back to `fallback` (the caller's running
// column maximum).
double namdf_pair(const std::vector<double> &a, const std::vector<double> &b,
                  double fallback);

// Difference-function column of one frame over lags [l_min, l_max]. The
// shifted counterpart of lag l is the frame starting l samples later,
// windowed and normalized identically.
LikelihoodColumn namdf(const std::vector<double> &signal,
                       const std::vector<double> &window,
                       const FrameView &frame, const LagRange &lags);

// Columns for a batch of frames. Shifted frames are cached so each start
// position is windowed once; blocks of frames may run on separate threads.
// lag_hi limits the computed lag range (use lags.truncated_max() when the
// harmonic stage is disabled); pass lags.l_max for the full range.
LikelihoodLattice compute_namdf_lattice(const AudioBuffer &filtered,
                                        const std::vector<FrameView> &frames,
                                        const std::vector<double> &window,
                                        const LagRange &lags, int lag_hi,
                                        int stride, int threads = 1);

// Logistic mapping centered between the column's 10th and 90th percentiles
// and scaled by their distance, then by k. Negative k maps strong
// periodicity (small difference values) to high likelihood. A constant
// column maps to 0.5 everywhere.
LikelihoodColumn sigmoid_transform(const LikelihoodColumn &col, double k);

struct HarmonicParams {
  std::vector<double> weights;  // one per harmonic h = 2 .. H+1
  RTolMode r_mode = RTolMode::proportional;
  double r = 0.01;
};

// Half-width of the search window around harmonic lag position `lag`.
int harmonic_tolerance(const HarmonicParams &params, int lag);

// Adds weighted harmonic evidence from lags h*l (h = 2..H+1, each the max
// over +-r neighbors) to every candidate l that keeps all harmonics in
// range; candidates beyond l_max/(H+1) are discarded.
LikelihoodColumn harmonic_summation(const LikelihoodColumn &col,
                                    const HarmonicParams &params,
                                    const LagRange &lags);

// Column-wise sum over the 2K+1 neighbors spaced `step` columns apart,
// clamping out-of-range neighbors to the nearest valid column. Output
// length equals input length.
LikelihoodLattice temporal_accumulation(const LikelihoodLattice &lattice,
                                        int k, int step);

// Percentile with linear interpolation between order statistics,
// p in [0, 100].
double percentile(std::vector<double> values, double p);

}  // namespace hspitch

#endif  // HSPITCH_LIKELIHOOD_H_

// include/hspitch/tracker.h

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

#ifndef HSPITCH_TRACKER_H_
#define HSPITCH_TRACKER_H_

#include <optional>

#include "hspitch/config.h"
#include "hspitch/decode.h"
#include "hspitch/likelihood.h"
#include "hspitch/postprocess.h"
#include "hspitch/voicing.h"

namespace hspitch {

/// Config values that depend on the sample rate, resolved for one run.
/// Zeros in TrackerConfig select the time-based defaults: 5 ms temporal
/// step, 10 ms rectification history, 5 ms smoothing span, half an octave
/// of lags for the voicing window.
struct ResolvedParams {
  int window_length = 0;   // samples
  int temporal_step = 1;   // columns
  int rectify_s = 1;       // frames
  int rectify_j = 0;       // frames
  int voicing_window = 1;  // lags
  int viterbi_max_step = 1;
};

ResolvedParams resolve_params(const TrackerConfig &cfg, int sample_rate,
                              int column_length);

struct TrackResult {
  PitchTrack track;
  LagRange lags;
  GeometricLagGrid grid;
  StatePath path;
  std::vector<double> rectified_scores;
  std::vector<double> voicing_factors;
};

// Runs the whole pipeline: low-pass and framing, difference-function
// likelihoods, harmonic summation, temporal accumulation, geometric
// upsampling, Viterbi (or per-frame argmax), rectification and voicing.
// A signal shorter than one frame plus the lag lookahead yields an empty
// track. When capture_stage is set, the matching intermediate lattice is
// copied to *captured.
TrackResult track_audio(const AudioBuffer &audio, const TrackerConfig &cfg,
                        int threads = 1,
                        std::optional<Stage> capture_stage = std::nullopt,
                        LikelihoodLattice *captured = nullptr);

}  // namespace hspitch

#endif  // HSPITCH_TRACKER_H_

// src/tracker.cc

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

#include "hspitch/tracker.h"

#include <algorithm>
#include <cmath>

#include "hspitch/parallel.h"
#include "hspitch/preprocess.h"

namespace hspitch {

namespace {

constexpr int kLowpassOrder = 4;

std::vector<double> default_harmonic_weights(int h_count) {
  std::vector<double> w(h_count);
  for (int h = 2; h <= h_count + 1; ++h) w[h - 2] = 1.0 / h;
  return w;
}

}  // namespace

ResolvedParams resolve_params(const TrackerConfig &cfg, int sample_rate,
                              int column_length) {
  const double frames_per_ms = sample_rate / 1000.0 / cfg.stride;
  ResolvedParams p;
  p.window_length =
      static_cast<int>(std::lround(cfg.window_dur * sample_rate));
  p.temporal_step =
      cfg.temporal_step > 0
          ? cfg.temporal_step
          : std::max(1, static_cast<int>(std::lround(5.0 * frames_per_ms)));
  p.rectify_s =
      cfg.rectify_s > 0
          ? cfg.rectify_s
          : std::max(1, static_cast<int>(std::lround(10.0 * frames_per_ms)));
  p.rectify_j =
      cfg.rectify_j > 0
          ? cfg.rectify_j
          : std::max(0, static_cast<int>(std::lround(5.0 * frames_per_ms)));
  // half an octave above the shortest lag: wide enough to cover a pitch
  // peak cluster, narrow enough to track the peak when harmonic evidence
  // thins out near voicing offsets
  const int l_min = static_cast<int>(std::floor(sample_rate / cfg.f_max));
  p.voicing_window = cfg.voicing_window > 0 ? cfg.voicing_window
                                            : l_min / 2 + 1;
  if (column_length > 0)
    p.voicing_window = std::min(p.voicing_window, column_length);
  // per-sample slew of one grid step, scaled to the frame spacing
  p.viterbi_max_step = std::max(1, cfg.stride);
  return p;
}

TrackResult track_audio(const AudioBuffer &audio, const TrackerConfig &cfg,
                        int threads, std::optional<Stage> capture_stage,
                        LikelihoodLattice *captured) {
  cfg.validate();
  validate_audio(audio);

  TrackResult result;
  result.lags = compute_lag_range(cfg.f_min, cfg.f_max, cfg.harmonics,
                                  audio.sample_rate);
  const LagRange &lags = result.lags;
  // without harmonic summation only the truncated range is ever read
  const int lag_hi = cfg.harmonic_summation ? lags.l_max : lags.truncated_max();

  const AudioBuffer filtered =
      lowpass_filter(audio, cfg.lowpass_cutoff, kLowpassOrder);
  const std::vector<FrameView> frames =
      frame_stream(filtered, cfg.window_dur, cfg.stride, lag_hi);
  if (frames.empty()) return result;
  const int n_frames = static_cast<int>(frames.size());

  const ResolvedParams params = resolve_params(
      cfg, audio.sample_rate, lags.truncated_max() - lags.l_min + 1);
  const std::vector<double> window = hanning_window(params.window_length);

  // stages 1-3: difference function, sigmoid, harmonic summation
  LikelihoodLattice lattice =
      compute_namdf_lattice(filtered, frames, window, lags, lag_hi,
                            cfg.stride, threads);
  if (capture_stage == Stage::raw_namdf && captured) *captured = lattice;

  HarmonicParams harmonic;
  harmonic.weights = cfg.harmonic_weights.empty()
                         ? default_harmonic_weights(cfg.harmonics)
                         : cfg.harmonic_weights;
  harmonic.r_mode = cfg.r_mode;
  harmonic.r = cfg.r;

  const bool want_sigmoid = capture_stage == Stage::sigmoid && captured;
  if (want_sigmoid) {
    captured->columns.resize(n_frames);
    captured->frame_stride = cfg.stride;
    captured->sample_rate = audio.sample_rate;
  }
  parallel_blocks(n_frames, threads, [&](int, int begin, int end) {
    for (int i = begin; i < end; ++i) {
      LikelihoodColumn col =
          sigmoid_transform(lattice.columns[i], cfg.sigmoid_k);
      if (want_sigmoid) captured->columns[i] = col;
      if (cfg.harmonic_summation)
        col = harmonic_summation(col, harmonic, lags);
      lattice.columns[i] = std::move(col);
    }
  });
  if (capture_stage == Stage::harmonic && captured) *captured = lattice;

  // stage 4: temporal accumulation
  if (cfg.temporal_accumulation)
    lattice = temporal_accumulation(lattice, cfg.temporal_k,
                                    params.temporal_step);
  if (capture_stage == Stage::temporal && captured) *captured = lattice;

  // voicing features come from the accumulated (pre-upsampling) columns
  VoicingFeatures features;
  features.energy.resize(n_frames);
  features.omega.resize(n_frames);
  const int w_omega = std::min(
      params.voicing_window, static_cast<int>(lattice.columns[0].values.size()));
  for (int i = 0; i < n_frames; ++i) {
    double e = 0.0;
    for (int t = 0; t < frames[i].length; ++t) {
      const double v = window[t] * filtered.samples[frames[i].start + t];
      e += v * v;
    }
    features.energy[i] = std::log(std::max(e, 1e-12));
    features.omega[i] = omega_feature(lattice.columns[i], w_omega);
  }

  // geometric upsampling and path search
  result.grid = make_geometric_grid(lags.l_min, lags.truncated_max(),
                                    cfg.upsample_factor);
  std::vector<std::vector<double>> upsampled(n_frames);
  parallel_blocks(n_frames, threads, [&](int, int begin, int end) {
    for (int i = begin; i < end; ++i)
      upsampled[i] = geometric_upsample(lattice.columns[i], result.grid);
  });

  result.path = cfg.viterbi
                    ? viterbi_decode(upsampled, params.viterbi_max_step,
                                     cfg.viterbi_cost_mode)
                    : argmax_decode(upsampled);

  // rectification, voicing, final probabilities
  result.rectified_scores =
      cfg.rectification
          ? rectify(result.path.scores,
                    {params.rectify_s, params.rectify_j, cfg.rectify_alpha})
          : result.path.scores;

  if (!cfg.voicing) {
    result.voicing_factors.assign(n_frames, 1.0);
  } else if (n_frames < 4) {
    result.voicing_factors = energy_fallback_factors(features.energy);
  } else {
    const std::vector<double> proj = pca_project(features);
    const BimodalGMM gmm = fit_bimodal_gmm(proj);
    result.voicing_factors.resize(n_frames);
    for (int i = 0; i < n_frames; ++i)
      result.voicing_factors[i] =
          voicing_factor(proj[i], gmm, cfg.voicing_factor_mode);
  }

  // frames with no signal are unvoiced by definition; zeroing them after
  // rectification also keeps an all-silent utterance at probability zero
  for (int i = 0; i < n_frames; ++i)
    if (frames[i].zero_energy) result.rectified_scores[i] = 0.0;

  std::vector<double> f0 =
      path_to_f0(result.path, result.grid, audio.sample_rate);
  std::vector<double> times(n_frames);
  for (int i = 0; i < n_frames; ++i)
    times[i] = (frames[i].start + 0.5 * frames[i].length) /
               static_cast<double>(audio.sample_rate);

  result.track =
      finalize_track(result.rectified_scores, result.voicing_factors, f0,
                     times, cfg.voicing_threshold);
  return result;
}

}  // namespace hspitch

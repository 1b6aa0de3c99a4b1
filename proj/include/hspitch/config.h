// include/hspitch/config.h

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

#ifndef HSPITCH_CONFIG_H_
#define HSPITCH_CONFIG_H_

#include <string>
#include <vector>

namespace hspitch {

enum class RTolMode { proportional, fixed };
enum class ViterbiCostMode { sum_likelihood, transition_difference };
enum class VoicingFactorMode { voiced_posterior, unvoiced_posterior };

/// Every hyperparameter of the tracking pipeline. Values of 0 for
/// temporal_step / rectify_s / rectify_j / voicing_window mean
/// "derive from the sample rate" (5 ms, 10 ms, 5 ms, one octave of lags).
struct TrackerConfig {
  // Search range and framing.
  double f_min = 50.0;        // Hz, lowest trackable pitch
  double f_max = 400.0;       // Hz, highest trackable pitch
  double window_dur = 0.040;  // s, analysis window length
  int stride = 1;             // samples between frames (1 = per-sample states)
  double lowpass_cutoff = 1500.0;  // Hz, preprocessing low-pass

  // Harmonic summation. Fixed tolerance windows by default: proportional
  // windows grow with lag and let wide maxima over noise favor long lags.
  int harmonics = 4;  // number of harmonic lags aggregated per candidate
  std::vector<double> harmonic_weights;  // empty = 1/h for harmonic h
  RTolMode r_mode = RTolMode::fixed;
  double r = 2.0;  // fixed: samples; proportional: fraction of the lag

  // Likelihood shaping. The sigmoid scale trades noise suppression against
  // saturation: much past -4 the depth difference between a period and
  // its double washes out and subharmonic locking creeps in.
  double sigmoid_k = -3.0;  // negative maps strong periodicity high
  int temporal_k = 2;       // columns accumulated each side
  int temporal_step = 0;    // column step between accumulated neighbors

  // Decoding.
  int upsample_factor = 2;  // U, geometric grid density
  ViterbiCostMode viterbi_cost_mode = ViterbiCostMode::sum_likelihood;

  // Rectification.
  int rectify_s = 0;          // run length / history frames
  int rectify_j = 0;          // future frames smoothed
  double rectify_alpha = 0.3; // blend weight toward the original value

  // Voicing.
  int voicing_window = 0;            // W, lags summed for the omega feature
  double voicing_threshold = 0.5;    // voiced when probability >= threshold
  VoicingFactorMode voicing_factor_mode = VoicingFactorMode::voiced_posterior;

  // Ablation switches.
  bool harmonic_summation = true;
  bool temporal_accumulation = true;
  bool viterbi = true;
  bool rectification = true;
  bool voicing = true;

  // Throws ConfigError when any field is out of range.
  void validate() const;
};

// Parses a flat key = value config file. Unknown keys are rejected.
TrackerConfig parse_config_file(const std::string &path);

// Applies one "key=value" override (CLI --set) on top of cfg.
void apply_config_override(TrackerConfig &cfg, const std::string &assignment);

// Full round-trippable dump, one key = value per line.
std::string serialize_config(const TrackerConfig &cfg);

void write_config_file(const TrackerConfig &cfg, const std::string &path);

}  // namespace hspitch

#endif  // HSPITCH_CONFIG_H_

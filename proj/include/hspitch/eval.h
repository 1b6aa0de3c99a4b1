// include/hspitch/eval.h

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

#ifndef HSPITCH_EVAL_H_
#define HSPITCH_EVAL_H_

#include <optional>
#include <string>
#include <vector>

#include "hspitch/audio.h"
#include "hspitch/config.h"
#include "hspitch/voicing.h"

namespace hspitch {

/// Reference pitch values on a uniform grid; f0 = 0 marks unvoiced frames.
struct ReferenceTrack {
  double interval = 0.010;  // s between entries
  std::vector<double> f0;   // Hz
};

// Accepts two-column "time f0" text (whitespace or comma separated, #
// comments) or a single f0-per-line column on the default 10 ms grid.
ReferenceTrack read_reference_file(const std::string &path);

void write_reference_file(const ReferenceTrack &ref, const std::string &path);

/// Metric values plus the frame counts behind them.
struct EvalReport {
  double gpe = 0.0;  // gross errors / reference-voiced frames (NaN if none)
  double vde = 0.0;  // voicing mismatches / all reference frames
  long n_voiced_ref = 0;
  long n_gross_errors = 0;
  long n_v_misclassified = 0;   // reference-unvoiced judged voiced
  long n_uv_misclassified = 0;  // reference-voiced judged unvoiced
  long n_total = 0;
};

// Fraction of reference-voiced frames whose estimate deviates from the
// reference by strictly more than 5%. The decoded f0 candidate counts even
// on frames the tracker classified unvoiced. Estimate frames are matched
// to the reference grid by nearest time.
EvalReport compute_gpe(const PitchTrack &est, const ReferenceTrack &ref);

// Fraction of all reference frames whose voiced/unvoiced label disagrees.
EvalReport compute_vde(const PitchTrack &est, const ReferenceTrack &ref);

// Both metrics over one aligned pass.
EvalReport evaluate_pair(const PitchTrack &est, const ReferenceTrack &ref);

struct MixOptions {
  bool active_power = true;  // measure power over speech-active samples
                             // (above -40 dB of the speech peak) rather
                             // than the whole signal
  bool loop_noise = true;    // tile short noise instead of failing
};

// Scales the noise so the speech-to-noise power ratio hits snr_db, then
// adds it. An infinite snr_db returns the speech unchanged.
AudioBuffer mix_noise_at_snr(const AudioBuffer &speech,
                             const AudioBuffer &noise, double snr_db,
                             const MixOptions &opts = {});

// Speech-to-noise power ratio in dB using the same active-sample rule as
// mix_noise_at_snr. Verification helper.
double measure_snr_db(const AudioBuffer &speech, const AudioBuffer &noise,
                      bool active_power = true);

// Full linear convolution (length N + M - 1). With renormalize, the result
// is scaled back to the dry signal's peak.
AudioBuffer convolve_rir(const AudioBuffer &speech, const AudioBuffer &rir,
                         bool renormalize = true);

// Deterministic synthetic impulse response: seeded white noise under an
// exponential envelope that decays 60 dB over t60.
AudioBuffer gen_test_rir(double t60, double length, int sample_rate,
                         unsigned seed);

// t60 via backward (Schroeder) integration of the squared response: time
// at which the decay curve crosses -60 dB, linearly interpolated.
double measure_t60_schroeder(const AudioBuffer &rir);

/// One degradation cell of the evaluation grid.
struct EvalRow {
  std::string utterance;
  std::string noise;   // "none", a generator name, or a file stem
  double snr_db = 0.0; // +inf for clean
  bool reverb = false;
  EvalReport report;
};

struct EvalJob {
  std::vector<std::string> speech_paths;
  std::vector<std::string> ref_paths;   // parallel to speech_paths
  std::vector<std::string> noises;      // "white"/"pink"/"brown" or WAV paths
  std::vector<double> snrs_db;          // empty = clean-only
  std::string rir_path;                 // empty = anechoic
  TrackerConfig config;
  unsigned seed = 1;
  int threads = 1;
  bool active_power = true;
  bool loop_noise = true;
  bool reverb_renormalize = true;
};

struct EvalResult {
  std::vector<EvalRow> rows;
  std::vector<std::string> skipped;  // utterances without usable references
};

// Runs the condition grid (cells in parallel, deterministic per seed).
EvalResult run_eval(const EvalJob &job);

// Plot-ready table: one row per condition plus per-SNR mean rows.
void write_eval_csv(const EvalResult &result, const std::string &path);
void write_eval_json(const EvalResult &result, const std::string &path);

}  // namespace hspitch

#endif  // HSPITCH_EVAL_H_

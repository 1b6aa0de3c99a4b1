// include/hspitch/synth.h

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

#ifndef HSPITCH_SYNTH_H_
#define HSPITCH_SYNTH_H_

#include <cstdint>
#include <string>

#include "hspitch/audio.h"
#include "hspitch/eval.h"

namespace hspitch {

// Deterministic standard-normal stream (Box-Muller over mt19937 draws, so
// values are identical across platforms).
class SeededNormal {
 public:
  explicit SeededNormal(unsigned seed) : state_(seed) {}
  double next();

 private:
  double uniform01();
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

AudioBuffer make_white_noise(size_t n, int sample_rate, unsigned seed);
AudioBuffer make_pink_noise(size_t n, int sample_rate, unsigned seed);
AudioBuffer make_brown_noise(size_t n, int sample_rate, unsigned seed);

// Builds a named noise ("white", "pink", "brown") of the given length.
AudioBuffer make_named_noise(const std::string &name, size_t n,
                             int sample_rate, unsigned seed);
bool is_noise_name(const std::string &name);

enum class SynthKind { pulse_train, sawtooth, chirp, tone_burst };

SynthKind parse_synth_kind(const std::string &name);

struct SynthSpec {
  SynthKind kind = SynthKind::pulse_train;
  double f0 = 120.0;       // Hz; chirp start frequency
  double f0_end = 0.0;     // Hz; chirp end frequency (0 = same as f0)
  double duration = 2.0;   // s of voiced material (plus silence paddings)
  int sample_rate = 16000;
  unsigned seed = 1;
  double jitter = 0.005;   // pulse_train period jitter, fraction of period
  double lead_silence = 0.0;  // s
  double tail_silence = 0.0;  // s
  double burst_period = 0.4;  // tone_burst on+off cycle, 50% duty
  double snr_db = 0.0;        // additive white noise level; inf = clean
  bool add_noise = false;
  double noise_floor_db = -60.0;  // room-tone floor relative to the signal
                                  // peak; <= -200 leaves digital silence
  int first_harmonic = 1;     // harmonic sums start here; > 1 makes a
                              // weak-fundamental voice (telephone-like)
  bool flat_harmonics = false;  // equal harmonic amplitudes instead of 1/h
};

struct SynthResult {
  AudioBuffer audio;
  ReferenceTrack reference;  // exact ground truth on the 10 ms grid
};

// Deterministic test signal plus its reference track. pulse_train excites a
// short damped resonance once per (jittered) period; sawtooth and chirp are
// band-limited harmonic sums; tone_burst alternates voiced bursts and
// silence with short amplitude ramps.
SynthResult synthesize(const SynthSpec &spec);

}  // namespace hspitch

#endif  // HSPITCH_SYNTH_H_

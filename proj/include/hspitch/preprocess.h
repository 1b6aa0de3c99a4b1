// include/hspitch/preprocess.h

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

#ifndef HSPITCH_PREPROCESS_H_
#define HSPITCH_PREPROCESS_H_

#include <cstddef>
#include <vector>

#include "hspitch/audio.h"

namespace hspitch {

/// Integer lag search range for the difference function. With H harmonics
/// the raw range extends to (H+1) pitch periods of the lowest frequency so
/// every candidate keeps H harmonic lags in range.
struct LagRange {
  int l_min = 0;  // floor(Fs / f_max)
  int l_max = 0;  // (H+1) * ceil(Fs / f_min)
  int harmonics = 0;

  // Longest lag that still has all H harmonic entries available.
  int truncated_max() const { return l_max / (harmonics + 1); }
};

LagRange compute_lag_range(double f_min, double f_max, int harmonics,
                           int sample_rate);

/// One analysis frame: a window onto the filtered signal. The Hanning taper
/// and the peak-normalization scale are applied on read.
struct FrameView {
  int start = 0;        // sample offset into the filtered signal
  int length = 0;       // round(window_dur * Fs)
  double norm_scale = 1.0;  // 1 / peak(|windowed|), 1 for silent frames
  bool zero_energy = false;
};

// Symmetric Hanning taper of the given length.
std::vector<double> hanning_window(int length);

// Peak of |window[t] * x[start + t]| and the derived normalization scale.
FrameView make_frame_view(const std::vector<double> &signal,
                          const std::vector<double> &window, int start);

// Materializes the windowed, peak-normalized samples of a frame.
std::vector<double> windowed_frame(const std::vector<double> &signal,
                                   const std::vector<double> &window,
                                   const FrameView &frame);

// Frames start at i * stride and are emitted while
// start + length + lookahead <= signal length. The lookahead reserves the
// samples the difference function reads past the frame (use l_max).
std::vector<FrameView> frame_stream(const AudioBuffer &audio,
                                    double window_dur, int stride,
                                    int lookahead);

// Zero-phase Butterworth low-pass: the cascade is applied forward and
// backward so frame timing is not shifted. cutoff must lie in
// (0, sample_rate / 2); order in [1, 12].
AudioBuffer lowpass_filter(const AudioBuffer &audio, double cutoff, int order);

// Squared magnitude response of the zero-phase filter at freq_hz, computed
// from the designed biquad coefficients. Test oracle for stopband checks.
double lowpass_power_response(double cutoff, int order, int sample_rate,
                              double freq_hz);

}  // namespace hspitch

#endif  // HSPITCH_PREPROCESS_H_

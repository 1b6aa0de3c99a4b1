// src/preprocess.cc

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

#include "hspitch/preprocess.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace hspitch {

namespace {

struct Biquad {
  double b0, b1, b2;  // numerator, a0 normalized to 1
  double a1, a2;
};

// Butterworth low-pass as a cascade of RBJ biquads (plus one first-order
// section for odd orders). Section Q values follow the Butterworth pole
// angles theta_k = (2k+1)*pi/(2n).
std::vector<Biquad> design_butterworth(double cutoff, int order,
                                       int sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff / sample_rate;
  const double cw = std::cos(w0);
  const double sw = std::sin(w0);

  std::vector<Biquad> sections;
  const int n_pairs = order / 2;
  for (int k = 0; k < n_pairs; ++k) {
    const double theta =
        std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order);
    const double q = 1.0 / (2.0 * std::cos(theta));
    const double alpha = sw / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    s.b0 = (1.0 - cw) / 2.0 / a0;
    s.b1 = (1.0 - cw) / a0;
    s.b2 = s.b0;
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    sections.push_back(s);
  }
  if (order % 2) {
    // first-order low-pass via bilinear transform
    const double wc = std::tan(w0 / 2.0);
    const double a0 = wc + 1.0;
    Biquad s;
    s.b0 = wc / a0;
    s.b1 = wc / a0;
    s.b2 = 0.0;
    s.a1 = (wc - 1.0) / a0;
    s.a2 = 0.0;
    sections.push_back(s);
  }
  return sections;
}

void filter_in_place(const std::vector<Biquad> &sections,
                     std::vector<double> &x) {
  for (const Biquad &s : sections) {
    // start each section at its steady state for the first sample, so
    // constant inputs pass with no startup transient
    const double u = x.empty() ? 0.0 : x.front();
    const double dc =
        (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double y0 = dc * u;
    double z2 = s.b2 * u - s.a2 * y0;
    double z1 = s.b1 * u - s.a1 * y0 + z2;
    for (double &v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

// Odd-symmetric edge extension, the usual filtfilt padding.
std::vector<double> pad_odd(const std::vector<double> &x, size_t pad) {
  const size_t n = x.size();
  std::vector<double> out(n + 2 * pad);
  for (size_t i = 0; i < pad; ++i)
    out[i] = 2.0 * x.front() - x[pad - i];
  std::copy(x.begin(), x.end(), out.begin() + pad);
  for (size_t i = 0; i < pad; ++i)
    out[n + pad + i] = 2.0 * x.back() - x[n - 2 - i];
  return out;
}

}  // namespace

LagRange compute_lag_range(double f_min, double f_max, int harmonics,
                           int sample_rate) {
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (!(f_min > 0.0) || !(f_max > f_min) || !(f_max < sample_rate / 2.0))
    throw ConfigError("require 0 < f_min < f_max < sample_rate/2");
  if (harmonics < 1) throw ConfigError("harmonics must be >= 1");

  LagRange r;
  r.l_min = static_cast<int>(std::floor(sample_rate / f_max));
  r.l_max = (harmonics + 1) *
            static_cast<int>(std::ceil(sample_rate / f_min));
  r.harmonics = harmonics;
  if (r.l_min < 1 || r.l_min >= r.l_max)
    throw ConfigError("degenerate lag range; check f_min/f_max");
  return r;
}

std::vector<double> hanning_window(int length) {
  std::vector<double> w(length);
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  for (int t = 0; t < length; ++t)
    w[t] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t / (length - 1)));
  return w;
}

FrameView make_frame_view(const std::vector<double> &signal,
                          const std::vector<double> &window, int start) {
  // Peaks below this are filter ringing or denormals, not signal; treating
  // them as silence keeps 1/peak from overflowing.
  constexpr double kPeakFloor = 1e-150;

  FrameView f;
  f.start = start;
  f.length = static_cast<int>(window.size());
  double peak = 0.0;
  for (int t = 0; t < f.length; ++t)
    peak = std::max(peak, std::abs(window[t] * signal[start + t]));
  if (peak > kPeakFloor) {
    f.norm_scale = 1.0 / peak;
  } else {
    f.norm_scale = 1.0;  // division-by-zero guard for silent frames
    f.zero_energy = true;
  }
  return f;
}

std::vector<double> windowed_frame(const std::vector<double> &signal,
                                   const std::vector<double> &window,
                                   const FrameView &frame) {
  std::vector<double> out(frame.length);
  for (int t = 0; t < frame.length; ++t)
    out[t] = window[t] * signal[frame.start + t] * frame.norm_scale;
  return out;
}

std::vector<FrameView> frame_stream(const AudioBuffer &audio,
                                    double window_dur, int stride,
                                    int lookahead) {
  if (stride < 1) throw ConfigError("stride must be >= 1");
  const int length = static_cast<int>(std::lround(window_dur * audio.sample_rate));
  if (length < 2) throw ConfigError("window shorter than 2 samples");
  if (lookahead < 0) throw ConfigError("lookahead must be >= 0");

  const std::vector<double> window = hanning_window(length);
  const long long n = static_cast<long long>(audio.samples.size());
  std::vector<FrameView> frames;
  for (long long start = 0; start + length + lookahead <= n; start += stride)
    frames.push_back(make_frame_view(audio.samples, window,
                                     static_cast<int>(start)));
  return frames;
}

AudioBuffer lowpass_filter(const AudioBuffer &audio, double cutoff, int order) {
  if (!(cutoff > 0.0) || !(cutoff < audio.sample_rate / 2.0))
    throw ConfigError("cutoff must lie in (0, sample_rate/2)");
  if (order < 1 || order > 12) throw ConfigError("order must be in [1, 12]");

  AudioBuffer out = audio;
  if (audio.samples.size() < 2) return out;

  const std::vector<Biquad> sections =
      design_butterworth(cutoff, order, audio.sample_rate);
  const size_t pad =
      std::min(audio.samples.size() - 1, static_cast<size_t>(3 * (order + 1)));

  std::vector<double> x = pad_odd(audio.samples, pad);
  filter_in_place(sections, x);
  std::reverse(x.begin(), x.end());
  filter_in_place(sections, x);
  std::reverse(x.begin(), x.end());

  std::copy(x.begin() + pad, x.begin() + pad + audio.samples.size(),
            out.samples.begin());
  return out;
}

double lowpass_power_response(double cutoff, int order, int sample_rate,
                              double freq_hz) {
  const std::vector<Biquad> sections =
      design_butterworth(cutoff, order, sample_rate);
  const std::complex<double> z =
      std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / sample_rate);
  std::complex<double> h{1.0, 0.0};
  for (const Biquad &s : sections) {
    h *= (s.b0 + s.b1 * z + s.b2 * z * z) /
         (1.0 + s.a1 * z + s.a2 * z * z);
  }
  const double mag2 = std::norm(h);
  return mag2 * mag2;  // forward-backward pass squares the magnitude
}

}  // namespace hspitch

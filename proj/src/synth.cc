// src/synth.cc

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

#include "hspitch/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hspitch {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void normalize_peak(std::vector<double> &x, double target) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) return;
  const double g = target / peak;
  for (double &v : x) v *= g;
}

}  // namespace

double SeededNormal::uniform01() {
  // xorshift64*, seeded once; avoids distribution differences across
  // standard libraries
  state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
  uint64_t x = state_;
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return (static_cast<double>(x >> 11) + 0.5) / 9007199254740992.0;  // 2^53
}

double SeededNormal::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  have_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

AudioBuffer make_white_noise(size_t n, int sample_rate, unsigned seed) {
  SeededNormal rng(seed);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (auto &s : out.samples) s = rng.next();
  normalize_peak(out.samples, 0.5);
  return out;
}

AudioBuffer make_pink_noise(size_t n, int sample_rate, unsigned seed) {
  // Kellet's three-pole approximation of a 1/f spectrum
  SeededNormal rng(seed);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (auto &s : out.samples) {
    const double w = rng.next();
    b0 = 0.99765 * b0 + w * 0.0990460;
    b1 = 0.96300 * b1 + w * 0.2965164;
    b2 = 0.57000 * b2 + w * 1.0526913;
    s = b0 + b1 + b2 + w * 0.1848;
  }
  normalize_peak(out.samples, 0.5);
  return out;
}

AudioBuffer make_brown_noise(size_t n, int sample_rate, unsigned seed) {
  SeededNormal rng(seed);
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  double acc = 0.0, mean = 0.0;
  for (auto &s : out.samples) {
    acc = 0.999 * acc + rng.next();  // leaky integrator keeps it bounded
    s = acc;
    mean += acc;
  }
  mean /= std::max<size_t>(n, 1);
  for (auto &s : out.samples) s -= mean;
  normalize_peak(out.samples, 0.5);
  return out;
}

AudioBuffer make_named_noise(const std::string &name, size_t n,
                             int sample_rate, unsigned seed) {
  if (name == "white") return make_white_noise(n, sample_rate, seed);
  if (name == "pink") return make_pink_noise(n, sample_rate, seed);
  if (name == "brown") return make_brown_noise(n, sample_rate, seed);
  throw ConfigError("unknown noise generator '" + name + "'");
}

bool is_noise_name(const std::string &name) {
  return name == "white" || name == "pink" || name == "brown";
}

SynthKind parse_synth_kind(const std::string &name) {
  if (name == "pulse_train") return SynthKind::pulse_train;
  if (name == "sawtooth") return SynthKind::sawtooth;
  if (name == "chirp") return SynthKind::chirp;
  if (name == "tone_burst") return SynthKind::tone_burst;
  throw ConfigError("unknown synth kind '" + name + "'");
}

SynthResult synthesize(const SynthSpec &spec) {
  if (spec.f0 <= 0.0 || spec.duration <= 0.0 || spec.sample_rate <= 0)
    throw ConfigError("synthesize: f0, duration, sample_rate must be positive");

  const int fs = spec.sample_rate;
  const int n_lead = static_cast<int>(std::lround(spec.lead_silence * fs));
  const int n_voiced = static_cast<int>(std::lround(spec.duration * fs));
  const int n_tail = static_cast<int>(std::lround(spec.tail_silence * fs));
  const int n = n_lead + n_voiced + n_tail;

  AudioBuffer audio;
  audio.sample_rate = fs;
  audio.samples.assign(n, 0.0);

  const double f0_end = spec.f0_end > 0.0 ? spec.f0_end : spec.f0;
  if (spec.first_harmonic < 1)
    throw ConfigError("synthesize: first_harmonic must be >= 1");

  // instantaneous f0 within the voiced span, used for signal and reference
  auto f0_at = [&](double t_voiced) {
    if (spec.kind != SynthKind::chirp) return spec.f0;
    const double u = std::clamp(t_voiced / spec.duration, 0.0, 1.0);
    return spec.f0 + (f0_end - spec.f0) * u;
  };
  auto harmonic_amp = [&](int h) {
    return spec.flat_harmonics ? 1.0 : 1.0 / h;
  };

  switch (spec.kind) {
    case SynthKind::pulse_train: {
      // damped 500 Hz resonance excited once per period; seeded period
      // jitter keeps multiple-period lags measurably less similar than
      // single-period lags, as in natural voicing
      const double tau = 0.003 * fs;
      const int klen = static_cast<int>(std::lround(5.0 * tau));
      std::vector<double> kernel(klen);
      for (int t = 0; t < klen; ++t)
        kernel[t] = std::exp(-t / tau) * std::sin(kTwoPi * 500.0 * t / fs);

      // pulses fade out past the nominal span instead of stopping dead,
      // so analysis windows around the last reference frames stay periodic
      const int fade = std::min(n_tail,
                                static_cast<int>(std::lround(0.060 * fs)));

      // vibrato and shimmer: a lag of two periods always mismatches more
      // than one period, which is what keeps the tracker off subharmonics
      const double vibrato_depth = 0.004;
      const double vibrato_hz = 5.0;
      const double shimmer = 0.10;

      SeededNormal rng(spec.seed);
      const double period = fs / spec.f0;
      double pos = 0.0;
      while (pos < n_voiced + fade) {
        const int onset = n_lead + static_cast<int>(std::lround(pos));
        double amp = 1.0 + shimmer * std::clamp(rng.next(), -2.0, 2.0);
        if (pos >= n_voiced)
          amp *= 1.0 - (pos - n_voiced) / std::max(1, fade);
        for (int t = 0; t < klen && onset + t < n; ++t)
          audio.samples[onset + t] += amp * kernel[t];
        const double g = std::clamp(rng.next(), -3.0, 3.0);
        const double vib =
            vibrato_depth * std::sin(kTwoPi * vibrato_hz * pos / fs);
        pos += period * (1.0 + spec.jitter * g + vib);
      }
      break;
    }
    case SynthKind::sawtooth: {
      const int n_harm = std::max(
          spec.first_harmonic,
          static_cast<int>(std::floor(0.45 * fs / spec.f0)));
      for (int i = 0; i < n_voiced; ++i) {
        const double t = static_cast<double>(i) / fs;
        double acc = 0.0;
        for (int h = spec.first_harmonic; h <= n_harm; ++h)
          acc += harmonic_amp(h) * std::sin(kTwoPi * h * spec.f0 * t);
        audio.samples[n_lead + i] = acc;
      }
      break;
    }
    case SynthKind::chirp: {
      const double f_hi = std::max(spec.f0, f0_end);
      const int n_harm = std::clamp(
          static_cast<int>(std::floor(0.45 * fs / f_hi)),
          spec.first_harmonic, spec.first_harmonic + 5);
      double phase = 0.0;
      for (int i = 0; i < n_voiced; ++i) {
        const double f = f0_at(static_cast<double>(i) / fs);
        phase += kTwoPi * f / fs;
        double acc = 0.0;
        for (int h = spec.first_harmonic; h <= n_harm; ++h)
          acc += harmonic_amp(h) * std::sin(h * phase);
        audio.samples[n_lead + i] = acc;
      }
      break;
    }
    case SynthKind::tone_burst: {
      const int cycle = std::max(2, static_cast<int>(std::lround(
                                        spec.burst_period * fs)));
      const int on_len = cycle / 2;
      const int ramp = std::min(on_len / 4, fs / 200);  // <= 5 ms ramps
      const int n_harm = std::clamp(
          static_cast<int>(std::floor(0.45 * fs / spec.f0)),
          spec.first_harmonic, spec.first_harmonic + 5);
      for (int i = 0; i < n_voiced; ++i) {
        const int ph = i % cycle;
        if (ph >= on_len) continue;
        double env = 1.0;
        if (ph < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * ph / ramp);
        else if (on_len - 1 - ph < ramp)
          env = 0.5 - 0.5 * std::cos(std::numbers::pi * (on_len - 1 - ph) / ramp);
        const double t = static_cast<double>(i) / fs;
        double acc = 0.0;
        for (int h = spec.first_harmonic; h <= n_harm; ++h)
          acc += harmonic_amp(h) * std::sin(kTwoPi * h * spec.f0 * t);
        audio.samples[n_lead + i] = env * acc;
      }
      break;
    }
  }

  normalize_peak(audio.samples, 0.5);

  // room-tone floor: recordings are never digitally silent, and the
  // tracker's percentile anchors behave badly on exact zeros
  if (spec.noise_floor_db > -200.0) {
    SeededNormal floor_rng(spec.seed + 0x51edu);
    const double sigma = 0.5 * std::pow(10.0, spec.noise_floor_db / 20.0);
    for (auto &s : audio.samples) s += sigma * floor_rng.next();
  }

  if (spec.add_noise && std::isfinite(spec.snr_db)) {
    const AudioBuffer noise =
        make_white_noise(audio.samples.size(), fs, spec.seed + 0x9e37u);
    audio = mix_noise_at_snr(audio, noise, spec.snr_db);
  }

  // exact reference on the 10 ms grid
  SynthResult result;
  result.audio = std::move(audio);
  result.reference.interval = 0.010;
  const int n_ref = static_cast<int>(
      std::floor(static_cast<double>(n) / fs / result.reference.interval)) + 1;
  result.reference.f0.resize(n_ref, 0.0);
  for (int k = 0; k < n_ref; ++k) {
    const double t = k * result.reference.interval;
    const double tv = t - spec.lead_silence;
    if (tv < 0.0 || tv >= spec.duration) continue;  // silence padding
    if (spec.kind == SynthKind::tone_burst) {
      const double cycle = std::max(2.0, std::round(spec.burst_period *
                                                    fs)) / fs;
      const double ph = std::fmod(tv, cycle);
      if (ph >= cycle / 2.0) continue;  // off half of the burst cycle
    }
    result.reference.f0[k] = f0_at(tv);
  }
  return result;
}

}  // namespace hspitch

// src/likelihood.cc

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

#include "hspitch/likelihood.h"

#include <algorithm>
#include <cmath>

#include "hspitch/parallel.h"

namespace hspitch {

namespace {

constexpr double kEnergyGuard = 1e-12;

// Windowed, peak-normalized frames keyed by start position. Slots cycle
// through position % capacity; the batch loop only ever needs positions
// within one l_max span at a time.
class PositionCache {
 public:
  PositionCache(const std::vector<double> &signal,
                const std::vector<double> &window, int capacity)
      : signal_(signal),
        window_(window),
        length_(static_cast<int>(window.size())),
        capacity_(capacity),
        data_(static_cast<size_t>(capacity) * length_),
        norm2_(capacity),
        pos_(capacity, -1) {}

  // Returns the row for the frame starting at `pos` plus its squared norm.
  const double *row(int pos, double *norm2) {
    const int slot = pos % capacity_;
    double *out = data_.data() + static_cast<size_t>(slot) * length_;
    if (pos_[slot] != pos) {
      const FrameView f = make_frame_view(signal_, window_, pos);
      double acc = 0.0;
      for (int t = 0; t < length_; ++t) {
        const double v = window_[t] * signal_[pos + t] * f.norm_scale;
        out[t] = v;
        acc += v * v;
      }
      norm2_[slot] = f.zero_energy ? 0.0 : acc;
      pos_[slot] = pos;
    }
    *norm2 = norm2_[slot];
    return out;
  }

 private:
  const std::vector<double> &signal_;
  const std::vector<double> &window_;
  int length_;
  int capacity_;
  std::vector<double> data_;
  std::vector<double> norm2_;
  std::vector<int> pos_;
};

double abs_difference_sum(const double *a, const double *b, int n) {
  double acc = 0.0;
  for (int t = 0; t < n; ++t) acc += std::abs(a[t] - b[t]);
  return acc;
}

}  // namespace

const char *stage_name(Stage s) {
  switch (s) {
    case Stage::raw_namdf: return "raw_namdf";
    case Stage::sigmoid: return "sigmoid";
    case Stage::harmonic: return "harmonic";
    case Stage::temporal: return "temporal";
  }
  return "?";
}

double namdf_pair(const std::vector<double> &a, const std::vector<double> &b,
                  double fallback) {
  double na = 0.0, nb = 0.0, num = 0.0;
  const size_t n = a.size();
  for (size_t t = 0; t < n; ++t) {
    na += a[t] * a[t];
    nb += b[t] * b[t];
    num += std::abs(a[t] - b[t]);
  }
  if (na < kEnergyGuard || nb < kEnergyGuard) return fallback;
  return num / std::pow(na * nb, 0.25);
}

LikelihoodColumn namdf(const std::vector<double> &signal,
                       const std::vector<double> &window,
                       const FrameView &frame, const LagRange &lags) {
  const long long need = static_cast<long long>(frame.start) + frame.length +
                         lags.l_max;
  if (need > static_cast<long long>(signal.size()))
    throw ConfigError("frame plus l_max lookahead exceeds the signal");

  LikelihoodColumn col;
  col.lag_offset = lags.l_min;
  col.stage = Stage::raw_namdf;
  col.values.reserve(lags.l_max - lags.l_min + 1);

  const std::vector<double> base = windowed_frame(signal, window, frame);
  double running_max = 0.0;
  for (int l = lags.l_min; l <= lags.l_max; ++l) {
    const FrameView shifted = make_frame_view(signal, window, frame.start + l);
    const std::vector<double> other = windowed_frame(signal, window, shifted);
    const double v = namdf_pair(base, other, running_max);
    running_max = std::max(running_max, v);
    col.values.push_back(v);
  }
  return col;
}

LikelihoodLattice compute_namdf_lattice(const AudioBuffer &filtered,
                                        const std::vector<FrameView> &frames,
                                        const std::vector<double> &window,
                                        const LagRange &lags, int lag_hi,
                                        int stride, int threads) {
  const int length = static_cast<int>(window.size());
  const int n_lags = lag_hi - lags.l_min + 1;
  if (n_lags < 1) throw ConfigError("empty lag range");

  LikelihoodLattice lattice;
  lattice.frame_stride = stride;
  lattice.sample_rate = filtered.sample_rate;
  lattice.columns.resize(frames.size());

  parallel_blocks(
      static_cast<int>(frames.size()), threads,
      [&](int, int begin, int end) {
        PositionCache cache(filtered.samples, window, lag_hi + 1);
        for (int i = begin; i < end; ++i) {
          const FrameView &frame = frames[i];
          LikelihoodColumn &col = lattice.columns[i];
          col.lag_offset = lags.l_min;
          col.stage = Stage::raw_namdf;
          col.values.resize(n_lags);

          double base_norm2 = 0.0;
          const double *base = cache.row(frame.start, &base_norm2);
          // the cache slot for `base` survives: all shifted positions map
          // to other slots within one capacity span
          double running_max = 0.0;
          for (int l = lags.l_min; l <= lag_hi; ++l) {
            double other_norm2 = 0.0;
            const double *other = cache.row(frame.start + l, &other_norm2);
            double v;
            if (base_norm2 < kEnergyGuard || other_norm2 < kEnergyGuard) {
              v = running_max;
            } else {
              v = abs_difference_sum(base, other, length) /
                  std::pow(base_norm2 * other_norm2, 0.25);
            }
            running_max = std::max(running_max, v);
            col.values[l - lags.l_min] = v;
          }
        }
      });
  return lattice;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ConfigError("percentile of empty vector");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * (values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(rank));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - lo;
  return values[lo] + (values[hi] - values[lo]) * frac;
}

LikelihoodColumn sigmoid_transform(const LikelihoodColumn &col, double k) {
  if (col.values.empty()) throw ConfigError("sigmoid_transform: empty column");
  const double p10 = percentile(col.values, 10.0);
  const double p90 = percentile(col.values, 90.0);
  const double center = 0.5 * (p90 + p10);
  const double scale = p90 - p10;

  LikelihoodColumn out;
  out.lag_offset = col.lag_offset;
  out.stage = Stage::sigmoid;
  out.values.resize(col.values.size());
  if (scale <= 0.0) {
    // constant column: no spread to anchor the sigmoid
    std::fill(out.values.begin(), out.values.end(), 0.5);
    return out;
  }
  for (size_t i = 0; i < col.values.size(); ++i) {
    const double arg = k * (col.values[i] - center) / scale;
    out.values[i] = 1.0 / (1.0 + std::exp(-arg));
  }
  return out;
}

int harmonic_tolerance(const HarmonicParams &params, int lag) {
  if (params.r_mode == RTolMode::fixed)
    return static_cast<int>(std::lround(params.r));
  return std::max(1, static_cast<int>(std::lround(params.r * lag)));
}

LikelihoodColumn harmonic_summation(const LikelihoodColumn &col,
                                    const HarmonicParams &params,
                                    const LagRange &lags) {
  const int h_count = lags.harmonics;
  if (static_cast<int>(params.weights.size()) != h_count)
    throw ConfigError("harmonic weights size must equal harmonic count");
  const int l_lo = col.lag_offset;
  const int l_hi = col.lag_offset + static_cast<int>(col.values.size()) - 1;
  if (l_lo > lags.l_min || l_hi < lags.l_max)
    throw ConfigError("column does not cover the full lag range");

  const int out_hi = lags.truncated_max();
  LikelihoodColumn out;
  out.lag_offset = lags.l_min;
  out.stage = Stage::harmonic;
  out.values.resize(out_hi - lags.l_min + 1);

  auto value_at = [&](int lag) { return col.values[lag - l_lo]; };

  for (int l = lags.l_min; l <= out_hi; ++l) {
    double acc = value_at(l);
    for (int h = 2; h <= h_count + 1; ++h) {
      const int center = h * l;
      const int r = harmonic_tolerance(params, center);
      const int lo = std::max(center - r, l_lo);
      const int hi = std::min(center + r, l_hi);
      double best = value_at(lo);
      for (int m = lo + 1; m <= hi; ++m) best = std::max(best, value_at(m));
      acc += params.weights[h - 2] * best;
    }
    out.values[l - lags.l_min] = acc;
  }
  return out;
}

LikelihoodLattice temporal_accumulation(const LikelihoodLattice &lattice,
                                        int k, int step) {
  if (k < 0) throw ConfigError("temporal K must be >= 0");
  if (step < 1) throw ConfigError("temporal step must be >= 1");
  const int n = lattice.n_frames();

  LikelihoodLattice out;
  out.frame_stride = lattice.frame_stride;
  out.sample_rate = lattice.sample_rate;
  out.columns.resize(n);

  for (int i = 0; i < n; ++i) {
    const LikelihoodColumn &center = lattice.columns[i];
    LikelihoodColumn &dst = out.columns[i];
    dst.lag_offset = center.lag_offset;
    dst.stage = Stage::temporal;
    dst.values.assign(center.values.size(), 0.0);
    for (int d = -k; d <= k; ++d) {
      const int j = std::clamp(i + d * step, 0, n - 1);
      const LikelihoodColumn &src = lattice.columns[j];
      for (size_t m = 0; m < dst.values.size(); ++m)
        dst.values[m] += src.values[m];
    }
  }
  return out;
}

}  // namespace hspitch

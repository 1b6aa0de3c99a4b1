// src/voicing.cc

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

#include "hspitch/voicing.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "hspitch/audio.h"

namespace hspitch {

namespace {

constexpr double kLogFloor = 1e-12;
constexpr double kVarFloor = 1e-6;

double mean_of(const std::vector<double> &v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return v.empty() ? 0.0 : acc / v.size();
}

double var_of(const std::vector<double> &v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return v.empty() ? 0.0 : acc / v.size();
}

double log_normal_density(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

}  // namespace

double omega_feature(const LikelihoodColumn &col, int window_w) {
  const int n = static_cast<int>(col.values.size());
  if (window_w < 1 || window_w > n)
    throw ConfigError("omega window must be in [1, column length]");

  double sum = 0.0;
  for (int i = 0; i < window_w; ++i) sum += col.values[i];
  double best = sum;
  for (int i = window_w; i < n; ++i) {
    sum += col.values[i] - col.values[i - window_w];
    best = std::max(best, sum);
  }
  return std::log(std::max(best, kLogFloor));
}

std::vector<double> pca_project(const VoicingFeatures &features) {
  const size_t n = features.energy.size();
  if (n != features.omega.size())
    throw ConfigError("pca_project: feature lengths differ");
  if (n < 2) throw ConfigError("pca_project: need at least 2 frames");

  const double me = mean_of(features.energy);
  const double mo = mean_of(features.omega);
  const double ve = var_of(features.energy, me);
  const double vo = var_of(features.omega, mo);
  const bool e_ok = ve > 1e-24;
  const bool o_ok = vo > 1e-24;

  std::vector<double> proj(n, 0.0);
  if (!e_ok && !o_ok) return proj;  // both degenerate

  const double se = e_ok ? std::sqrt(ve) : 1.0;
  const double so = o_ok ? std::sqrt(vo) : 1.0;

  if (!e_ok || !o_ok) {
    // one informative dimension left: project onto it
    for (size_t i = 0; i < n; ++i)
      proj[i] = e_ok ? (features.energy[i] - me) / se
                     : (features.omega[i] - mo) / so;
    return proj;
  }

  // covariance of the standardized features; diagonal is 1 by construction
  double c = 0.0;
  for (size_t i = 0; i < n; ++i)
    c += (features.energy[i] - me) / se * (features.omega[i] - mo) / so;
  c /= n;

  // leading eigenvector of [[1, c], [c, 1]] is (1, 1)/sqrt(2) for c >= 0
  // and (1, -1)/sqrt(2) otherwise; either way energy gets weight +1
  const double we = 1.0 / std::numbers::sqrt2;
  const double wo = (c >= 0.0 ? 1.0 : -1.0) / std::numbers::sqrt2;
  for (size_t i = 0; i < n; ++i)
    proj[i] = we * (features.energy[i] - me) / se +
              wo * (features.omega[i] - mo) / so;
  return proj;
}

BimodalGMM fit_bimodal_gmm(const std::vector<double> &x, int max_iters,
                           double tol) {
  const int n = static_cast<int>(x.size());
  if (n < 4) throw ConfigError("fit_bimodal_gmm: need at least 4 points");
  if (max_iters < 1 || tol < 0.0)
    throw ConfigError("fit_bimodal_gmm: bad iteration parameters");

  // variance floor relative to the data spread: a component collapsing
  // onto near-duplicate points must not reject everything a few steps away
  const double total_mean = mean_of(x);
  const double floor_var =
      std::max(kVarFloor, 0.01 * var_of(x, total_mean));

  // median split initialization
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  const int half = n / 2;
  std::vector<double> lo(sorted.begin(), sorted.begin() + half);
  std::vector<double> hi(sorted.begin() + half, sorted.end());

  double mean[2] = {mean_of(lo), mean_of(hi)};
  double var[2] = {std::max(var_of(lo, mean[0]), floor_var),
                   std::max(var_of(hi, mean[1]), floor_var)};
  double weight[2] = {0.5, 0.5};

  BimodalGMM gmm;
  std::vector<double> resp(n);  // responsibility of component 1
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iters; ++iter) {
    // E step
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      const double l0 = std::log(weight[0]) +
                        log_normal_density(x[i], mean[0], var[0]);
      const double l1 = std::log(weight[1]) +
                        log_normal_density(x[i], mean[1], var[1]);
      const double m = std::max(l0, l1);
      const double z = std::exp(l0 - m) + std::exp(l1 - m);
      ll += m + std::log(z);
      resp[i] = std::exp(l1 - m) / z;
    }
    gmm.log_likelihood_trace.push_back(ll);

    // M step
    double n1 = 0.0, s1 = 0.0, s0 = 0.0;
    for (int i = 0; i < n; ++i) {
      n1 += resp[i];
      s1 += resp[i] * x[i];
      s0 += (1.0 - resp[i]) * x[i];
    }
    const double n0 = n - n1;
    if (n0 > 1e-10) mean[0] = s0 / n0;
    if (n1 > 1e-10) mean[1] = s1 / n1;
    double v0 = 0.0, v1 = 0.0;
    for (int i = 0; i < n; ++i) {
      v0 += (1.0 - resp[i]) * (x[i] - mean[0]) * (x[i] - mean[0]);
      v1 += resp[i] * (x[i] - mean[1]) * (x[i] - mean[1]);
    }
    var[0] = std::max(n0 > 1e-10 ? v0 / n0 : floor_var, floor_var);
    var[1] = std::max(n1 > 1e-10 ? v1 / n1 : floor_var, floor_var);
    weight[0] = std::clamp(n0 / n, 1e-6, 1.0 - 1e-6);
    weight[1] = 1.0 - weight[0];

    if (ll - prev_ll < tol && iter > 0) break;
    prev_ll = ll;
  }

  // components[0] is the voiced (higher-mean) one
  const int v = mean[1] >= mean[0] ? 1 : 0;
  gmm.components[0] = {mean[v], var[v], weight[v]};
  gmm.components[1] = {mean[1 - v], var[1 - v], weight[1 - v]};
  gmm.degenerate =
      std::abs(mean[0] - mean[1]) < 1e-9 && var[0] <= kVarFloor * 1.001 &&
      var[1] <= kVarFloor * 1.001;
  return gmm;
}

double voicing_factor(double x, const BimodalGMM &gmm, VoicingFactorMode mode) {
  const auto &cv = gmm.components[0];
  const auto &cu = gmm.components[1];
  const double lv = std::log(cv.weight) + log_normal_density(x, cv.mean, cv.var);
  const double lu = std::log(cu.weight) + log_normal_density(x, cu.mean, cu.var);
  if (!std::isfinite(lv) && !std::isfinite(lu)) return 0.5;

  // voiced posterior 1 / (1 + exp(lu - lv)), computed in log space
  const double diff = mode == VoicingFactorMode::voiced_posterior ? lu - lv
                                                                  : lv - lu;
  if (diff > 500.0) return 0.0;
  if (diff < -500.0) return 1.0;
  return 1.0 / (1.0 + std::exp(diff));
}

std::vector<double> energy_fallback_factors(const std::vector<double> &energy) {
  const double m = mean_of(energy);
  const double sd = std::sqrt(var_of(energy, m));
  std::vector<double> out(energy.size());
  for (size_t i = 0; i < energy.size(); ++i)
    out[i] = 1.0 / (1.0 + std::exp(-(energy[i] - m) / (sd + 1e-12)));
  return out;
}

PitchTrack finalize_track(const std::vector<double> &rectified,
                          const std::vector<double> &factors,
                          const std::vector<double> &f0,
                          const std::vector<double> &times, double threshold) {
  const size_t n = rectified.size();
  if (factors.size() != n || f0.size() != n || times.size() != n)
    throw ConfigError("finalize_track: length mismatch");

  std::vector<double> v(n);
  double vmax = 0.0;
  for (size_t i = 0; i < n; ++i) {
    v[i] = rectified[i] * factors[i];
    vmax = std::max(vmax, v[i]);
  }

  PitchTrack track;
  track.frames.resize(n);
  for (size_t i = 0; i < n; ++i) {
    PitchTrack::Frame &fr = track.frames[i];
    fr.time = times[i];
    fr.f0 = f0[i];
    fr.voicing_prob = vmax > 0.0 ? std::max(v[i], 0.0) / vmax : 0.0;
    fr.voiced = fr.voicing_prob >= threshold;
  }
  return track;
}

void write_track_csv(const PitchTrack &track, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write track file: " + path);
  out << "time_s,f0_hz,voicing_prob,voiced\n";
  char buf[128];
  for (const auto &fr : track.frames) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.4f,%.6f,%d\n", fr.time, fr.f0,
                  fr.voicing_prob, fr.voiced ? 1 : 0);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_track_json(const PitchTrack &track, const std::string &path) {
  nlohmann::json j;
  j["frames"] = nlohmann::json::array();
  for (const auto &fr : track.frames) {
    j["frames"].push_back({{"time_s", fr.time},
                           {"f0_hz", fr.f0},
                           {"voicing_prob", fr.voicing_prob},
                           {"voiced", fr.voiced}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write track file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace hspitch

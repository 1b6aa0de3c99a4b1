// include/hspitch/voicing.h

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

#ifndef HSPITCH_VOICING_H_
#define HSPITCH_VOICING_H_

#include <vector>

#include "hspitch/config.h"
#include "hspitch/likelihood.h"

namespace hspitch {

/// Per-frame voicing evidence: log frame energy plus the log of the best
/// W-lag window sum over the frame's accumulated likelihood column.
struct VoicingFeatures {
  std::vector<double> energy;
  std::vector<double> omega;
};

// log of the maximum sum of window_w consecutive column values; floors the
// sum at 1e-12 before the log.
double omega_feature(const LikelihoodColumn &col, int window_w);

// First-principal-component projection of the standardized (energy, omega)
// pairs, sign-aligned so larger projections go with larger energy.
// Zero-variance dimensions are dropped; if both are degenerate all
// projections are zero.
std::vector<double> pca_project(const VoicingFeatures &features);

/// Two-component 1-D Gaussian mixture. components[0] is the voiced one
/// (higher mean on the energy-aligned projection axis).
struct BimodalGMM {
  struct Component {
    double mean = 0.0;
    double var = 1.0;
    double weight = 0.5;
  };
  Component components[2];
  std::vector<double> log_likelihood_trace;  // one entry per EM iteration
  bool degenerate = false;  // variance floor collapsed both components
};

// EM fit initialized by a median split. Component variances are floored
// at max(1e-6, var(x)/100) so a cluster of near-duplicate values cannot
// collapse into a spike that rejects everything else. Requires at least
// 4 points.
BimodalGMM fit_bimodal_gmm(const std::vector<double> &x, int max_iters = 100,
                           double tol = 1e-6);

// Posterior of the voiced component at x (or of the unvoiced component in
// unvoiced_posterior mode). 0.5 when both component densities vanish.
double voicing_factor(double x, const BimodalGMM &gmm,
                      VoicingFactorMode mode = VoicingFactorMode::voiced_posterior);

// Soft fallback used when too few frames exist to fit the mixture: a
// logistic on standardized log energy.
std::vector<double> energy_fallback_factors(const std::vector<double> &energy);

/// Final per-frame estimates.
struct PitchTrack {
  struct Frame {
    double time = 0.0;          // s, frame center
    double f0 = 0.0;            // Hz, decoded candidate (kept even when
                                // the frame is classified unvoiced)
    double voicing_prob = 0.0;  // [0, 1]
    bool voiced = false;
  };
  std::vector<Frame> frames;
};

// voicing_prob = rectified * factor, normalized by the utterance maximum
// (all zero when the maximum is zero); voiced when prob >= threshold.
PitchTrack finalize_track(const std::vector<double> &rectified,
                          const std::vector<double> &factors,
                          const std::vector<double> &f0,
                          const std::vector<double> &times, double threshold);

void write_track_csv(const PitchTrack &track, const std::string &path);
void write_track_json(const PitchTrack &track, const std::string &path);

}  // namespace hspitch

#endif  // HSPITCH_VOICING_H_

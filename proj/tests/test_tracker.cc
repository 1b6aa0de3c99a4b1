// tests/test_tracker.cc

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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "hspitch/eval.h"
#include "hspitch/synth.h"
#include "hspitch/tracker.h"

using namespace hspitch;

namespace {

TrackerConfig fast_config() {
  TrackerConfig cfg;
  cfg.stride = 80;  // 5 ms at 16 kHz keeps tests quick
  return cfg;
}

SynthResult make_pulse(double f0, double dur, unsigned seed,
                       double pad = 0.2) {
  SynthSpec spec;
  spec.kind = SynthKind::pulse_train;
  spec.f0 = f0;
  spec.duration = dur;
  spec.lead_silence = pad;
  spec.tail_silence = pad;
  spec.seed = seed;
  return synthesize(spec);
}

}  // namespace

TEST_CASE("clean pulse train tracks at its fundamental") {
  const SynthResult s = make_pulse(120.0, 1.2, 3);
  const TrackResult r = track_audio(s.audio, fast_config(), 1);
  REQUIRE(!r.track.frames.empty());

  // median f0 over the voiced span within 1%
  std::vector<double> voiced_f0;
  for (const auto &fr : r.track.frames)
    if (fr.time > 0.35 && fr.time < 1.25) voiced_f0.push_back(fr.f0);
  REQUIRE(voiced_f0.size() > 50u);
  std::sort(voiced_f0.begin(), voiced_f0.end());
  const double median = voiced_f0[voiced_f0.size() / 2];
  CHECK(median == doctest::Approx(120.0).epsilon(0.01));

  const EvalReport rep = evaluate_pair(r.track, s.reference);
  CHECK(rep.gpe == 0.0);
  CHECK(rep.vde <= 0.05);
}

TEST_CASE("decoded frequencies stay inside the search range") {
  const SynthResult s = make_pulse(200.0, 1.0, 5);
  const TrackerConfig cfg = fast_config();
  const TrackResult r = track_audio(s.audio, cfg, 1);
  for (const auto &fr : r.track.frames) {
    CHECK(fr.f0 >= cfg.f_min * 0.999);
    CHECK(fr.f0 <= cfg.f_max * 1.001);
    CHECK(fr.voicing_prob >= 0.0);
    CHECK(fr.voicing_prob <= 1.0);
  }
}

TEST_CASE("viterbi path respects the widened adjacency constraint") {
  const SynthResult s = make_pulse(150.0, 0.8, 6);
  const TrackerConfig cfg = fast_config();
  const TrackResult r = track_audio(s.audio, cfg, 1);
  const ResolvedParams p = resolve_params(cfg, 16000, 281);
  for (size_t i = 1; i < r.path.states.size(); ++i)
    CHECK(std::abs(r.path.states[i] - r.path.states[i - 1]) <=
          p.viterbi_max_step);
}

TEST_CASE("digital silence is entirely unvoiced") {
  AudioBuffer silent;
  silent.sample_rate = 16000;
  silent.samples.assign(16000, 0.0);
  const TrackResult r = track_audio(silent, fast_config(), 1);
  REQUIRE(!r.track.frames.empty());
  for (const auto &fr : r.track.frames) {
    CHECK(!fr.voiced);
    CHECK(fr.voicing_prob == 0.0);
  }
}

TEST_CASE("too-short input yields an empty track") {
  AudioBuffer tiny;
  tiny.sample_rate = 16000;
  tiny.samples.assign(300, 0.1);
  const TrackResult r = track_audio(tiny, fast_config(), 1);
  CHECK(r.track.frames.empty());
}

TEST_CASE("tracking is deterministic") {
  const SynthResult s = make_pulse(120.0, 0.8, 11);
  const TrackResult a = track_audio(s.audio, fast_config(), 1);
  const TrackResult b = track_audio(s.audio, fast_config(), 1);
  REQUIRE(a.track.frames.size() == b.track.frames.size());
  for (size_t i = 0; i < a.track.frames.size(); ++i) {
    CHECK(a.track.frames[i].f0 == b.track.frames[i].f0);
    CHECK(a.track.frames[i].voicing_prob == b.track.frames[i].voicing_prob);
  }
}

TEST_CASE("thread count does not change results") {
  const SynthResult s = make_pulse(150.0, 0.6, 13);
  const TrackResult a = track_audio(s.audio, fast_config(), 1);
  const TrackResult b = track_audio(s.audio, fast_config(), 4);
  REQUIRE(a.track.frames.size() == b.track.frames.size());
  for (size_t i = 0; i < a.track.frames.size(); ++i) {
    CHECK(a.track.frames[i].f0 == b.track.frames[i].f0);
    CHECK(a.track.frames[i].voicing_prob == b.track.frames[i].voicing_prob);
  }
}

TEST_CASE("alternating bursts classify voicing accurately") {
  SynthSpec spec;
  spec.kind = SynthKind::tone_burst;
  spec.f0 = 150.0;
  spec.duration = 1.6;
  spec.burst_period = 0.4;
  spec.seed = 21;
  spec.add_noise = true;
  spec.snr_db = 30.0;
  const SynthResult s = synthesize(spec);

  const TrackResult r = track_audio(s.audio, fast_config(), 1);
  // frame-level voicing accuracy on the reference grid
  long total = 0, correct = 0;
  for (size_t k = 0; k < s.reference.f0.size(); ++k) {
    const double t = k * s.reference.interval;
    // skip the 20 ms around each boundary: half a window of ambiguity
    const double ph = std::fmod(t, 0.4);
    if (std::min(ph, 0.4 - ph) < 0.02 || std::abs(ph - 0.2) < 0.02) continue;
    int best = -1;
    double best_dt = 1e9;
    for (size_t i = 0; i < r.track.frames.size(); ++i) {
      const double dt = std::abs(r.track.frames[i].time - t);
      if (dt < best_dt) {
        best_dt = dt;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) continue;
    ++total;
    if (r.track.frames[best].voiced == (s.reference.f0[k] > 0)) ++correct;
  }
  REQUIRE(total > 80);
  CHECK(static_cast<double>(correct) / total >= 0.95);
}

TEST_CASE("every ablation flag changes the output on a noisy signal") {
  // bursts guarantee score dips, so rectification has something to smooth
  SynthSpec spec;
  spec.kind = SynthKind::tone_burst;
  spec.f0 = 120.0;
  spec.duration = 1.2;
  spec.burst_period = 0.4;
  spec.seed = 17;
  spec.add_noise = true;
  spec.snr_db = 5.0;
  const SynthResult s = synthesize(spec);

  TrackerConfig base = fast_config();
  base.stride = 160;
  const TrackResult full = track_audio(s.audio, base, 1);

  auto outputs_differ = [&](const TrackerConfig &cfg) {
    const TrackResult alt = track_audio(s.audio, cfg, 1);
    if (alt.track.frames.size() != full.track.frames.size()) return true;
    for (size_t i = 0; i < alt.track.frames.size(); ++i) {
      if (alt.track.frames[i].f0 != full.track.frames[i].f0) return true;
      if (alt.track.frames[i].voicing_prob !=
          full.track.frames[i].voicing_prob)
        return true;
    }
    return false;
  };

  TrackerConfig cfg = base;
  cfg.harmonic_summation = false;
  CHECK(outputs_differ(cfg));

  cfg = base;
  cfg.temporal_accumulation = false;
  CHECK(outputs_differ(cfg));

  cfg = base;
  cfg.viterbi = false;
  CHECK(outputs_differ(cfg));

  cfg = base;
  cfg.voicing = false;
  CHECK(outputs_differ(cfg));

  SUBCASE("rectification changes output where the pitch jumps") {
    // splicing two pitches forces the decoded path through a likelihood
    // valley; at a tight stride the slew constraint makes that a real dip
    auto seg = [](double f0, unsigned seed) {
      SynthSpec sp;
      sp.kind = SynthKind::pulse_train;
      sp.f0 = f0;
      sp.duration = 0.4;
      sp.seed = seed;
      return synthesize(sp).audio;
    };
    AudioBuffer a = seg(120.0, 17), b = seg(210.0, 18), c = seg(120.0, 19);
    AudioBuffer spliced;
    spliced.sample_rate = 16000;
    for (AudioBuffer *p : {&a, &b, &c})
      spliced.samples.insert(spliced.samples.end(), p->samples.begin(),
                             p->samples.end());

    TrackerConfig tight = base;
    tight.stride = 32;
    const TrackResult with_rect = track_audio(spliced, tight, 1);
    tight.rectification = false;
    const TrackResult without = track_audio(spliced, tight, 1);
    REQUIRE(with_rect.rectified_scores.size() == without.rectified_scores.size());
    int changed = 0;
    for (size_t i = 0; i < with_rect.rectified_scores.size(); ++i)
      if (with_rect.rectified_scores[i] != without.rectified_scores[i])
        ++changed;
    CHECK(changed > 0);
  }
}

TEST_CASE("stage capture returns consistent lattices") {
  const SynthResult s = make_pulse(120.0, 0.5, 23, 0.0);
  TrackerConfig cfg = fast_config();
  cfg.stride = 160;

  LikelihoodLattice raw, sigmoid, harmonic, temporal;
  track_audio(s.audio, cfg, 1, Stage::raw_namdf, &raw);
  track_audio(s.audio, cfg, 1, Stage::sigmoid, &sigmoid);
  track_audio(s.audio, cfg, 1, Stage::harmonic, &harmonic);
  track_audio(s.audio, cfg, 1, Stage::temporal, &temporal);

  REQUIRE(!raw.columns.empty());
  CHECK(raw.columns.size() == harmonic.columns.size());
  CHECK(raw.columns[0].stage == Stage::raw_namdf);
  CHECK(sigmoid.columns[0].stage == Stage::sigmoid);
  CHECK(harmonic.columns[0].stage == Stage::harmonic);
  CHECK(temporal.columns[0].stage == Stage::temporal);
  // full range before summation, truncated after
  CHECK(raw.columns[0].values.size() == 1561u);
  CHECK(sigmoid.columns[0].values.size() == 1561u);
  CHECK(harmonic.columns[0].values.size() == 281u);
  CHECK(temporal.columns[0].values.size() == 281u);
  for (double v : sigmoid.columns[0].values) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("resolved parameters follow the stride") {
  TrackerConfig cfg;
  cfg.stride = 80;  // 5 ms at 16 kHz
  const ResolvedParams p = resolve_params(cfg, 16000, 281);
  CHECK(p.window_length == 640);
  CHECK(p.temporal_step == 1);   // 5 ms
  CHECK(p.rectify_s == 2);       // 10 ms
  CHECK(p.rectify_j == 1);       // 5 ms
  CHECK(p.voicing_window == 21); // half an octave above l_min = 40
  CHECK(p.viterbi_max_step == 80);

  cfg.temporal_step = 7;
  cfg.rectify_s = 33;
  cfg.voicing_window = 10;
  const ResolvedParams q = resolve_params(cfg, 16000, 281);
  CHECK(q.temporal_step == 7);
  CHECK(q.rectify_s == 33);
  CHECK(q.voicing_window == 10);
}

TEST_CASE("run_eval produces deterministic byte-identical outputs") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hspitch_eval_det";
  fs::create_directories(dir);

  const SynthResult s1 = make_pulse(120.0, 0.8, 31);
  write_wav(s1.audio, (dir / "a.wav").string());
  write_reference_file(s1.reference, (dir / "a.ref.txt").string());

  EvalJob job;
  job.speech_paths = {(dir / "a.wav").string()};
  job.ref_paths = {(dir / "a.ref.txt").string()};
  job.noises = {"white"};
  job.snrs_db = {10.0};
  job.seed = 5;
  job.config = fast_config();

  auto run_to_string = [&](const std::string &tag) {
    const EvalResult res = run_eval(job);
    const fs::path csv = dir / (tag + ".csv");
    write_eval_csv(res, csv.string());
    std::ifstream in(csv, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), {});
  };
  const std::string first = run_to_string("r1");
  const std::string second = run_to_string("r2");
  CHECK(first == second);
  CHECK(first.find("a,white,10.00") != std::string::npos);
  fs::remove_all(dir);
}

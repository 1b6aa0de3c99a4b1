// tools/hspitch_main.cc

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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hspitch/audio.h"
#include "hspitch/config.h"
#include "hspitch/eval.h"
#include "hspitch/parallel.h"
#include "hspitch/synth.h"
#include "hspitch/tracker.h"

namespace fs = std::filesystem;
using namespace hspitch;

namespace {

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  int stride = 0;  // 0 = leave the config value alone
};

void add_config_options(CLI::App *cmd, ConfigArgs *args) {
  cmd->add_option("--config", args->config_path, "tracker config file");
  cmd->add_option("--set", args->overrides,
                  "override a config key, e.g. --set stride=80");
  cmd->add_option("--stride", args->stride,
                  "frame stride in samples (shortcut for --set stride=N)");
}

TrackerConfig build_config(const ConfigArgs &args) {
  TrackerConfig cfg;
  if (!args.config_path.empty()) cfg = parse_config_file(args.config_path);
  if (args.stride > 0)
    apply_config_override(cfg, "stride=" + std::to_string(args.stride));
  for (const std::string &kv : args.overrides)
    apply_config_override(cfg, kv);
  cfg.validate();
  return cfg;
}

int cmd_track(const std::string &input, const std::string &output,
              const std::string &format, const ConfigArgs &cargs,
              int threads) {
  const TrackerConfig cfg = build_config(cargs);
  const AudioBuffer audio = read_wav(input);
  const TrackResult result = track_audio(audio, cfg, threads);
  if (format == "json")
    write_track_json(result.track, output);
  else
    write_track_csv(result.track, output);
  std::cerr << "tracked " << result.track.frames.size() << " frames -> "
            << output << "\n";
  return 0;
}

int cmd_synth(const std::string &kind, double f0, double f0_end,
              double duration, double snr_db, bool have_snr, unsigned seed,
              int sample_rate, double jitter, double lead, double tail,
              double burst_period, double noise_floor, int first_harmonic,
              bool flat_harmonics, const std::string &output) {
  SynthSpec spec;
  spec.kind = parse_synth_kind(kind);
  spec.f0 = f0;
  spec.f0_end = f0_end;
  spec.duration = duration;
  spec.sample_rate = sample_rate;
  spec.seed = seed;
  spec.jitter = jitter;
  spec.lead_silence = lead;
  spec.tail_silence = tail;
  spec.burst_period = burst_period;
  spec.noise_floor_db = noise_floor;
  spec.first_harmonic = first_harmonic;
  spec.flat_harmonics = flat_harmonics;
  spec.add_noise = have_snr && std::isfinite(snr_db);
  spec.snr_db = snr_db;

  const SynthResult result = synthesize(spec);
  write_wav(result.audio, output + ".wav");
  write_reference_file(result.reference, output + ".ref.txt");
  std::cerr << "wrote " << output << ".wav and " << output << ".ref.txt\n";
  return 0;
}

std::string find_reference(const fs::path &ref_dir, const std::string &stem) {
  const char *exts[] = {".ref.txt", ".txt", ".csv", ".f0"};
  for (const char *ext : exts) {
    fs::path cand = ref_dir / (stem + ext);
    if (fs::exists(cand)) return cand.string();
  }
  return (ref_dir / (stem + ".ref.txt")).string();  // recorded as skipped
}

int cmd_eval(const std::string &speech_dir, const std::string &ref_dir,
             std::vector<std::string> noises, std::vector<double> snrs,
             const std::string &rir, unsigned seed, const std::string &output,
             const ConfigArgs &cargs, int threads,
             const std::string &snr_power, bool no_loop_noise,
             bool no_reverb_renorm) {
  EvalJob job;
  job.config = build_config(cargs);
  job.seed = seed;
  job.threads = threads;
  job.rir_path = rir;
  job.noises = std::move(noises);
  job.snrs_db = std::move(snrs);
  job.active_power = snr_power != "global";
  job.loop_noise = !no_loop_noise;
  job.reverb_renormalize = !no_reverb_renorm;

  if (!fs::is_directory(speech_dir))
    throw IoError("speech dir not found: " + speech_dir);
  if (!fs::is_directory(ref_dir))
    throw IoError("reference dir not found: " + ref_dir);

  std::vector<fs::path> wavs;
  for (const auto &entry : fs::directory_iterator(speech_dir))
    if (entry.path().extension() == ".wav") wavs.push_back(entry.path());
  std::sort(wavs.begin(), wavs.end());
  if (wavs.empty()) throw IoError("no .wav files in " + speech_dir);

  for (const fs::path &w : wavs) {
    std::string stem = w.filename().string();
    stem = stem.substr(0, stem.find('.'));
    job.speech_paths.push_back(w.string());
    job.ref_paths.push_back(find_reference(ref_dir, stem));
  }

  const EvalResult result = run_eval(job);
  for (const std::string &s : result.skipped)
    std::cerr << "warning: skipped " << s << "\n";
  write_eval_csv(result, output + ".csv");
  write_eval_json(result, output + ".json");
  std::cerr << "evaluated " << result.rows.size() << " conditions -> "
            << output << ".csv\n";
  return 0;
}

int cmd_dump_lattice(const std::string &input, const std::string &stage_name_s,
                     const std::string &output, const std::string &format,
                     const ConfigArgs &cargs, int threads) {
  Stage stage;
  if (stage_name_s == "raw") stage = Stage::raw_namdf;
  else if (stage_name_s == "sigmoid") stage = Stage::sigmoid;
  else if (stage_name_s == "harmonic") stage = Stage::harmonic;
  else if (stage_name_s == "temporal") stage = Stage::temporal;
  else throw ConfigError("stage must be raw, sigmoid, harmonic or temporal");

  const TrackerConfig cfg = build_config(cargs);
  const AudioBuffer audio = read_wav(input);
  LikelihoodLattice lattice;
  track_audio(audio, cfg, threads, stage, &lattice);
  if (lattice.columns.empty())
    throw ProcessingError("signal too short, no frames produced");

  const uint32_t n_frames = static_cast<uint32_t>(lattice.columns.size());
  const uint32_t n_lags =
      static_cast<uint32_t>(lattice.columns[0].values.size());

  if (format == "bin") {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw IoError("cannot write " + output);
    const uint32_t header[6] = {
        0x4c505348u,  // "HSPL"
        static_cast<uint32_t>(lattice.sample_rate),
        static_cast<uint32_t>(lattice.frame_stride),
        static_cast<uint32_t>(lattice.columns[0].lag_offset),
        static_cast<uint32_t>(stage),
        n_frames};
    out.write(reinterpret_cast<const char *>(header), sizeof(header));
    out.write(reinterpret_cast<const char *>(&n_lags), sizeof(n_lags));
    for (const auto &col : lattice.columns)
      out.write(reinterpret_cast<const char *>(col.values.data()),
                static_cast<std::streamsize>(col.values.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + output);
  } else {
    std::ofstream out(output);
    if (!out) throw IoError("cannot write " + output);
    out << "# sample_rate=" << lattice.sample_rate
        << " stride=" << lattice.frame_stride
        << " lag_offset=" << lattice.columns[0].lag_offset
        << " stage=" << stage_name(stage) << " frames=" << n_frames
        << " lags=" << n_lags << "\n";
    char buf[40];
    for (const auto &col : lattice.columns) {
      for (size_t i = 0; i < col.values.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g", col.values[i]);
        out << (i ? "," : "") << buf;
      }
      out << "\n";
    }
    if (!out) throw IoError("write failed: " + output);
  }
  std::cerr << "dumped " << n_frames << " x " << n_lags << " "
            << stage_name(stage) << " lattice -> " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"hspitch: harmonic-summation pitch tracker and evaluation harness"};
  app.require_subcommand(1);
  int threads = default_thread_count();
  app.add_option("--threads", threads, "worker threads");

  // track
  auto *track = app.add_subcommand("track", "estimate a pitch track from a WAV file");
  std::string track_in, track_out = "track.csv", track_fmt = "csv";
  ConfigArgs track_cfg;
  track->add_option("input", track_in, "input WAV file")->required();
  track->add_option("--output,-o", track_out, "output file");
  track->add_option("--format", track_fmt, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  add_config_options(track, &track_cfg);

  // eval
  auto *eval = app.add_subcommand("eval", "run the degradation / metric grid");
  std::string eval_speech, eval_ref, eval_rir, eval_out = "eval";
  std::string snr_power = "active";
  std::vector<std::string> eval_noises;
  std::vector<double> eval_snrs;
  unsigned eval_seed = 1;
  bool no_loop = false, no_renorm = false;
  ConfigArgs eval_cfg;
  eval->add_option("--speech-dir", eval_speech, "directory of WAV files")->required();
  eval->add_option("--ref-dir", eval_ref, "directory of reference tracks")->required();
  eval->add_option("--noise", eval_noises,
                   "noise WAV path or generator name (white, pink, brown)");
  eval->add_option("--snr", eval_snrs, "SNR levels in dB (empty = clean only)");
  eval->add_option("--rir", eval_rir, "room impulse response WAV");
  eval->add_option("--seed", eval_seed, "noise generator seed");
  eval->add_option("--output,-o", eval_out, "output prefix (.csv, .json)");
  eval->add_option("--snr-power", snr_power, "power measurement: active or global")
      ->check(CLI::IsMember({"active", "global"}));
  eval->add_flag("--no-loop-noise", no_loop, "fail instead of tiling short noise");
  eval->add_flag("--no-reverb-renorm", no_renorm,
                 "keep convolved level instead of matching the dry peak");
  add_config_options(eval, &eval_cfg);

  // synth
  auto *synth = app.add_subcommand("synth", "generate a test signal and its reference");
  std::string synth_kind = "pulse_train", synth_out = "synth";
  double synth_f0 = 120.0, synth_f0_end = 0.0, synth_dur = 2.0;
  double synth_snr = std::numeric_limits<double>::infinity();
  double synth_jitter = 0.005, synth_lead = 0.0, synth_tail = 0.0;
  double synth_burst = 0.4, synth_floor = -60.0;
  unsigned synth_seed = 1;
  int synth_rate = 16000, synth_first_harm = 1;
  bool synth_flat = false;
  synth->add_option("--kind", synth_kind,
                    "pulse_train, sawtooth, chirp or tone_burst");
  synth->add_option("--f0", synth_f0, "fundamental (chirp: start) in Hz");
  synth->add_option("--f0-end", synth_f0_end, "chirp end frequency in Hz");
  synth->add_option("--duration", synth_dur, "voiced duration in s");
  auto *snr_opt = synth->add_option("--snr", synth_snr,
                                    "add white noise at this SNR in dB");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--sample-rate", synth_rate, "sample rate in Hz");
  synth->add_option("--jitter", synth_jitter,
                    "pulse train period jitter (fraction of a period)");
  synth->add_option("--lead-silence", synth_lead, "leading silence in s");
  synth->add_option("--tail-silence", synth_tail, "trailing silence in s");
  synth->add_option("--burst-period", synth_burst, "tone burst cycle in s");
  synth->add_option("--noise-floor", synth_floor,
                    "room-tone floor in dB re peak (<= -200 disables)");
  synth->add_option("--first-harmonic", synth_first_harm,
                    "lowest harmonic in sawtooth/chirp/tone_burst sums");
  synth->add_flag("--flat-harmonics", synth_flat,
                  "equal harmonic amplitudes instead of 1/h");
  synth->add_option("--output,-o", synth_out, "output prefix (.wav, .ref.txt)");

  // dump-lattice
  auto *dump = app.add_subcommand("dump-lattice",
                                  "write an intermediate likelihood lattice");
  std::string dump_in, dump_stage = "temporal", dump_out = "lattice.csv";
  std::string dump_fmt = "csv";
  ConfigArgs dump_cfg;
  dump->add_option("input", dump_in, "input WAV file")->required();
  dump->add_option("--stage", dump_stage, "raw, sigmoid, harmonic or temporal");
  dump->add_option("--output,-o", dump_out, "output file");
  dump->add_option("--format", dump_fmt, "csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  add_config_options(dump, &dump_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (track->parsed())
      return cmd_track(track_in, track_out, track_fmt, track_cfg, threads);
    if (eval->parsed())
      return cmd_eval(eval_speech, eval_ref, eval_noises, eval_snrs, eval_rir,
                      eval_seed, eval_out, eval_cfg, threads, snr_power,
                      no_loop, no_renorm);
    if (synth->parsed())
      return cmd_synth(synth_kind, synth_f0, synth_f0_end, synth_dur,
                       synth_snr, snr_opt->count() > 0, synth_seed, synth_rate,
                       synth_jitter, synth_lead, synth_tail, synth_burst,
                       synth_floor, synth_first_harm, synth_flat, synth_out);
    if (dump->parsed())
      return cmd_dump_lattice(dump_in, dump_stage, dump_out, dump_fmt,
                              dump_cfg, threads);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

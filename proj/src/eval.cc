// src/eval.cc

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

#include "hspitch/eval.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hspitch/parallel.h"
#include "hspitch/synth.h"
#include "hspitch/tracker.h"

namespace hspitch {

namespace {

constexpr double kActiveFloorDb = -40.0;

// in-place iterative radix-2 FFT
void fft(std::vector<std::complex<double>> &a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        2.0 * std::numbers::pi / len * (inverse ? 1.0 : -1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse)
    for (auto &x : a) x /= static_cast<double>(n);
}

std::vector<double> convolve(const std::vector<double> &x,
                             const std::vector<double> &h) {
  const size_t out_len = x.size() + h.size() - 1;
  if (x.size() * h.size() < 1 << 16) {  // small: direct
    std::vector<double> out(out_len, 0.0);
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < h.size(); ++j) out[i + j] += x[i] * h[j];
    return out;
  }
  size_t n = 1;
  while (n < out_len) n <<= 1;
  std::vector<std::complex<double>> fa(n), fb(n);
  for (size_t i = 0; i < x.size(); ++i) fa[i] = x[i];
  for (size_t i = 0; i < h.size(); ++i) fb[i] = h[i];
  fft(fa, false);
  fft(fb, false);
  for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  fft(fa, true);
  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

// samples with |s| above -40 dB of the peak
std::vector<char> active_mask(const std::vector<double> &s) {
  double peak = 0.0;
  for (double v : s) peak = std::max(peak, std::abs(v));
  const double floor_amp = peak * std::pow(10.0, kActiveFloorDb / 20.0);
  std::vector<char> mask(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    mask[i] = std::abs(s[i]) >= floor_amp && peak > 0.0;
  return mask;
}

double masked_power(const std::vector<double> &s,
                    const std::vector<char> &mask) {
  double acc = 0.0;
  long count = 0;
  for (size_t i = 0; i < s.size() && i < mask.size(); ++i) {
    if (!mask[i]) continue;
    acc += s[i] * s[i];
    ++count;
  }
  return count > 0 ? acc / count : 0.0;
}

double full_power(const std::vector<double> &s) {
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return s.empty() ? 0.0 : acc / s.size();
}

std::string fmt(double v, const char *spec = "%.6f") {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

nlohmann::json report_json(const EvalReport &r) {
  nlohmann::json j;
  j["gpe"] = std::isnan(r.gpe) ? nlohmann::json() : nlohmann::json(r.gpe);
  j["vde"] = r.vde;
  j["n_voiced_ref"] = r.n_voiced_ref;
  j["n_gross_errors"] = r.n_gross_errors;
  j["n_v_misclassified"] = r.n_v_misclassified;
  j["n_uv_misclassified"] = r.n_uv_misclassified;
  j["n_total"] = r.n_total;
  return j;
}

std::string stem_of(const std::string &path) {
  const size_t slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const size_t dot = name.find('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

}  // namespace

ReferenceTrack read_reference_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference file: " + path);

  std::vector<double> times, values;
  std::string line;
  while (std::getline(in, line)) {
    for (char &c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first[0] == '#') continue;
    double a = 0.0, b = 0.0;
    try {
      a = std::stod(first);
    } catch (const std::exception &) {
      throw IoError("bad reference line in " + path + ": " + line);
    }
    if (ss >> b) {
      times.push_back(a);
      values.push_back(b);
    } else {
      values.push_back(a);  // single column: f0 per default interval
    }
  }
  if (values.empty()) throw IoError("empty reference file: " + path);

  ReferenceTrack ref;
  if (!times.empty() && times.size() == values.size() && times.size() >= 2)
    ref.interval = (times.back() - times.front()) / (times.size() - 1);
  if (!(ref.interval > 0.0)) ref.interval = 0.010;
  ref.f0 = std::move(values);
  for (double v : ref.f0)
    if (v < 0.0 || !std::isfinite(v))
      throw IoError("negative or non-finite f0 in reference: " + path);
  return ref;
}

void write_reference_file(const ReferenceTrack &ref, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write reference file: " + path);
  char buf[64];
  for (size_t k = 0; k < ref.f0.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.4f %.4f\n", k * ref.interval,
                  ref.f0[k]);
    out << buf;
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

// nearest estimate frame for each reference frame; -1 when no estimate
std::vector<int> align_to_reference(const PitchTrack &est,
                                    const ReferenceTrack &ref) {
  std::vector<int> idx(ref.f0.size(), -1);
  if (est.frames.empty()) return idx;
  for (size_t k = 0; k < ref.f0.size(); ++k) {
    const double t = k * ref.interval;
    // est times are monotone: binary search for the insertion point
    int lo = 0, hi = static_cast<int>(est.frames.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (est.frames[mid].time < t) lo = mid + 1;
      else hi = mid;
    }
    int best = lo;
    if (lo > 0 && std::abs(est.frames[lo - 1].time - t) <=
                      std::abs(est.frames[lo].time - t))
      best = lo - 1;
    idx[k] = best;
  }
  return idx;
}

}  // namespace

EvalReport compute_gpe(const PitchTrack &est, const ReferenceTrack &ref) {
  const std::vector<int> idx = align_to_reference(est, ref);
  EvalReport r;
  r.n_total = static_cast<long>(ref.f0.size());
  for (size_t k = 0; k < ref.f0.size(); ++k) {
    if (ref.f0[k] <= 0.0) continue;
    ++r.n_voiced_ref;
    if (idx[k] < 0) {
      ++r.n_gross_errors;  // no estimate at all
      continue;
    }
    const double f_est = est.frames[idx[k]].f0;
    if (std::abs(f_est - ref.f0[k]) / ref.f0[k] > 0.05) ++r.n_gross_errors;
  }
  r.gpe = r.n_voiced_ref > 0
              ? static_cast<double>(r.n_gross_errors) / r.n_voiced_ref
              : std::numeric_limits<double>::quiet_NaN();
  return r;
}

EvalReport compute_vde(const PitchTrack &est, const ReferenceTrack &ref) {
  const std::vector<int> idx = align_to_reference(est, ref);
  EvalReport r;
  r.n_total = static_cast<long>(ref.f0.size());
  for (size_t k = 0; k < ref.f0.size(); ++k) {
    const bool ref_voiced = ref.f0[k] > 0.0;
    const bool est_voiced = idx[k] >= 0 && est.frames[idx[k]].voiced;
    if (ref_voiced && !est_voiced) ++r.n_uv_misclassified;
    if (!ref_voiced && est_voiced) ++r.n_v_misclassified;
  }
  r.vde = r.n_total > 0 ? static_cast<double>(r.n_v_misclassified +
                                              r.n_uv_misclassified) /
                              r.n_total
                        : 0.0;
  return r;
}

EvalReport evaluate_pair(const PitchTrack &est, const ReferenceTrack &ref) {
  EvalReport g = compute_gpe(est, ref);
  const EvalReport v = compute_vde(est, ref);
  g.n_v_misclassified = v.n_v_misclassified;
  g.n_uv_misclassified = v.n_uv_misclassified;
  g.vde = v.vde;
  return g;
}

AudioBuffer mix_noise_at_snr(const AudioBuffer &speech,
                             const AudioBuffer &noise, double snr_db,
                             const MixOptions &opts) {
  if (std::isinf(snr_db) && snr_db > 0) return speech;  // clean sentinel
  if (speech.sample_rate != noise.sample_rate)
    throw ConfigError("mix_noise_at_snr: sample rate mismatch");
  if (noise.samples.empty()) throw ConfigError("mix_noise_at_snr: empty noise");
  if (noise.samples.size() < speech.samples.size() && !opts.loop_noise)
    throw ConfigError("mix_noise_at_snr: noise shorter than speech");

  const size_t n = speech.samples.size();
  std::vector<double> noise_aligned(n);
  for (size_t i = 0; i < n; ++i)
    noise_aligned[i] = noise.samples[i % noise.samples.size()];

  const std::vector<char> mask = active_mask(speech.samples);
  const double p_speech = opts.active_power
                              ? masked_power(speech.samples, mask)
                              : full_power(speech.samples);
  const double p_noise = opts.active_power ? masked_power(noise_aligned, mask)
                                           : full_power(noise_aligned);
  if (p_speech <= 0.0)
    throw ProcessingError("mix_noise_at_snr: silent speech");
  if (p_noise <= 0.0) throw ProcessingError("mix_noise_at_snr: silent noise");

  const double gain = std::sqrt(p_speech / (p_noise * std::pow(10.0, snr_db / 10.0)));
  AudioBuffer out;
  out.sample_rate = speech.sample_rate;
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    out.samples[i] = speech.samples[i] + gain * noise_aligned[i];
  return out;
}

double measure_snr_db(const AudioBuffer &speech, const AudioBuffer &noise,
                      bool active_power) {
  const std::vector<char> mask = active_mask(speech.samples);
  const double ps = active_power ? masked_power(speech.samples, mask)
                                 : full_power(speech.samples);
  const double pn = active_power ? masked_power(noise.samples, mask)
                                 : full_power(noise.samples);
  if (ps <= 0.0 || pn <= 0.0)
    throw ProcessingError("measure_snr_db: silent input");
  return 10.0 * std::log10(ps / pn);
}

AudioBuffer convolve_rir(const AudioBuffer &speech, const AudioBuffer &rir,
                         bool renormalize) {
  if (rir.samples.empty()) throw ConfigError("convolve_rir: empty RIR");
  if (speech.sample_rate != rir.sample_rate)
    throw ConfigError("convolve_rir: sample rate mismatch");
  if (speech.samples.empty()) return speech;

  AudioBuffer out;
  out.sample_rate = speech.sample_rate;
  out.samples = convolve(speech.samples, rir.samples);

  if (renormalize) {
    double in_peak = 0.0, out_peak = 0.0;
    for (double v : speech.samples) in_peak = std::max(in_peak, std::abs(v));
    for (double v : out.samples) out_peak = std::max(out_peak, std::abs(v));
    if (out_peak > 0.0 && in_peak > 0.0) {
      const double g = in_peak / out_peak;
      for (double &v : out.samples) v *= g;
    }
  }
  return out;
}

AudioBuffer gen_test_rir(double t60, double length, int sample_rate,
                         unsigned seed) {
  if (!(t60 > 0.0) || !(length > 0.0) || sample_rate <= 0)
    throw ConfigError("gen_test_rir: t60, length, sample_rate must be positive");
  const int n = std::max(2, static_cast<int>(std::lround(length * sample_rate)));
  const double decay = 3.0 * std::numbers::ln10 / (t60 * sample_rate);

  SeededNormal rng(seed);
  AudioBuffer rir;
  rir.sample_rate = sample_rate;
  rir.samples.resize(n);
  for (int t = 0; t < n; ++t)
    rir.samples[t] = rng.next() * std::exp(-decay * t);

  double peak = 0.0;
  for (double v : rir.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double &v : rir.samples) v *= 0.9 / peak;
  return rir;
}

double measure_t60_schroeder(const AudioBuffer &rir) {
  const size_t n = rir.samples.size();
  if (n < 2) throw ConfigError("measure_t60_schroeder: RIR too short");

  std::vector<double> edc(n);
  double acc = 0.0;
  for (size_t i = n; i-- > 0;) {
    acc += rir.samples[i] * rir.samples[i];
    edc[i] = acc;
  }
  if (edc[0] <= 0.0) throw ProcessingError("measure_t60_schroeder: silent RIR");

  std::vector<double> db(n);
  for (size_t i = 0; i < n; ++i)
    db[i] = 10.0 * std::log10(std::max(edc[i] / edc[0], 1e-300));

  // direct -60 dB crossing, linearly interpolated; crossings inside the
  // final few percent are the truncation plunge, not decay
  const size_t usable = n - n / 20;
  for (size_t i = 1; i < usable; ++i) {
    if (db[i] <= -60.0) {
      const double frac = (-60.0 - db[i - 1]) / (db[i] - db[i - 1]);
      return (i - 1 + frac) / rir.sample_rate;
    }
  }
  // truncated response: extrapolate from the -5..-25 dB slope
  size_t a = 0, b = 0;
  for (size_t i = 0; i < n; ++i) {
    if (a == 0 && db[i] <= -5.0) a = i;
    if (db[i] <= -25.0) {
      b = i;
      break;
    }
  }
  if (b <= a) b = n - 1;
  const double slope = (db[b] - db[a]) /
                       (static_cast<double>(b - a) / rir.sample_rate);
  if (slope >= 0.0)
    throw ProcessingError("measure_t60_schroeder: no decay measurable");
  return -60.0 / slope;
}

EvalResult run_eval(const EvalJob &job) {
  if (job.speech_paths.size() != job.ref_paths.size())
    throw ConfigError("run_eval: speech/reference lists differ in length");
  job.config.validate();

  EvalResult result;

  // load usable utterances up front; unmatched references are skipped
  struct Utterance {
    std::string path;
    std::string name;
    ReferenceTrack ref;
  };
  std::vector<Utterance> utts;
  for (size_t i = 0; i < job.speech_paths.size(); ++i) {
    Utterance u;
    u.path = job.speech_paths[i];
    u.name = stem_of(job.speech_paths[i]);
    try {
      u.ref = read_reference_file(job.ref_paths[i]);
    } catch (const std::exception &e) {
      result.skipped.push_back(u.name + ": " + e.what());
      continue;
    }
    utts.push_back(std::move(u));
  }

  std::optional<AudioBuffer> rir;
  if (!job.rir_path.empty()) rir = read_wav(job.rir_path);

  struct Cell {
    int utt = 0;
    int noise = -1;  // -1 = clean
    int snr = -1;
  };
  std::vector<Cell> cells;
  const bool clean_only = job.snrs_db.empty() || job.noises.empty();
  for (int u = 0; u < static_cast<int>(utts.size()); ++u) {
    if (clean_only) {
      cells.push_back({u, -1, -1});
    } else {
      for (int nz = 0; nz < static_cast<int>(job.noises.size()); ++nz)
        for (int s = 0; s < static_cast<int>(job.snrs_db.size()); ++s)
          cells.push_back({u, nz, s});
    }
  }

  result.rows.resize(cells.size());
  MixOptions mix_opts;
  mix_opts.active_power = job.active_power;
  mix_opts.loop_noise = job.loop_noise;

  parallel_blocks(
      static_cast<int>(cells.size()), job.threads,
      [&](int, int begin, int end) {
        for (int c = begin; c < end; ++c) {
          const Cell &cell = cells[c];
          const Utterance &utt = utts[cell.utt];

          AudioBuffer speech = read_wav(utt.path);
          if (rir) speech = convolve_rir(speech, *rir, job.reverb_renormalize);

          EvalRow row;
          row.utterance = utt.name;
          row.reverb = rir.has_value();
          if (cell.noise < 0) {
            row.noise = "none";
            row.snr_db = std::numeric_limits<double>::infinity();
          } else {
            row.noise = stem_of(job.noises[cell.noise]);
            row.snr_db = job.snrs_db[cell.snr];
            const unsigned cell_seed =
                job.seed * 2654435761u + 1000003u * cell.utt +
                7919u * cell.noise + 104729u * cell.snr;
            AudioBuffer noise;
            if (is_noise_name(job.noises[cell.noise])) {
              noise = make_named_noise(job.noises[cell.noise],
                                       speech.samples.size(),
                                       speech.sample_rate, cell_seed);
            } else {
              noise = read_wav(job.noises[cell.noise]);
            }
            if (rir) noise = convolve_rir(noise, *rir, job.reverb_renormalize);
            speech = mix_noise_at_snr(speech, noise, row.snr_db, mix_opts);
          }

          const TrackResult tracked = track_audio(speech, job.config, 1);
          row.report = evaluate_pair(tracked.track, utt.ref);
          result.rows[c] = std::move(row);
        }
      });
  return result;
}

namespace {

struct Aggregate {
  double gpe_sum = 0.0;
  long gpe_n = 0;
  double vde_sum = 0.0;
  long vde_n = 0;

  void add(const EvalReport &r) {
    if (!std::isnan(r.gpe)) {
      gpe_sum += r.gpe;
      ++gpe_n;
    }
    vde_sum += r.vde;
    ++vde_n;
  }
  double gpe() const {
    return gpe_n > 0 ? gpe_sum / gpe_n
                     : std::numeric_limits<double>::quiet_NaN();
  }
  double vde() const {
    return vde_n > 0 ? vde_sum / vde_n
                     : std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace

void write_eval_csv(const EvalResult &result, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write eval CSV: " + path);
  out << "utterance,noise,snr_db,reverb,gpe,vde,n_voiced_ref,n_gross_errors,"
         "n_v_misclassified,n_uv_misclassified,n_total\n";

  std::map<double, Aggregate> by_snr;
  for (const EvalRow &row : result.rows) {
    const EvalReport &r = row.report;
    out << row.utterance << "," << row.noise << "," << fmt(row.snr_db, "%.2f")
        << "," << (row.reverb ? 1 : 0) << "," << fmt(r.gpe) << ","
        << fmt(r.vde) << "," << r.n_voiced_ref << "," << r.n_gross_errors
        << "," << r.n_v_misclassified << "," << r.n_uv_misclassified << ","
        << r.n_total << "\n";
    by_snr[row.snr_db].add(r);
  }
  for (const auto &[snr, agg] : by_snr) {
    out << "(mean),(all)," << fmt(snr, "%.2f") << ","
        << (result.rows.empty() ? 0 : (result.rows[0].reverb ? 1 : 0)) << ","
        << fmt(agg.gpe()) << "," << fmt(agg.vde()) << ",,,,,\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_eval_json(const EvalResult &result, const std::string &path) {
  nlohmann::json j;
  j["conditions"] = nlohmann::json::array();
  std::map<double, Aggregate> by_snr;
  for (const EvalRow &row : result.rows) {
    nlohmann::json cell = report_json(row.report);
    cell["utterance"] = row.utterance;
    cell["noise"] = row.noise;
    cell["snr_db"] = std::isinf(row.snr_db) ? nlohmann::json()
                                            : nlohmann::json(row.snr_db);
    cell["reverb"] = row.reverb;
    j["conditions"].push_back(cell);
    by_snr[row.snr_db].add(row.report);
  }
  j["aggregates"] = nlohmann::json::array();
  for (const auto &[snr, agg] : by_snr) {
    nlohmann::json a;
    a["snr_db"] = std::isinf(snr) ? nlohmann::json() : nlohmann::json(snr);
    a["mean_gpe"] = std::isnan(agg.gpe()) ? nlohmann::json()
                                          : nlohmann::json(agg.gpe());
    a["mean_vde"] = std::isnan(agg.vde()) ? nlohmann::json()
                                          : nlohmann::json(agg.vde());
    j["aggregates"].push_back(a);
  }
  j["skipped"] = result.skipped;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write eval JSON: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace hspitch

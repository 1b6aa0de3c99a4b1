// src/config.cc

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

#include "hspitch/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hspitch/audio.h"

namespace hspitch {

namespace {

std::string trim(const std::string &s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string &key, const std::string &value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception &) {
    throw ConfigError("config key '" + key + "': expected number, got '" +
                      value + "'");
  }
}

int parse_int(const std::string &key, const std::string &value) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return static_cast<int>(v);
  } catch (const std::exception &) {
    throw ConfigError("config key '" + key + "': expected integer, got '" +
                      value + "'");
  }
}

bool parse_bool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    value + "'");
}

std::vector<double> parse_weights(const std::string &key,
                                  const std::string &value) {
  std::vector<double> out;
  if (trim(value).empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void set_key(TrackerConfig &cfg, const std::string &key,
             const std::string &value) {
  if (key == "f_min") cfg.f_min = parse_double(key, value);
  else if (key == "f_max") cfg.f_max = parse_double(key, value);
  else if (key == "window_dur") cfg.window_dur = parse_double(key, value);
  else if (key == "stride") cfg.stride = parse_int(key, value);
  else if (key == "lowpass_cutoff") cfg.lowpass_cutoff = parse_double(key, value);
  else if (key == "harmonics") cfg.harmonics = parse_int(key, value);
  else if (key == "harmonic_weights") cfg.harmonic_weights = parse_weights(key, value);
  else if (key == "r_mode") {
    if (value == "proportional") cfg.r_mode = RTolMode::proportional;
    else if (value == "fixed") cfg.r_mode = RTolMode::fixed;
    else throw ConfigError("r_mode must be proportional or fixed, got '" + value + "'");
  } else if (key == "r") cfg.r = parse_double(key, value);
  else if (key == "sigmoid_k") cfg.sigmoid_k = parse_double(key, value);
  else if (key == "temporal_k") cfg.temporal_k = parse_int(key, value);
  else if (key == "temporal_step") cfg.temporal_step = parse_int(key, value);
  else if (key == "upsample_factor") cfg.upsample_factor = parse_int(key, value);
  else if (key == "viterbi_cost_mode") {
    if (value == "sum_likelihood") cfg.viterbi_cost_mode = ViterbiCostMode::sum_likelihood;
    else if (value == "transition_difference") cfg.viterbi_cost_mode = ViterbiCostMode::transition_difference;
    else throw ConfigError("viterbi_cost_mode must be sum_likelihood or transition_difference");
  } else if (key == "rectify_s") cfg.rectify_s = parse_int(key, value);
  else if (key == "rectify_j") cfg.rectify_j = parse_int(key, value);
  else if (key == "rectify_alpha") cfg.rectify_alpha = parse_double(key, value);
  else if (key == "voicing_window") cfg.voicing_window = parse_int(key, value);
  else if (key == "voicing_threshold") cfg.voicing_threshold = parse_double(key, value);
  else if (key == "voicing_factor_mode") {
    if (value == "voiced_posterior") cfg.voicing_factor_mode = VoicingFactorMode::voiced_posterior;
    else if (value == "unvoiced_posterior") cfg.voicing_factor_mode = VoicingFactorMode::unvoiced_posterior;
    else throw ConfigError("voicing_factor_mode must be voiced_posterior or unvoiced_posterior");
  } else if (key == "harmonic_summation") cfg.harmonic_summation = parse_bool(key, value);
  else if (key == "temporal_accumulation") cfg.temporal_accumulation = parse_bool(key, value);
  else if (key == "viterbi") cfg.viterbi = parse_bool(key, value);
  else if (key == "rectification") cfg.rectification = parse_bool(key, value);
  else if (key == "voicing") cfg.voicing = parse_bool(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

void TrackerConfig::validate() const {
  if (!(f_min > 0.0) || !(f_max > f_min))
    throw ConfigError("require 0 < f_min < f_max");
  if (!(window_dur > 0.0)) throw ConfigError("window_dur must be positive");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (!(lowpass_cutoff > 0.0)) throw ConfigError("lowpass_cutoff must be positive");
  if (harmonics < 1) throw ConfigError("harmonics must be >= 1");
  if (!harmonic_weights.empty() &&
      static_cast<int>(harmonic_weights.size()) != harmonics)
    throw ConfigError("harmonic_weights must be empty or have 'harmonics' entries");
  for (double w : harmonic_weights)
    if (w < 0.0) throw ConfigError("harmonic_weights must be >= 0");
  if (r < 0.0) throw ConfigError("r must be >= 0");
  if (temporal_k < 0) throw ConfigError("temporal_k must be >= 0");
  if (temporal_step < 0) throw ConfigError("temporal_step must be >= 0");
  if (upsample_factor < 1) throw ConfigError("upsample_factor must be >= 1");
  if (rectify_s < 0) throw ConfigError("rectify_s must be >= 0");
  if (rectify_j < 0) throw ConfigError("rectify_j must be >= 0");
  if (rectify_alpha < 0.0 || rectify_alpha > 1.0)
    throw ConfigError("rectify_alpha must be in [0, 1]");
  if (voicing_window < 0) throw ConfigError("voicing_window must be >= 0");
  if (voicing_threshold < 0.0 || voicing_threshold > 1.0)
    throw ConfigError("voicing_threshold must be in [0, 1]");
}

TrackerConfig parse_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  TrackerConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    set_key(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

void apply_config_override(TrackerConfig &cfg, const std::string &assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string serialize_config(const TrackerConfig &cfg) {
  std::ostringstream out;
  out << "f_min = " << fmt_double(cfg.f_min) << "\n";
  out << "f_max = " << fmt_double(cfg.f_max) << "\n";
  out << "window_dur = " << fmt_double(cfg.window_dur) << "\n";
  out << "stride = " << cfg.stride << "\n";
  out << "lowpass_cutoff = " << fmt_double(cfg.lowpass_cutoff) << "\n";
  out << "harmonics = " << cfg.harmonics << "\n";
  out << "harmonic_weights = ";
  for (size_t i = 0; i < cfg.harmonic_weights.size(); ++i) {
    if (i) out << ",";
    out << fmt_double(cfg.harmonic_weights[i]);
  }
  out << "\n";
  out << "r_mode = "
      << (cfg.r_mode == RTolMode::proportional ? "proportional" : "fixed")
      << "\n";
  out << "r = " << fmt_double(cfg.r) << "\n";
  out << "sigmoid_k = " << fmt_double(cfg.sigmoid_k) << "\n";
  out << "temporal_k = " << cfg.temporal_k << "\n";
  out << "temporal_step = " << cfg.temporal_step << "\n";
  out << "upsample_factor = " << cfg.upsample_factor << "\n";
  out << "viterbi_cost_mode = "
      << (cfg.viterbi_cost_mode == ViterbiCostMode::sum_likelihood
              ? "sum_likelihood"
              : "transition_difference")
      << "\n";
  out << "rectify_s = " << cfg.rectify_s << "\n";
  out << "rectify_j = " << cfg.rectify_j << "\n";
  out << "rectify_alpha = " << fmt_double(cfg.rectify_alpha) << "\n";
  out << "voicing_window = " << cfg.voicing_window << "\n";
  out << "voicing_threshold = " << fmt_double(cfg.voicing_threshold) << "\n";
  out << "voicing_factor_mode = "
      << (cfg.voicing_factor_mode == VoicingFactorMode::voiced_posterior
              ? "voiced_posterior"
              : "unvoiced_posterior")
      << "\n";
  out << "harmonic_summation = " << (cfg.harmonic_summation ? "true" : "false") << "\n";
  out << "temporal_accumulation = " << (cfg.temporal_accumulation ? "true" : "false") << "\n";
  out << "viterbi = " << (cfg.viterbi ? "true" : "false") << "\n";
  out << "rectification = " << (cfg.rectification ? "true" : "false") << "\n";
  out << "voicing = " << (cfg.voicing ? "true" : "false") << "\n";
  return out.str();
}

void write_config_file(const TrackerConfig &cfg, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file: " + path);
  out << serialize_config(cfg);
}

}  // namespace hspitch

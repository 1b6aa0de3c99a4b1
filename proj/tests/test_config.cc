// tests/test_config.cc

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

#include <filesystem>
#include <fstream>

#include "hspitch/audio.h"
#include "hspitch/config.h"

using namespace hspitch;
namespace fs = std::filesystem;

TEST_CASE("config defaults validate") {
  TrackerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.f_min == 50.0);
  CHECK(cfg.f_max == 400.0);
  CHECK(cfg.stride == 1);
  CHECK(cfg.sigmoid_k == -3.0);
  CHECK(cfg.r_mode == RTolMode::fixed);
  CHECK(cfg.harmonics == 4);
}

TEST_CASE("config file round trip is semantically identical") {
  TrackerConfig cfg;
  cfg.f_min = 60.0;
  cfg.stride = 80;
  cfg.harmonic_weights = {1.0, 0.5, 0.25, 0.125};
  cfg.r_mode = RTolMode::proportional;
  cfg.r = 0.01;
  cfg.viterbi_cost_mode = ViterbiCostMode::transition_difference;
  cfg.voicing_factor_mode = VoicingFactorMode::unvoiced_posterior;
  cfg.temporal_accumulation = false;

  const fs::path p = fs::temp_directory_path() / "hspitch_cfg.txt";
  write_config_file(cfg, p.string());
  const TrackerConfig parsed = parse_config_file(p.string());
  CHECK(serialize_config(parsed) == serialize_config(cfg));
  fs::remove(p);
}

TEST_CASE("unknown config keys are rejected") {
  const fs::path p = fs::temp_directory_path() / "hspitch_badcfg.txt";
  std::ofstream(p) << "f_min = 50\nnot_a_key = 1\n";
  CHECK_THROWS_AS(parse_config_file(p.string()), ConfigError);
  fs::remove(p);
}

TEST_CASE("malformed values and lines are rejected") {
  TrackerConfig cfg;
  CHECK_THROWS_AS(apply_config_override(cfg, "stride=abc"), ConfigError);
  CHECK_THROWS_AS(apply_config_override(cfg, "no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(apply_config_override(cfg, "r_mode=sometimes"), ConfigError);
}

TEST_CASE("overrides take precedence over file values") {
  const fs::path p = fs::temp_directory_path() / "hspitch_cfg2.txt";
  std::ofstream(p) << "stride = 10\nf_max = 300\n# comment line\n";
  TrackerConfig cfg = parse_config_file(p.string());
  CHECK(cfg.stride == 10);
  CHECK(cfg.f_max == 300.0);
  apply_config_override(cfg, "stride=20");
  CHECK(cfg.stride == 20);
  CHECK(cfg.f_max == 300.0);  // untouched keys keep file values
  fs::remove(p);
}

TEST_CASE("validate rejects out-of-range fields") {
  TrackerConfig cfg;
  cfg.f_min = 500.0;  // above f_max
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.rectify_alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TrackerConfig{};
  cfg.harmonic_weights = {1.0};  // wrong length for harmonics = 4
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

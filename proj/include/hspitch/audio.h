// include/hspitch/audio.h

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

#ifndef HSPITCH_AUDIO_H_
#define HSPITCH_AUDIO_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace hspitch {

// Bad parameters, malformed config files, unusable command lines.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string &msg) : std::invalid_argument(msg) {}
};

// Unreadable / unwritable / malformed files.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

// Failures while processing otherwise valid inputs.
class ProcessingError : public std::runtime_error {
 public:
  explicit ProcessingError(const std::string &msg)
      : std::runtime_error(msg) {}
};

/// Mono audio: linear-amplitude samples plus the sample rate.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

// Throws ConfigError if the buffer violates its invariants (rate <= 0,
// non-finite samples).
void validate_audio(const AudioBuffer &audio);

// Reads a RIFF/WAVE file. Accepts PCM 16/24-bit and IEEE float 32-bit;
// multi-channel input is downmixed by averaging. Sample rates outside
// 8-48 kHz are rejected (no implicit resampling).
AudioBuffer read_wav(const std::string &path);

enum class WavFormat { pcm16, float32 };

// Writes a mono WAV file. pcm16 rounds and clips to [-1, 1).
void write_wav(const AudioBuffer &audio, const std::string &path,
               WavFormat format = WavFormat::pcm16);

}  // namespace hspitch

#endif  // HSPITCH_AUDIO_H_

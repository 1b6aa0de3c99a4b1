// src/audio.cc

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

#include "hspitch/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace hspitch {

namespace {

constexpr int kMinSampleRate = 8000;
constexpr int kMaxSampleRate = 48000;

uint32_t read_u32(std::istream &in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char *>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream &in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char *>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream &out, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void write_u16(std::ostream &out, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

}  // namespace

void validate_audio(const AudioBuffer &audio) {
  if (audio.sample_rate <= 0)
    throw ConfigError("audio sample rate must be positive");
  for (double s : audio.samples) {
    if (!std::isfinite(s))
      throw ConfigError("audio contains non-finite samples");
  }
}

AudioBuffer read_wav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open WAV file: " + path);

  if (read_u32(in) != 0x46464952u)  // "RIFF"
    throw IoError("not a RIFF file: " + path);
  read_u32(in);                     // file size, unused
  if (read_u32(in) != 0x45564157u)  // "WAVE"
    throw IoError("not a WAVE file: " + path);

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::vector<char> data;

  while (in) {
    uint32_t chunk_id = read_u32(in);
    uint32_t chunk_size = read_u32(in);
    if (!in) break;
    if (chunk_id == 0x20746d66u) {  // "fmt "
      format = read_u16(in);
      channels = read_u16(in);
      sample_rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      if (chunk_size > 16) in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (chunk_id == 0x61746164u) {  // "data"
      data.resize(chunk_size);
      in.read(data.data(), chunk_size);
      if (static_cast<uint32_t>(in.gcount()) != chunk_size)
        throw IoError("truncated WAV data chunk: " + path);
      break;
    } else {
      // chunks are word aligned
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  if (!have_fmt || data.empty())
    throw IoError("WAV file missing fmt or data chunk: " + path);
  if (channels < 1) throw IoError("WAV file has no channels: " + path);
  if (sample_rate < kMinSampleRate || sample_rate > kMaxSampleRate)
    throw IoError("unsupported sample rate " + std::to_string(sample_rate) +
                  " Hz (accepted 8000-48000): " + path);

  const bool is_float = (format == 3);
  const bool is_pcm = (format == 1);
  if (!is_pcm && !is_float)
    throw IoError("unsupported WAV format tag " + std::to_string(format) +
                  ": " + path);
  if (is_pcm && bits != 16 && bits != 24)
    throw IoError("unsupported PCM depth " + std::to_string(bits) + ": " +
                  path);
  if (is_float && bits != 32)
    throw IoError("unsupported float depth " + std::to_string(bits) + ": " +
                  path);

  const size_t bytes_per_sample = bits / 8;
  const size_t frame_bytes = bytes_per_sample * channels;
  const size_t n_frames = data.size() / frame_bytes;

  AudioBuffer out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples.resize(n_frames);

  const unsigned char *p = reinterpret_cast<const unsigned char *>(data.data());
  for (size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (int c = 0; c < channels; ++c) {
      const unsigned char *s = p + i * frame_bytes + c * bytes_per_sample;
      double v;
      if (is_float) {
        float f;
        std::memcpy(&f, s, 4);
        v = f;
      } else if (bits == 16) {
        int16_t raw = static_cast<int16_t>(s[0] | (s[1] << 8));
        v = raw / 32768.0;
      } else {  // 24-bit
        int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
        if (raw & 0x800000) raw |= ~0xffffff;  // sign extend
        v = raw / 8388608.0;
      }
      acc += v;
    }
    out.samples[i] = acc / channels;  // downmix by averaging
  }
  return out;
}

void write_wav(const AudioBuffer &audio, const std::string &path,
               WavFormat format) {
  validate_audio(audio);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write WAV file: " + path);

  const bool is_float = (format == WavFormat::float32);
  const uint16_t bits = is_float ? 32 : 16;
  const uint32_t data_bytes =
      static_cast<uint32_t>(audio.samples.size()) * (bits / 8);

  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, is_float ? 3 : 1);
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(audio.sample_rate));
  write_u32(out, static_cast<uint32_t>(audio.sample_rate) * (bits / 8));
  write_u16(out, bits / 8);
  write_u16(out, bits);
  out.write("data", 4);
  write_u32(out, data_bytes);

  if (is_float) {
    for (double s : audio.samples) {
      float f = static_cast<float>(s);
      char b[4];
      std::memcpy(b, &f, 4);
      out.write(b, 4);
    }
  } else {
    for (double s : audio.samples) {
      double scaled = std::lround(s * 32767.0);
      scaled = std::clamp(scaled, -32768.0, 32767.0);
      write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace hspitch

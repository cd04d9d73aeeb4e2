// Copyright 2026 The Emorec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "emorec/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

namespace emorec {
namespace {

uint32_t get_u32(const std::string& b, size_t off) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(static_cast<unsigned char>(b[off + i]))
         << (8 * i);
  }
  return v;
}

uint16_t get_u16(const std::string& b, size_t off) {
  return static_cast<uint16_t>(
      static_cast<unsigned char>(b[off]) |
      (static_cast<unsigned char>(b[off + 1]) << 8));
}

void put_u32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void put_u16(std::string* out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);

  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw IoError(path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  size_t pos = 12;
  // Chunk walk; sizes are padded to even byte boundaries.
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const uint32_t len = get_u32(bytes, pos + 4);
    pos += 8;
    if (pos + len > bytes.size()) {
      throw IoError(path + ": truncated " + id + " chunk");
    }
    if (id == "fmt ") {
      if (len < 16) throw IoError(path + ": short fmt chunk");
      format = get_u16(bytes, pos);
      channels = get_u16(bytes, pos + 2);
      rate = get_u32(bytes, pos + 4);
      bits = get_u16(bytes, pos + 14);
      have_fmt = true;
    } else if (id == "data") {
      data_off = pos;
      data_len = len;
    }
    pos += len + (len % 2);
  }
  if (!have_fmt) throw IoError(path + ": missing fmt chunk");
  if (data_off == 0 && data_len == 0) {
    throw IoError(path + ": missing data chunk");
  }
  if (format != 1) {
    throw IoError(path + ": format tag " + std::to_string(format) +
                  ", only PCM is supported");
  }
  if (channels != 1) {
    throw IoError(path + ": " + std::to_string(channels) +
                  " channels, mono required");
  }
  if (bits != 16) {
    throw IoError(path + ": " + std::to_string(bits) +
                  "-bit samples, 16-bit required");
  }
  if (rate != static_cast<uint32_t>(kDefaultSampleRate)) {
    throw IoError(path + ": sample rate " + std::to_string(rate) + ", " +
                  std::to_string(kDefaultSampleRate) +
                  " required (no resampler)");
  }
  if (data_len % 2 != 0) throw IoError(path + ": odd data chunk length");

  Waveform wave;
  wave.sample_rate = kDefaultSampleRate;
  wave.samples.resize(data_len / 2);
  for (size_t i = 0; i < wave.samples.size(); ++i) {
    const int16_t s = static_cast<int16_t>(get_u16(bytes, data_off + 2 * i));
    wave.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return wave;
}

void write_wav(const std::string& path, const Waveform& wave) {
  validate(wave);
  const uint32_t data_len = static_cast<uint32_t>(wave.samples.size() * 2);
  std::string bytes;
  bytes.reserve(44 + data_len);
  bytes.append("RIFF");
  put_u32(&bytes, 36 + data_len);
  bytes.append("WAVE");
  bytes.append("fmt ");
  put_u32(&bytes, 16);
  put_u16(&bytes, 1);  // PCM
  put_u16(&bytes, 1);  // mono
  put_u32(&bytes, static_cast<uint32_t>(wave.sample_rate));
  put_u32(&bytes, static_cast<uint32_t>(wave.sample_rate * 2));
  put_u16(&bytes, 2);   // block align
  put_u16(&bytes, 16);  // bits per sample
  bytes.append("data");
  put_u32(&bytes, data_len);
  for (double s : wave.samples) {
    const double v = std::clamp(s, -1.0, 1.0);
    put_u16(&bytes, static_cast<uint16_t>(
                        static_cast<int16_t>(std::lround(v * 32767.0))));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path);
}

}  // namespace emorec

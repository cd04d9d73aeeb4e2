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

#include "emorec/feature_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "emorec/common.hpp"
#include "wire.hpp"

namespace emorec {
namespace {

using wire::get_f64;
using wire::get_u32;
using wire::put_f64;
using wire::put_u32;

constexpr char kMagic[4] = {'E', 'P', 'F', 'M'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kMaxLayoutTag = 5;

}  // namespace

std::string features_to_bytes(const FeatureMatrix& m) {
  validate(m);
  if (m.frames > std::numeric_limits<uint32_t>::max()) {
    throw IoError("frame count exceeds the container's u32 field");
  }
  std::string bytes;
  bytes.reserve(20 + m.values.size() * 8);
  bytes.append(kMagic, 4);
  put_u32(&bytes, kVersion);
  put_u32(&bytes, static_cast<uint32_t>(m.layout));
  put_u32(&bytes, static_cast<uint32_t>(m.frames));
  put_u32(&bytes, static_cast<uint32_t>(m.dims));
  for (double v : m.values) put_f64(&bytes, v);
  return bytes;
}

FeatureMatrix features_from_bytes(const std::string& bytes) {
  if (bytes.size() < 20 || bytes.compare(0, 4, kMagic, 4) != 0) {
    throw IoError("not an EPFM container");
  }
  const uint32_t version = get_u32(bytes, 4);
  if (version != kVersion) {
    throw IoError("unsupported EPFM version " + std::to_string(version));
  }
  const uint32_t tag = get_u32(bytes, 8);
  if (tag > kMaxLayoutTag) {
    throw IoError("unknown layout tag " + std::to_string(tag));
  }
  FeatureMatrix m;
  m.layout = static_cast<FeatureLayout>(tag);
  m.frames = get_u32(bytes, 12);
  m.dims = static_cast<int>(get_u32(bytes, 16));
  const size_t expected = static_cast<size_t>(m.frames) *
                          static_cast<size_t>(m.dims);
  if (bytes.size() != 20 + expected * 8) {
    throw IoError("payload size disagrees with the header");
  }
  m.values.resize(expected);
  for (size_t i = 0; i < expected; ++i) {
    m.values[i] = get_f64(bytes, 20 + i * 8);
  }
  try {
    validate(m);
  } catch (const Error& e) {
    throw IoError(std::string("invalid feature payload: ") + e.what());
  }
  return m;
}

void write_features(const std::string& path, const FeatureMatrix& m) {
  const std::string bytes = features_to_bytes(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path);
}

FeatureMatrix read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  return features_from_bytes(bytes);
}

std::string features_to_csv(const FeatureMatrix& m) {
  validate(m);
  std::string csv = "frame";
  for (int d = 0; d < m.dims; ++d) {
    csv += ",d" + std::to_string(d);
  }
  csv += "\n";
  char cell[64];
  for (int64_t f = 0; f < m.frames; ++f) {
    csv += std::to_string(f);
    for (int d = 0; d < m.dims; ++d) {
      std::snprintf(cell, sizeof(cell), ",%.9g", m.at(f, d));
      csv += cell;
    }
    csv += "\n";
  }
  return csv;
}

}  // namespace emorec

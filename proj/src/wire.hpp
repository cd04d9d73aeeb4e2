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
//
// Little-endian wire helpers shared by the binary container formats.
// Byte-wise shifts keep the encoding independent of host endianness.

#ifndef EMOREC_SRC_WIRE_HPP_
#define EMOREC_SRC_WIRE_HPP_

#include <bit>
#include <cstdint>
#include <string>

#include "emorec/common.hpp"

namespace emorec {
namespace wire {

inline void put_u32(std::string* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

inline void put_f64(std::string* out, double v) {
  const uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) {
    out->push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }
}

inline uint32_t get_u32(const std::string& bytes, size_t offset) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<uint32_t>(
             static_cast<unsigned char>(bytes[offset + static_cast<size_t>(i)]))
         << (8 * i);
  }
  return v;
}

inline double get_f64(const std::string& bytes, size_t offset) {
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<uint64_t>(
                static_cast<unsigned char>(
                    bytes[offset + static_cast<size_t>(i)]))
            << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

/// Sequential bounds-checked reader; every overrun throws IoError.
class Cursor {
 public:
  explicit Cursor(const std::string& bytes) : bytes_(bytes) {}

  uint32_t u32() {
    need(4);
    uint32_t v = get_u32(bytes_, pos_);
    pos_ += 4;
    return v;
  }

  double f64() {
    need(8);
    double v = get_f64(bytes_, pos_);
    pos_ += 8;
    return v;
  }

  std::string raw(size_t n) {
    need(n);
    std::string v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(size_t n) const {
    if (pos_ + n > bytes_.size()) throw IoError("truncated container");
  }

  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace wire
}  // namespace emorec

#endif  // EMOREC_SRC_WIRE_HPP_

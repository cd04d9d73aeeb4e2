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
// The EPFM feature container: header {magic "EPFM", version u32, layout
// tag u32, frames u32, dims u32} followed by the row-major values as
// 64-bit little-endian floats, independent of host byte order. A CSV
// mirror exists for eyeballing.

#ifndef EMOREC_FEATURE_IO_HPP_
#define EMOREC_FEATURE_IO_HPP_

#include <string>

#include "emorec/features.hpp"

namespace emorec {

/// Serializes the matrix to the EPFM byte layout.
std::string features_to_bytes(const FeatureMatrix& m);

/// Parses EPFM bytes. Throws IoError on bad magic, unsupported version,
/// unknown layout tag, or a payload that disagrees with the header.
FeatureMatrix features_from_bytes(const std::string& bytes);

/// Writes the EPFM file. Throws IoError when the file cannot be written.
void write_features(const std::string& path, const FeatureMatrix& m);

/// Reads an EPFM file. Throws IoError when it cannot be read or parsed.
FeatureMatrix read_features(const std::string& path);

/// Header "frame,d0,...,dN" then one row per frame.
std::string features_to_csv(const FeatureMatrix& m);

}  // namespace emorec

#endif  // EMOREC_FEATURE_IO_HPP_

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
// Versioned binary container for trained recognizers: topology and
// transitions, GMM bootstrap parameters, the LDA projection, MLP weights
// and state priors, all as little-endian 64-bit floats behind the EMHM
// magic. Serialization is deterministic, so equal models produce equal
// bytes.

#ifndef EMOREC_MODEL_IO_HPP_
#define EMOREC_MODEL_IO_HPP_

#include <string>

#include "emorec/decode.hpp"

namespace emorec {

std::string recognizer_to_bytes(const Recognizer& model);

/// Parses a container; any structural problem throws IoError.
Recognizer recognizer_from_bytes(const std::string& bytes);

void write_recognizer(const std::string& path, const Recognizer& model);

Recognizer read_recognizer(const std::string& path);

}  // namespace emorec

#endif  // EMOREC_MODEL_IO_HPP_

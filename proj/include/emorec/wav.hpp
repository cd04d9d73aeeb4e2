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
// WAV ingestion and emission restricted to the one format the toolkit
// processes: 16-bit PCM, mono, 16 kHz. Anything else is rejected with the
// offending property named; there is no resampler.

#ifndef EMOREC_WAV_HPP_
#define EMOREC_WAV_HPP_

#include <string>

#include "emorec/waveform.hpp"

namespace emorec {

/// Reads a RIFF/WAVE file, skipping unknown chunks. Throws IoError when
/// the file is unreadable, malformed, or not 16-bit PCM mono 16 kHz.
Waveform read_wav(const std::string& path);

/// Writes 16-bit PCM mono; samples are clamped to [-1, 1] and scaled by
/// 32767. Output bytes depend only on the waveform.
void write_wav(const std::string& path, const Waveform& wave);

}  // namespace emorec

#endif  // EMOREC_WAV_HPP_

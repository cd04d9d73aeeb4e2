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

#ifndef EMOREC_WAVEFORM_HPP_
#define EMOREC_WAVEFORM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "emorec/common.hpp"

namespace emorec {

constexpr int kDefaultSampleRate = 16000;

/// Mono PCM audio held as normalized doubles in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double duration_sec() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws if the waveform breaks its invariants (rate > 0, finite samples).
inline void validate(const Waveform& w) {
  if (w.sample_rate <= 0) throw Error("sample_rate must be positive");
  for (double s : w.samples) {
    if (!std::isfinite(s)) throw Error("waveform contains non-finite samples");
  }
}

/// Half-open sample interval labeled voiced.
struct VoicedRegion {
  int64_t start_sample = 0;
  int64_t end_sample = 0;  // exclusive

  int64_t length() const { return end_sample - start_sample; }
};

}  // namespace emorec

#endif  // EMOREC_WAVEFORM_HPP_

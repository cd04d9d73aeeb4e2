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
// Source-filter synthesis: an excitation impulse train with a controlled
// pitch trajectory driven through second-order resonators. Every generated
// file carries its ground-truth glottal closure instants, which is what the
// detection and classification test oracles are built on.

#ifndef EMOREC_SYNTH_HPP_
#define EMOREC_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "emorec/waveform.hpp"

namespace emorec {

struct SyntheticSpec {
  enum class Contour { kConstant, kLinear, kModulated };

  double f0_start_hz = 100.0;
  double f0_end_hz = 100.0;
  Contour contour = Contour::kConstant;
  double modulation_hz = 0.0;     // vibrato rate for kModulated
  double modulation_depth = 0.0;  // relative vibrato depth

  double duration_sec = 1.0;  // voiced span, excluding silence padding
  double silence_lead_sec = 0.0;
  double silence_tail_sec = 0.0;

  double gain = 0.6;         // peak amplitude after normalization
  double jitter_pct = 0.0;   // per-period random perturbation
  double shimmer_pct = 0.0;  // per-impulse amplitude perturbation
  double noise_level = 0.0;  // white noise stddev relative to gain

  std::vector<double> formants_hz = {700.0, 1200.0, 2600.0};
  std::vector<double> bandwidths_hz = {180.0, 280.0, 400.0};

  uint64_t seed = 1;
  int sample_rate = kDefaultSampleRate;
};

struct SyntheticUtterance {
  Waveform wave;
  std::vector<int64_t> gci_samples;  // ground-truth epoch locations
  std::vector<double> gci_f0_hz;     // instantaneous f0 at each epoch
};

/// Throws Error if the spec breaks its invariants (f0 outside [50, 600],
/// duration <= 0.1 s).
void validate(const SyntheticSpec& spec);

SyntheticUtterance synthesize(const SyntheticSpec& spec);

/// Emotion-styled spec. Pitch and energy ranges follow the presets used for
/// the classifier oracles: angry and happy are high-arousal (high, moving
/// pitch and strong excitation), sad is low and quiet, neutral sits between.
/// speaker_shift scales pitch and formants to mimic different talkers
/// (1.0 = canonical voice); utterance-to-utterance variety comes from seed.
SyntheticSpec emotion_preset(const std::string& emotion, uint64_t seed,
                             double speaker_shift = 1.0);

/// The canonical emotion order used across the toolkit.
const std::vector<std::string>& default_emotions();

}  // namespace emorec

#endif  // EMOREC_SYNTH_HPP_

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

#include "emorec/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emorec/common.hpp"
#include "emorec/rng.hpp"

namespace emorec {
namespace {

constexpr double kF0Min = 50.0;
constexpr double kF0Max = 600.0;
constexpr double kReturnFraction = 0.7;
constexpr double kAnticausalBandwidthRatio = 2.5;

double lerp(double a, double b, double t) { return a + (b - a) * t; }

// Instantaneous f0 at voiced-span progress t in [0, 1].
double f0_at(const SyntheticSpec& spec, double t, double t_sec) {
  double base = spec.f0_start_hz;
  if (spec.contour != SyntheticSpec::Contour::kConstant) {
    base = lerp(spec.f0_start_hz, spec.f0_end_hz, t);
  }
  if (spec.contour == SyntheticSpec::Contour::kModulated) {
    base *= 1.0 + spec.modulation_depth *
                      std::sin(2.0 * M_PI * spec.modulation_hz * t_sec);
  }
  return std::clamp(base, kF0Min, kF0Max);
}

// Cascade of two-pole resonators applied in place. Each resonance runs
// forward at the nominal bandwidth and then backward at 2.5 times the
// bandwidth. A purely causal cascade puts all ring energy after the
// marked excitation instant, which would shift the energy center (and
// with it any timing measurement) a fixed fraction of the ring time
// late; the short anticausal ring balances the energy around the mark
// so ground-truth labels mean what they say.
void apply_formants(const SyntheticSpec& spec, std::vector<double>* x) {
  for (size_t f = 0; f < spec.formants_hz.size(); ++f) {
    const double cosw = std::cos(2.0 * M_PI * spec.formants_hz[f] /
                                 spec.sample_rate);
    const double rf = std::exp(-M_PI * spec.bandwidths_hz[f] /
                               spec.sample_rate);
    const double cf = 2.0 * rf * cosw;
    const double rf2 = rf * rf;
    double y1 = 0.0;
    double y2 = 0.0;
    for (double& v : *x) {
      const double y = v + cf * y1 - rf2 * y2;
      y2 = y1;
      y1 = y;
      v = y;
    }
    const double rb = std::exp(-M_PI * spec.bandwidths_hz[f] *
                               kAnticausalBandwidthRatio / spec.sample_rate);
    const double cb = 2.0 * rb * cosw;
    const double rb2 = rb * rb;
    y1 = 0.0;
    y2 = 0.0;
    for (size_t i = x->size(); i-- > 0;) {
      const double y = (*x)[i] + cb * y1 - rb2 * y2;
      y2 = y1;
      y1 = y;
      (*x)[i] = y;
    }
  }
}

}  // namespace

void validate(const SyntheticSpec& spec) {
  if (spec.duration_sec <= 0.1) {
    throw Error("synthetic duration must exceed 0.1 s");
  }
  if (spec.f0_start_hz < kF0Min || spec.f0_start_hz > kF0Max ||
      spec.f0_end_hz < kF0Min || spec.f0_end_hz > kF0Max) {
    throw Error("synthetic f0 must lie within [50, 600] Hz");
  }
  if (spec.formants_hz.size() != spec.bandwidths_hz.size()) {
    throw Error("formant and bandwidth lists must have equal length");
  }
  if (spec.sample_rate <= 0) {
    throw Error("sample rate must be positive");
  }
}

SyntheticUtterance synthesize(const SyntheticSpec& spec) {
  validate(spec);
  const int fs = spec.sample_rate;
  const int64_t lead = llround(spec.silence_lead_sec * fs);
  const int64_t voiced = llround(spec.duration_sec * fs);
  const int64_t tail = llround(spec.silence_tail_sec * fs);
  const int64_t total = lead + voiced + tail;

  Rng rng(spec.seed);
  SyntheticUtterance out;
  out.wave.sample_rate = fs;
  out.wave.samples.assign(static_cast<size_t>(total), 0.0);

  // Glottal excitation: each closure is an abrupt negative spike in the
  // flow derivative followed one sample later by a partial return lobe.
  // The return tames the low-frequency drive into the formants so the
  // closure discontinuity stays the dominant event of the derivative,
  // as in natural voicing; zero-frequency analysis also depends on the
  // negative polarity.
  double pos = static_cast<double>(lead);
  const double end = static_cast<double>(lead + voiced);
  while (pos < end) {
    const double t = (pos - lead) / static_cast<double>(voiced);
    const double f0 = f0_at(spec, t, pos / fs);
    const int64_t at = llround(pos);
    if (at < total) {
      double amp = 1.0;
      if (spec.shimmer_pct > 0.0) {
        amp *= 1.0 + 0.01 * spec.shimmer_pct * rng.gaussian();
      }
      out.wave.samples[static_cast<size_t>(at)] -= amp;
      if (at + 1 < total) {
        out.wave.samples[static_cast<size_t>(at + 1)] += kReturnFraction * amp;
      }
      out.gci_samples.push_back(at);
      out.gci_f0_hz.push_back(f0);
    }
    double period = fs / f0;
    if (spec.jitter_pct > 0.0) {
      period *= 1.0 + 0.01 * spec.jitter_pct * rng.gaussian();
    }
    pos += std::max(period, fs / kF0Max);
  }

  apply_formants(spec, &out.wave.samples);

  double peak = 0.0;
  for (double v : out.wave.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double scale = spec.gain / peak;
    for (double& v : out.wave.samples) v *= scale;
  }

  if (spec.noise_level > 0.0) {
    const double sigma = spec.noise_level * spec.gain;
    for (double& v : out.wave.samples) v += sigma * rng.gaussian();
  }
  return out;
}

SyntheticSpec emotion_preset(const std::string& emotion, uint64_t seed,
                             double speaker_shift) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  SyntheticSpec spec;
  spec.seed = seed;
  spec.contour = SyntheticSpec::Contour::kModulated;
  spec.duration_sec = 1.0 + rng.uniform() * 0.4;
  spec.silence_lead_sec = 0.08 + rng.uniform() * 0.06;
  spec.silence_tail_sec = 0.08 + rng.uniform() * 0.06;
  spec.noise_level = 0.001;

  double formant_shift = speaker_shift;
  if (emotion == "angry") {
    // High arousal: high rising pitch, strong fast vibrato, loud and
    // rough excitation, brightened spectrum.
    spec.f0_start_hz = 260.0 + rng.uniform() * 50.0;
    spec.f0_end_hz = spec.f0_start_hz + 40.0 + rng.uniform() * 30.0;
    spec.modulation_hz = 6.5 + rng.uniform() * 1.5;
    spec.modulation_depth = 0.05;
    spec.gain = 0.82 + rng.uniform() * 0.08;
    spec.jitter_pct = 2.0;
    spec.shimmer_pct = 6.0;
    spec.formants_hz = {820.0, 1400.0, 2900.0};
    spec.bandwidths_hz = {220.0, 340.0, 480.0};
  } else if (emotion == "happy") {
    // High arousal but with a falling sweep and slower, deeper vibrato.
    spec.f0_start_hz = 300.0 + rng.uniform() * 60.0;
    spec.f0_end_hz = spec.f0_start_hz - 70.0 - rng.uniform() * 30.0;
    spec.modulation_hz = 4.0 + rng.uniform() * 1.0;
    spec.modulation_depth = 0.10;
    spec.gain = 0.66 + rng.uniform() * 0.08;
    spec.jitter_pct = 1.2;
    spec.shimmer_pct = 3.0;
    spec.formants_hz = {760.0, 1300.0, 2750.0};
    spec.bandwidths_hz = {200.0, 300.0, 420.0};
  } else if (emotion == "neutral") {
    spec.f0_start_hz = 150.0 + rng.uniform() * 30.0;
    spec.f0_end_hz = spec.f0_start_hz + rng.uniform() * 16.0 - 8.0;
    spec.modulation_hz = 2.5 + rng.uniform() * 0.5;
    spec.modulation_depth = 0.015;
    spec.gain = 0.48 + rng.uniform() * 0.06;
    spec.jitter_pct = 0.6;
    spec.shimmer_pct = 1.5;
    spec.formants_hz = {680.0, 1180.0, 2550.0};
    spec.bandwidths_hz = {180.0, 280.0, 400.0};
  } else if (emotion == "sad") {
    // Low arousal: low slowly falling pitch, weak excitation, darker
    // spectrum with narrow bandwidths.
    spec.f0_start_hz = 120.0 + rng.uniform() * 30.0;
    spec.f0_end_hz = spec.f0_start_hz - 14.0 - rng.uniform() * 8.0;
    spec.modulation_hz = 1.5 + rng.uniform() * 0.5;
    spec.modulation_depth = 0.02;
    spec.gain = 0.30 + rng.uniform() * 0.05;
    spec.jitter_pct = 0.5;
    spec.shimmer_pct = 1.0;
    spec.formants_hz = {620.0, 1080.0, 2400.0};
    spec.bandwidths_hz = {150.0, 240.0, 340.0};
  } else {
    throw ConfigError("unknown emotion preset: " + emotion);
  }

  spec.f0_start_hz =
      std::clamp(spec.f0_start_hz * speaker_shift, kF0Min, kF0Max);
  spec.f0_end_hz = std::clamp(spec.f0_end_hz * speaker_shift, kF0Min, kF0Max);
  for (double& f : spec.formants_hz) f *= formant_shift;
  return spec;
}

const std::vector<std::string>& default_emotions() {
  static const std::vector<std::string> kEmotions = {"angry", "happy",
                                                     "neutral", "sad"};
  return kEmotions;
}

}  // namespace emorec

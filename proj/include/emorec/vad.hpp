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
// Voice activity detection through zero-frequency filtering. The filtered
// signal keeps the impulsive excitation structure of voiced speech; the
// strength of its first ten harmonics (SPH) gives a contour that separates
// voiced regions from silence and unvoiced noise with a single threshold.

#ifndef EMOREC_VAD_HPP_
#define EMOREC_VAD_HPP_

#include <string>
#include <vector>

#include "emorec/waveform.hpp"

namespace emorec {

struct ZffSignal {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;
};

struct SphContour {
  std::vector<double> values;  // one per frame, max-normalized
  int sample_rate = kDefaultSampleRate;
  int frame_samples = 0;
  int shift_samples = 0;
  int64_t source_samples = 0;  // length of the analyzed signal
};

struct VadConfig {
  double trend_window_ms = 10.0;
  double frame_ms = 30.0;
  double shift_ms = 5.0;
  int n_fft = 1024;
  double f0_min_hz = 60.0;
  double f0_max_hz = 500.0;
  int n_harmonics = 10;
  double threshold = 0.08;
  double min_region_ms = 30.0;
  double bridge_ms = 20.0;
};

/// Differences the signal, passes it twice through an ideal integrator
/// (running sum), and removes the local trend twice with a centered moving
/// average of trend_window_ms. Discontinuities of the excitation survive as
/// positive-to-negative zero crossings. Throws SignalTooShort when the
/// signal does not cover three trend windows.
ZffSignal zero_frequency_filter(const Waveform& wave,
                                double trend_window_ms = 10.0);

/// Strength of the first n_harmonics harmonic peaks of the cosine phase of
/// the ZFF signal, framed with a Hanning window. The fundamental bin is the
/// magnitude argmax inside [f0_min_hz, f0_max_hz]; harmonics are read at
/// the nearest bins and their sum is weighted by the frame RMS of the ZFF
/// signal. The contour is normalized by its global maximum (skipped when
/// the maximum is zero). Throws SignalTooShort when the signal does not
/// cover one frame.
SphContour sph_contour(const ZffSignal& zff, const VadConfig& config = {});

/// Thresholds the contour, discards voiced runs shorter than min_region_ms,
/// bridges silent gaps shorter than bridge_ms, and converts the surviving
/// runs to half-open sample intervals. Regions are disjoint, sorted, and at
/// least min_region_ms long; an empty contour yields no regions.
std::vector<VoicedRegion> segment_voiced(const SphContour& contour,
                                         const VadConfig& config = {});

/// Composition of the three stages above.
std::vector<VoicedRegion> detect_voiced_regions(const Waveform& wave,
                                                const VadConfig& config = {});

/// CSV rows "start_sample,end_sample,start_sec,end_sec" with a header.
std::string regions_to_csv(const std::vector<VoicedRegion>& regions,
                           int sample_rate);

}  // namespace emorec

#endif  // EMOREC_VAD_HPP_

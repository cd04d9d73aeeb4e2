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
// Epoch (glottal closure instant) detection by zero-time windowing. Each
// sample anchors a 3 ms segment that is shaped by the heavy 1/(4 sin^2)
// window, transformed, and reduced to the sum of the three strongest HNGD
// spectral peaks. The resulting per-sample energy profile peaks sharply at
// excitation instants; Gaussian smoothing of the contrast-normalized
// profile gives the epoch evidence from which peaks are pruned by the
// 2 ms minimum-gap and negative-dip rules.

#ifndef EMOREC_EPOCH_HPP_
#define EMOREC_EPOCH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "emorec/signal.hpp"
#include "emorec/waveform.hpp"

namespace emorec {

struct ZtwConfig {
  double segment_ms = 3.0;  // M = 48 samples at 16 kHz
  int n_fft = 2048;
  int n_peaks = 3;
  int smooth_width = 5;
};

struct EnergyProfile {
  std::vector<double> values;  // one per region sample, >= 0
  VoicedRegion region;
  int sample_rate = kDefaultSampleRate;
};

struct EpochTrain {
  std::vector<int64_t> locations;  // global sample indices, sorted
  std::vector<double> strengths;   // parallel to locations, > 0
  VoicedRegion region;
};

struct EpochEvidence {
  std::vector<double> values;
  int kernel_length = 0;      // Gaussian length actually used
  bool used_fallback = false;
};

/// One region's full analysis, keeping the intermediates that downstream
/// feature extraction reads (the evidence carries the phase information,
/// the profile carries the excitation energy).
struct RegionEpochs {
  EpochTrain train;
  EpochEvidence evidence;
  EnergyProfile profile;
};

/// HNGD spectrum of one already-differenced 3 ms segment: the segment is
/// shaped by h1^2 and h2, zero-padded to n_fft, the numerator group delay
/// g[k] = Xr*Yr + Xi*Yi is formed with Y the transform of n*x[n], and the
/// Hilbert envelope of g is returned over all n_fft bins. Throws
/// InvalidSegment when the segment length is not segment_ms worth of
/// samples.
RealSpectrum hngd_spectrum(const std::vector<double>& segment,
                           const ZtwConfig& config = {},
                           int sample_rate = kDefaultSampleRate);

/// Spectral energy profile of a voiced region of a differenced waveform:
/// at every region sample the next 3 ms (zero-padded past the region end)
/// yields an HNGD spectrum whose n_peaks largest half-spectrum local
/// maxima are summed; the sequence is then smoothed with a smooth_width
/// running mean. Throws RegionTooShort when the region does not cover one
/// segment.
EnergyProfile energy_profile(const Waveform& differenced,
                             const VoicedRegion& region,
                             const ZtwConfig& config = {});

/// Average pitch period of the profile in samples: the highest qualified
/// autocorrelation peak of the mean-removed profile at lags of 2 to
/// 12.5 ms. A peak qualifies when it is a strict local maximum with
/// normalized correlation at least 0.3; returns 0 when none qualifies,
/// which signals the fallback kernel downstream.
int estimate_avg_pitch(const EnergyProfile& profile);

/// Contrast-normalizes the profile by its 20 ms local mean (floored at
/// 1e-8) and convolves with gaussian_kernel(avg_pitch_samples). Edge taps
/// are renormalized so a constant profile stays constant. When the pitch
/// estimate falls outside [1 ms, 20 ms] the 2 ms fallback kernel is used
/// and flagged.
EpochEvidence epoch_evidence(const EnergyProfile& profile,
                             int avg_pitch_samples);

/// Epoch candidates are the positive strict local maxima of the evidence.
/// Rule (a): while two successive candidates are closer than 2 ms, the
/// smaller is deleted. Rule (b): each remaining successive pair must
/// bound a dip of the mean-removed evidence below zero, else the smaller
/// is deleted. Strengths are the evidence values of the survivors. Throws
/// InvalidLength when evidence length differs from the region length.
EpochTrain pick_epochs(const std::vector<double>& evidence,
                       const VoicedRegion& region,
                       int sample_rate = kDefaultSampleRate);

/// Full chain per region: difference once globally, then energy_profile,
/// estimate_avg_pitch, epoch_evidence, pick_epochs. Epoch strengths are
/// re-read from the smoothed energy profile at the detected locations so
/// they carry excitation energy (quadratic in signal scale) rather than
/// the scale-free evidence. Regions shorter than 40 ms are skipped with a
/// log line.
std::vector<RegionEpochs> analyze_regions(
    const Waveform& wave, const std::vector<VoicedRegion>& regions,
    const ZtwConfig& config = {});

/// The epoch trains of analyze_regions.
std::vector<EpochTrain> detect_epochs(const Waveform& wave,
                                      const std::vector<VoicedRegion>& regions,
                                      const ZtwConfig& config = {});

/// CSV rows "sample_index,time_sec,strength" over all trains, with header.
std::string epochs_to_csv(const std::vector<EpochTrain>& trains,
                          int sample_rate);

}  // namespace emorec

#endif  // EMOREC_EPOCH_HPP_

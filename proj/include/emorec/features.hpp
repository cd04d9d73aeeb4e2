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
// Frame-level features. Epoch trains become per-epoch instantaneous pitch,
// strength of excitation and cosine phase, packed ten epochs deep into
// 30-dim frame vectors; the waveform becomes 13 MFCCs per frame, normalized
// and widened with deltas to 39; both live on the same 20 ms / 10 ms grid
// so they concatenate into the 69-dim fused vector that splicing and LDA
// consume.

#ifndef EMOREC_FEATURES_HPP_
#define EMOREC_FEATURES_HPP_

#include <cstdint>
#include <vector>

#include "emorec/epoch.hpp"
#include "emorec/waveform.hpp"

namespace emorec {

// Enumerator values are the on-disk layout tags; do not renumber.
enum class FeatureLayout {
  kMfcc13 = 0,
  kMfcc39 = 1,
  kEpoch30 = 2,
  kCombined69 = 3,
  kSpliced = 4,
  kLda = 5,
};

/// Dimensionality implied by the layout, or 0 when the layout leaves it
/// free (spliced width depends on the context, LDA width on the fit).
int fixed_layout_dims(FeatureLayout layout);

const char* layout_name(FeatureLayout layout);

/// Row-major frames x dims matrix on the fixed 20 ms / 10 ms frame grid.
struct FeatureMatrix {
  int64_t frames = 0;
  int dims = 0;
  FeatureLayout layout = FeatureLayout::kMfcc13;
  double frame_len_ms = 20.0;
  double frame_shift_ms = 10.0;
  std::vector<double> values;

  double at(int64_t frame, int dim) const {
    return values[static_cast<size_t>(frame * dims + dim)];
  }
  double& at(int64_t frame, int dim) {
    return values[static_cast<size_t>(frame * dims + dim)];
  }
};

/// Throws if the matrix breaks its invariants: values sized frames x dims,
/// all finite, and dims matching the layout tag where the tag fixes them.
void validate(const FeatureMatrix& m);

/// Pitch values that survived the [50, 600] Hz plausibility gate, plus the
/// pair indices of the values the gate removed.
struct PitchTrack {
  std::vector<double> values_hz;
  std::vector<size_t> dropped_pairs;
};

/// Instantaneous pitch per successive epoch pair, sample_rate / gap in Hz,
/// gated to [50, 600] Hz. Fewer than two epochs yield an empty track.
PitchTrack instantaneous_pitch(const EpochTrain& t,
                               int sample_rate = kDefaultSampleRate);

/// Signed strength difference x(i) - x(i+1) per successive epoch pair.
/// Fewer than two epochs yield an empty sequence.
std::vector<double> strength_of_excitation(const EpochTrain& t);

/// Cosine phase of the analytic signal of the region's epoch evidence,
/// sampled at the epoch locations. Throws InvalidLength when the evidence
/// length is not the region length or an epoch falls outside the region.
std::vector<double> instantaneous_phase_at_epochs(
    const std::vector<double>& evidence, const EpochTrain& t);

/// One epoch's feature record. Pairwise quantities are anchored at the
/// first epoch of the pair; the final epoch of a train carries phase only.
struct EpochRecord {
  int64_t location = 0;
  double pitch_hz = 0.0;
  double soe = 0.0;
  double cos_phase = 0.0;
  bool has_pair = false;
};

struct EpochFeatures {
  std::vector<EpochRecord> records;  // sorted by location
};

/// Joins the three per-epoch sequences into records. A pair whose pitch
/// falls outside the plausibility gate drops its anchor record entirely.
/// Throws as instantaneous_phase_at_epochs.
EpochFeatures epoch_features(const EpochTrain& t,
                             const std::vector<double>& evidence,
                             int sample_rate = kDefaultSampleRate);

/// Epoch features for a whole utterance: analyze_regions over the voiced
/// regions, epoch_features per region, records concatenated in time order.
/// Pairs never span a region boundary.
EpochFeatures extract_epoch_features(const Waveform& wave,
                                     const std::vector<VoicedRegion>& regions,
                                     const ZtwConfig& config = {});

/// Packs records into per-frame rows [pitch x10 | soe x10 | phase x10] over
/// 20 ms frames shifted by 10 ms, zero-padded. A frame holding more than
/// ten epochs keeps the latest ten. The frame count follows the same
/// arithmetic as mfcc so the two grids always fuse.
FeatureMatrix frame_epoch_features(const EpochFeatures& feats,
                                   int64_t utterance_len,
                                   int sample_rate = kDefaultSampleRate);

struct MfccConfig {
  double frame_ms = 20.0;
  double shift_ms = 10.0;
  int n_fft = 512;
  int n_filters = 26;
  double mel_lo_hz = 20.0;
  double mel_hi_hz = 8000.0;
  double log_floor = 1e-10;
  int n_coeffs = 13;
};

/// Triangular mel filters as n_filters rows of n_fft/2 + 1 power-bin
/// weights. Filter centers are equally spaced in mel between mel_lo_hz and
/// mel_hi_hz; each filter rises from its left neighbor's center to 1 and
/// falls to its right neighbor's center. Throws ConfigError on an empty or
/// out-of-range band.
std::vector<std::vector<double>> mel_filterbank(const MfccConfig& config,
                                                int sample_rate);

/// 13 cepstral coefficients (c0 included) per 20 ms frame: Hamming window,
/// power spectrum, mel filter energies, floored log, orthonormal DCT-II.
/// Throws EmptySignal when the waveform is shorter than one frame.
FeatureMatrix mfcc(const Waveform& w, const MfccConfig& config = {});

/// Utterance-level cepstral mean and variance normalization: each
/// dimension to mean 0 and variance 1, variance floored at 1e-8. Throws
/// Unnormalizable with fewer than two frames.
FeatureMatrix cmvn(const FeatureMatrix& m);

/// Speaker-level variant: statistics are pooled over all utterances of the
/// speaker and applied to each. Throws Unnormalizable when the pool has
/// fewer than two frames, DimensionMismatch when layouts disagree.
std::vector<FeatureMatrix> cmvn_speaker(
    const std::vector<FeatureMatrix>& utterances);

/// Appends regression deltas and delta-deltas (half-window 2, edge frames
/// replicated) to 13-dim cepstra, giving [c | d | dd] with 39 dims. Throws
/// InvalidWidth on any other layout.
FeatureMatrix add_deltas(const FeatureMatrix& m);

/// Concatenates each frame with its context left and right neighbors,
/// replicating edge frames; dims grow by 2 * context + 1, frame count is
/// preserved.
FeatureMatrix splice(const FeatureMatrix& m, int context = 4);

/// Row-wise concatenation [mfcc39 | epoch30] on a shared frame grid.
/// Throws FrameGridMismatch when frame counts differ, DimensionMismatch
/// when the layouts are not MFCC39 and EPOCH30.
FeatureMatrix combine(const FeatureMatrix& mfcc39,
                      const FeatureMatrix& epoch30);

}  // namespace emorec

#endif  // EMOREC_FEATURES_HPP_

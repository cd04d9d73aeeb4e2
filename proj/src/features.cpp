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

#include "emorec/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "emorec/common.hpp"
#include "emorec/signal.hpp"

namespace emorec {
namespace {

constexpr double kPitchLoHz = 50.0;
constexpr double kPitchHiHz = 600.0;
constexpr int kEpochSlots = 10;
constexpr double kVarianceFloor = 1e-8;
constexpr int kDeltaHalfWindow = 2;

int64_t ms_to_samples(double ms, int sample_rate) {
  return llround(ms * 1e-3 * sample_rate);
}

// Shared by mfcc and frame_epoch_features; the fusion precondition is that
// both produce this count for the same utterance length.
int64_t frame_count(int64_t len, int64_t frame_len, int64_t shift) {
  if (len < frame_len) return 0;
  return (len - frame_len) / shift + 1;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

}  // namespace

int fixed_layout_dims(FeatureLayout layout) {
  switch (layout) {
    case FeatureLayout::kMfcc13: return 13;
    case FeatureLayout::kMfcc39: return 39;
    case FeatureLayout::kEpoch30: return 30;
    case FeatureLayout::kCombined69: return 69;
    case FeatureLayout::kSpliced: return 0;
    case FeatureLayout::kLda: return 0;
  }
  return 0;
}

const char* layout_name(FeatureLayout layout) {
  switch (layout) {
    case FeatureLayout::kMfcc13: return "MFCC13";
    case FeatureLayout::kMfcc39: return "MFCC39";
    case FeatureLayout::kEpoch30: return "EPOCH30";
    case FeatureLayout::kCombined69: return "COMBINED69";
    case FeatureLayout::kSpliced: return "SPLICED";
    case FeatureLayout::kLda: return "LDA";
  }
  return "UNKNOWN";
}

void validate(const FeatureMatrix& m) {
  if (m.frames < 0) throw InvalidLength("negative frame count");
  if (m.dims <= 0) throw InvalidWidth("dims must be positive");
  const int fixed = fixed_layout_dims(m.layout);
  if (fixed != 0 && m.dims != fixed) {
    throw InvalidWidth(std::string(layout_name(m.layout)) + " layout needs " +
                       std::to_string(fixed) + " dims, got " +
                       std::to_string(m.dims));
  }
  if (m.values.size() != static_cast<size_t>(m.frames) *
                             static_cast<size_t>(m.dims)) {
    throw InvalidLength("values are not frames x dims");
  }
  for (double v : m.values) {
    if (!std::isfinite(v)) throw Error("feature matrix has non-finite values");
  }
}

PitchTrack instantaneous_pitch(const EpochTrain& t, int sample_rate) {
  PitchTrack track;
  const size_t n = t.locations.size();
  if (n < 2) return track;
  for (size_t i = 0; i + 1 < n; ++i) {
    const double gap =
        static_cast<double>(t.locations[i + 1] - t.locations[i]);
    const double hz = static_cast<double>(sample_rate) / gap;
    if (hz >= kPitchLoHz && hz <= kPitchHiHz) {
      track.values_hz.push_back(hz);
    } else {
      track.dropped_pairs.push_back(i);
    }
  }
  return track;
}

std::vector<double> strength_of_excitation(const EpochTrain& t) {
  std::vector<double> soe;
  const size_t n = t.strengths.size();
  if (n < 2) return soe;
  soe.reserve(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    soe.push_back(t.strengths[i] - t.strengths[i + 1]);
  }
  return soe;
}

std::vector<double> instantaneous_phase_at_epochs(
    const std::vector<double>& evidence, const EpochTrain& t) {
  if (static_cast<int64_t>(evidence.size()) != t.region.length()) {
    throw InvalidLength("evidence length differs from the region length");
  }
  std::vector<double> phases;
  if (t.locations.empty()) return phases;
  const AnalyticSignal analytic = analytic_envelope_and_cos_phase(evidence);
  phases.reserve(t.locations.size());
  for (int64_t loc : t.locations) {
    const int64_t offset = loc - t.region.start_sample;
    if (offset < 0 || offset >= t.region.length()) {
      throw InvalidLength("epoch location outside its region");
    }
    phases.push_back(analytic.cos_phase[static_cast<size_t>(offset)]);
  }
  return phases;
}

EpochFeatures epoch_features(const EpochTrain& t,
                             const std::vector<double>& evidence,
                             int sample_rate) {
  EpochFeatures feats;
  const size_t n = t.locations.size();
  if (n == 0) return feats;
  const std::vector<double> phases =
      instantaneous_phase_at_epochs(evidence, t);
  const PitchTrack pitch = instantaneous_pitch(t, sample_rate);
  const std::vector<double> soe = strength_of_excitation(t);

  // Walk the pairs in step with the gated track: surviving pairs consume
  // the next pitch value, gated pairs consume the next dropped index and
  // lose their anchor record.
  size_t kept = 0;
  size_t dropped = 0;
  feats.records.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    EpochRecord record;
    record.location = t.locations[i];
    record.cos_phase = phases[i];
    if (i + 1 < n) {
      if (dropped < pitch.dropped_pairs.size() &&
          pitch.dropped_pairs[dropped] == i) {
        ++dropped;
        continue;
      }
      record.pitch_hz = pitch.values_hz[kept];
      record.soe = soe[i];
      record.has_pair = true;
      ++kept;
    }
    feats.records.push_back(record);
  }
  return feats;
}

EpochFeatures extract_epoch_features(const Waveform& wave,
                                     const std::vector<VoicedRegion>& regions,
                                     const ZtwConfig& config) {
  const std::vector<RegionEpochs> analyses =
      analyze_regions(wave, regions, config);
  EpochFeatures all;
  for (const RegionEpochs& analysis : analyses) {
    EpochFeatures part = epoch_features(
        analysis.train, analysis.evidence.values, wave.sample_rate);
    all.records.insert(all.records.end(), part.records.begin(),
                       part.records.end());
  }
  return all;
}

FeatureMatrix frame_epoch_features(const EpochFeatures& feats,
                                   int64_t utterance_len, int sample_rate) {
  const int64_t frame_len = ms_to_samples(20.0, sample_rate);
  const int64_t shift = ms_to_samples(10.0, sample_rate);

  FeatureMatrix m;
  m.layout = FeatureLayout::kEpoch30;
  m.dims = 3 * kEpochSlots;
  m.frames = frame_count(utterance_len, frame_len, shift);
  m.values.assign(static_cast<size_t>(m.frames) * m.dims, 0.0);

  std::vector<EpochRecord> records = feats.records;
  std::sort(records.begin(), records.end(),
            [](const EpochRecord& a, const EpochRecord& b) {
              return a.location < b.location;
            });
  std::vector<int64_t> locations(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    locations[i] = records[i].location;
  }

  for (int64_t f = 0; f < m.frames; ++f) {
    const int64_t start = f * shift;
    const int64_t end = start + frame_len;
    size_t lo = std::lower_bound(locations.begin(), locations.end(), start) -
                locations.begin();
    const size_t hi =
        std::lower_bound(locations.begin(), locations.end(), end) -
        locations.begin();
    // Overflow keeps the latest epochs so the frame ends on fresh
    // excitation state.
    if (hi - lo > static_cast<size_t>(kEpochSlots)) {
      lo = hi - static_cast<size_t>(kEpochSlots);
    }
    for (size_t i = lo; i < hi; ++i) {
      const int slot = static_cast<int>(i - lo);
      m.at(f, slot) = records[i].pitch_hz;
      m.at(f, kEpochSlots + slot) = records[i].soe;
      m.at(f, 2 * kEpochSlots + slot) = records[i].cos_phase;
    }
  }
  return m;
}

std::vector<std::vector<double>> mel_filterbank(const MfccConfig& config,
                                                int sample_rate) {
  if (config.n_filters < 1) throw ConfigError("need at least one mel filter");
  if (config.n_fft < 2) throw ConfigError("n_fft must be at least 2");
  if (config.mel_lo_hz < 0.0 || config.mel_lo_hz >= config.mel_hi_hz ||
      config.mel_hi_hz > sample_rate / 2.0) {
    throw ConfigError("mel band must satisfy 0 <= lo < hi <= Nyquist");
  }
  const int n_bins = config.n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(config.mel_lo_hz);
  const double mel_hi = hz_to_mel(config.mel_hi_hz);
  std::vector<double> edge_hz(static_cast<size_t>(config.n_filters) + 2);
  for (size_t i = 0; i < edge_hz.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    (config.n_filters + 1);
    edge_hz[i] = mel_to_hz(mel);
  }

  std::vector<std::vector<double>> bank(
      static_cast<size_t>(config.n_filters),
      std::vector<double>(static_cast<size_t>(n_bins), 0.0));
  for (int f = 0; f < config.n_filters; ++f) {
    const double lo = edge_hz[static_cast<size_t>(f)];
    const double center = edge_hz[static_cast<size_t>(f) + 1];
    const double hi = edge_hz[static_cast<size_t>(f) + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double hz =
          static_cast<double>(k) * sample_rate / config.n_fft;
      double w = 0.0;
      if (hz > lo && hz <= center) {
        w = (hz - lo) / (center - lo);
      } else if (hz > center && hz < hi) {
        w = (hi - hz) / (hi - center);
      }
      bank[static_cast<size_t>(f)][static_cast<size_t>(k)] = w;
    }
  }
  return bank;
}

FeatureMatrix mfcc(const Waveform& w, const MfccConfig& config) {
  validate(w);
  if (config.n_coeffs != 13) {
    throw ConfigError("the MFCC13 layout fixes n_coeffs at 13");
  }
  const int64_t frame_len = ms_to_samples(config.frame_ms, w.sample_rate);
  const int64_t shift = ms_to_samples(config.shift_ms, w.sample_rate);
  if (frame_len < 2 || shift < 1) throw ConfigError("degenerate frame grid");
  if (frame_len > config.n_fft) {
    throw ConfigError("frame does not fit into n_fft");
  }
  if (w.size() < frame_len) {
    throw EmptySignal("utterance shorter than one frame");
  }

  FeatureMatrix m;
  m.layout = FeatureLayout::kMfcc13;
  m.dims = config.n_coeffs;
  m.frames = frame_count(w.size(), frame_len, shift);
  m.values.assign(static_cast<size_t>(m.frames) * m.dims, 0.0);

  std::vector<double> hamming(static_cast<size_t>(frame_len));
  for (int64_t n = 0; n < frame_len; ++n) {
    hamming[static_cast<size_t>(n)] =
        0.54 - 0.46 * std::cos(2.0 * M_PI * static_cast<double>(n) /
                               static_cast<double>(frame_len - 1));
  }
  const std::vector<std::vector<double>> bank =
      mel_filterbank(config, w.sample_rate);
  const int n_bins = config.n_fft / 2 + 1;

  // Orthonormal DCT-II basis rows, coefficient j over filter index f.
  const int n_filters = config.n_filters;
  std::vector<double> dct(static_cast<size_t>(config.n_coeffs) *
                          static_cast<size_t>(n_filters));
  for (int j = 0; j < config.n_coeffs; ++j) {
    const double scale = std::sqrt((j == 0 ? 1.0 : 2.0) / n_filters);
    for (int f = 0; f < n_filters; ++f) {
      dct[static_cast<size_t>(j * n_filters + f)] =
          scale * std::cos(M_PI * j * (2.0 * f + 1.0) / (2.0 * n_filters));
    }
  }

  Fft fft(config.n_fft);
  std::vector<std::complex<double>> spectrum(
      static_cast<size_t>(config.n_fft));
  std::vector<double> power(static_cast<size_t>(n_bins));
  std::vector<double> log_energy(static_cast<size_t>(n_filters));
  for (int64_t f = 0; f < m.frames; ++f) {
    const int64_t start = f * shift;
    for (int64_t n = 0; n < frame_len; ++n) {
      spectrum[static_cast<size_t>(n)] = {
          w.samples[static_cast<size_t>(start + n)] *
              hamming[static_cast<size_t>(n)],
          0.0};
    }
    std::fill(spectrum.begin() + frame_len, spectrum.end(),
              std::complex<double>{0.0, 0.0});
    fft.forward(spectrum);
    for (int k = 0; k < n_bins; ++k) {
      power[static_cast<size_t>(k)] = std::norm(spectrum[static_cast<size_t>(k)]);
    }
    for (int b = 0; b < n_filters; ++b) {
      double e = 0.0;
      const std::vector<double>& weights = bank[static_cast<size_t>(b)];
      for (int k = 0; k < n_bins; ++k) {
        e += weights[static_cast<size_t>(k)] * power[static_cast<size_t>(k)];
      }
      log_energy[static_cast<size_t>(b)] =
          std::log(std::max(e, config.log_floor));
    }
    for (int j = 0; j < config.n_coeffs; ++j) {
      double c = 0.0;
      for (int b = 0; b < n_filters; ++b) {
        c += dct[static_cast<size_t>(j * n_filters + b)] *
             log_energy[static_cast<size_t>(b)];
      }
      m.at(f, j) = c;
    }
  }
  return m;
}

FeatureMatrix cmvn(const FeatureMatrix& m) {
  validate(m);
  if (m.frames < 2) {
    throw Unnormalizable("cmvn needs at least two frames");
  }
  FeatureMatrix out = m;
  for (int d = 0; d < m.dims; ++d) {
    double mean = 0.0;
    for (int64_t f = 0; f < m.frames; ++f) mean += m.at(f, d);
    mean /= static_cast<double>(m.frames);
    double var = 0.0;
    for (int64_t f = 0; f < m.frames; ++f) {
      const double dev = m.at(f, d) - mean;
      var += dev * dev;
    }
    var /= static_cast<double>(m.frames);
    const double scale = 1.0 / std::sqrt(std::max(var, kVarianceFloor));
    for (int64_t f = 0; f < m.frames; ++f) {
      out.at(f, d) = (m.at(f, d) - mean) * scale;
    }
  }
  return out;
}

std::vector<FeatureMatrix> cmvn_speaker(
    const std::vector<FeatureMatrix>& utterances) {
  if (utterances.empty()) return {};
  const int dims = utterances.front().dims;
  const FeatureLayout layout = utterances.front().layout;
  int64_t total = 0;
  for (const FeatureMatrix& m : utterances) {
    validate(m);
    if (m.dims != dims || m.layout != layout) {
      throw DimensionMismatch("speaker pool mixes feature layouts");
    }
    total += m.frames;
  }
  if (total < 2) {
    throw Unnormalizable("speaker pool needs at least two frames");
  }

  std::vector<double> mean(static_cast<size_t>(dims), 0.0);
  std::vector<double> sq(static_cast<size_t>(dims), 0.0);
  for (const FeatureMatrix& m : utterances) {
    for (int64_t f = 0; f < m.frames; ++f) {
      for (int d = 0; d < dims; ++d) {
        const double v = m.at(f, d);
        mean[static_cast<size_t>(d)] += v;
        sq[static_cast<size_t>(d)] += v * v;
      }
    }
  }
  std::vector<double> scale(static_cast<size_t>(dims));
  for (int d = 0; d < dims; ++d) {
    mean[static_cast<size_t>(d)] /= static_cast<double>(total);
    const double var = sq[static_cast<size_t>(d)] / static_cast<double>(total) -
                       mean[static_cast<size_t>(d)] * mean[static_cast<size_t>(d)];
    scale[static_cast<size_t>(d)] =
        1.0 / std::sqrt(std::max(var, kVarianceFloor));
  }

  std::vector<FeatureMatrix> out = utterances;
  for (FeatureMatrix& m : out) {
    for (int64_t f = 0; f < m.frames; ++f) {
      for (int d = 0; d < dims; ++d) {
        m.at(f, d) = (m.at(f, d) - mean[static_cast<size_t>(d)]) *
                     scale[static_cast<size_t>(d)];
      }
    }
  }
  return out;
}

namespace {

// Regression delta with half-window 2: sum_t t (x[f+t] - x[f-t]) / 10,
// frames replicated past both edges.
void regression_delta(const FeatureMatrix& src, int src_offset,
                      FeatureMatrix* dst, int dst_offset, int width) {
  double denom = 0.0;
  for (int t = 1; t <= kDeltaHalfWindow; ++t) denom += 2.0 * t * t;
  for (int64_t f = 0; f < src.frames; ++f) {
    for (int d = 0; d < width; ++d) {
      double acc = 0.0;
      for (int t = 1; t <= kDeltaHalfWindow; ++t) {
        const int64_t fwd = std::min(f + t, src.frames - 1);
        const int64_t bwd = std::max(f - t, static_cast<int64_t>(0));
        acc += t * (src.at(fwd, src_offset + d) - src.at(bwd, src_offset + d));
      }
      dst->at(f, dst_offset + d) = acc / denom;
    }
  }
}

}  // namespace

FeatureMatrix add_deltas(const FeatureMatrix& m) {
  validate(m);
  if (m.layout != FeatureLayout::kMfcc13) {
    throw InvalidWidth("add_deltas expects the MFCC13 layout");
  }
  const int base = m.dims;
  FeatureMatrix out;
  out.layout = FeatureLayout::kMfcc39;
  out.dims = 3 * base;
  out.frames = m.frames;
  out.values.assign(static_cast<size_t>(out.frames) * out.dims, 0.0);
  for (int64_t f = 0; f < m.frames; ++f) {
    for (int d = 0; d < base; ++d) out.at(f, d) = m.at(f, d);
  }
  regression_delta(out, 0, &out, base, base);
  regression_delta(out, base, &out, 2 * base, base);
  return out;
}

FeatureMatrix splice(const FeatureMatrix& m, int context) {
  validate(m);
  if (context < 0) throw ConfigError("splice context must be nonnegative");
  const int span = 2 * context + 1;
  FeatureMatrix out;
  out.layout = FeatureLayout::kSpliced;
  out.dims = m.dims * span;
  out.frames = m.frames;
  out.values.assign(static_cast<size_t>(out.frames) * out.dims, 0.0);
  for (int64_t f = 0; f < m.frames; ++f) {
    for (int j = 0; j < span; ++j) {
      const int64_t src = std::clamp(f + j - context, static_cast<int64_t>(0),
                                     m.frames - 1);
      for (int d = 0; d < m.dims; ++d) {
        out.at(f, j * m.dims + d) = m.at(src, d);
      }
    }
  }
  return out;
}

FeatureMatrix combine(const FeatureMatrix& mfcc39,
                      const FeatureMatrix& epoch30) {
  validate(mfcc39);
  validate(epoch30);
  if (mfcc39.layout != FeatureLayout::kMfcc39 ||
      epoch30.layout != FeatureLayout::kEpoch30) {
    throw DimensionMismatch("combine fuses MFCC39 with EPOCH30");
  }
  if (mfcc39.frames != epoch30.frames) {
    throw FrameGridMismatch("cepstral and epoch grids differ: " +
                            std::to_string(mfcc39.frames) + " vs " +
                            std::to_string(epoch30.frames) + " frames");
  }
  FeatureMatrix out;
  out.layout = FeatureLayout::kCombined69;
  out.dims = mfcc39.dims + epoch30.dims;
  out.frames = mfcc39.frames;
  out.values.assign(static_cast<size_t>(out.frames) * out.dims, 0.0);
  for (int64_t f = 0; f < out.frames; ++f) {
    for (int d = 0; d < mfcc39.dims; ++d) out.at(f, d) = mfcc39.at(f, d);
    for (int d = 0; d < epoch30.dims; ++d) {
      out.at(f, mfcc39.dims + d) = epoch30.at(f, d);
    }
  }
  return out;
}

}  // namespace emorec

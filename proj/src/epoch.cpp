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

#include "emorec/epoch.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <numeric>

#include "emorec/common.hpp"

namespace emorec {
namespace {

constexpr double kMeanFloor = 1e-8;
constexpr double kMinPitchMs = 1.0;
constexpr double kMaxPitchMs = 20.0;
constexpr double kFallbackMs = 2.0;
constexpr double kMinGapMs = 2.0;
constexpr double kNormWindowMs = 20.0;
constexpr double kMinRegionMs = 40.0;

int segment_samples(const ZtwConfig& config, int sample_rate) {
  return static_cast<int>(llround(config.segment_ms * 1e-3 * sample_rate));
}

// One zero-time-windowing evaluation context: the FFT plan, the combined
// h1^2 * h2 segment weight, and scratch buffers, reused across the
// per-sample hot loop. X and Y = DFT(n * x[n]) come out of a single
// transform of x + i * n * x[n] via Hermitian unpacking.
class ZtwEngine {
 public:
  ZtwEngine(const ZtwConfig& config, int sample_rate)
      : m_(segment_samples(config, sample_rate)),
        n_(config.n_fft),
        fft_(config.n_fft),
        weight_(static_cast<size_t>(m_)),
        z_(static_cast<size_t>(n_)),
        g_(static_cast<size_t>(n_)),
        a_(static_cast<size_t>(n_)) {
    if (m_ >= n_) throw InvalidLength("segment must be shorter than n_fft");
    const Kernel h1 = window_h1(n_);
    const Kernel h2 = window_h2(m_);
    for (int i = 0; i < m_; ++i) {
      weight_[i] = h1.coefficients[i] * h1.coefficients[i] * h2.coefficients[i];
    }
  }

  int segment_length() const { return m_; }
  int n_fft() const { return n_; }

  // Fills hngd with the Hilbert envelope of the twice-differenced
  // numerator group delay of the weighted segment; hngd must have n_fft
  // elements.
  void hngd(const double* segment, double* hngd) {
    for (int i = 0; i < n_; ++i) {
      if (i < m_) {
        const double x = segment[i] * weight_[i];
        z_[i] = {x, x * i};
      } else {
        z_[i] = {0.0, 0.0};
      }
    }
    fft_.forward(z_);
    for (int k = 0; k < n_; ++k) {
      const std::complex<double> a = z_[k];
      const std::complex<double> b = std::conj(z_[(n_ - k) % n_]);
      const std::complex<double> x = 0.5 * (a + b);
      const std::complex<double> y = std::complex<double>(0.0, -0.5) * (a - b);
      g_[k] = x.real() * y.real() + x.imag() * y.imag();
    }
    // The h1^2 weight integrates the spectrum twice, burying resonances
    // under a slow trend. The centered second difference along k
    // (circular, since g is one period of a DFT-domain sequence) undoes
    // one integration without a phase shift and leaves the trend-free
    // DNGD whose envelope carries the peaks.
    {
      const size_t n = static_cast<size_t>(n_);
      double prev = g_[n - 1];
      const double first = g_[0];
      for (size_t k = 0; k < n; ++k) {
        const double cur = g_[k];
        const double next = k + 1 < n ? g_[k + 1] : first;
        g_[k] = next - 2.0 * cur + prev;
        prev = cur;
      }
    }
    for (int k = 0; k < n_; ++k) a_[k] = {g_[k], 0.0};
    fft_.forward(a_);
    for (int k = 1; k < n_ / 2; ++k) a_[k] *= 2.0;
    std::fill(a_.begin() + n_ / 2 + 1, a_.end(), std::complex<double>(0, 0));
    fft_.inverse(a_);
    for (int k = 0; k < n_; ++k) hngd[k] = std::abs(a_[k]);
  }

  // Sum of the n_peaks largest strict local maxima of the half spectrum.
  double peak_sum(const double* hngd, int n_peaks) const {
    double top[8] = {0};
    const int slots = std::min(n_peaks, 8);
    const int half = n_ / 2;
    for (int k = 1; k < half; ++k) {
      const double v = hngd[k];
      if (v > hngd[k - 1] && v > hngd[k + 1] && v > top[slots - 1]) {
        int at = slots - 1;
        while (at > 0 && top[at - 1] < v) {
          top[at] = top[at - 1];
          --at;
        }
        top[at] = v;
      }
    }
    double sum = 0.0;
    for (int i = 0; i < slots; ++i) sum += top[i];
    return sum;
  }

 private:
  int m_;
  int n_;
  Fft fft_;
  std::vector<double> weight_;
  std::vector<std::complex<double>> z_;
  std::vector<double> g_;
  std::vector<std::complex<double>> a_;
};

std::vector<double> gaussian_smooth_renormalized(const std::vector<double>& x,
                                                 const Kernel& kernel) {
  const int64_t n = static_cast<int64_t>(x.size());
  const int64_t klen = kernel.length();
  std::vector<double> out(x.size());
  for (int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    double wsum = 0.0;
    for (int64_t m = 0; m < klen; ++m) {
      const int64_t j = i - (m - kernel.center);
      if (j < 0 || j >= n) continue;
      acc += kernel.coefficients[static_cast<size_t>(m)] *
             x[static_cast<size_t>(j)];
      wsum += kernel.coefficients[static_cast<size_t>(m)];
    }
    out[static_cast<size_t>(i)] = wsum > 0.0 ? acc / wsum : 0.0;
  }
  return out;
}

}  // namespace

RealSpectrum hngd_spectrum(const std::vector<double>& segment,
                           const ZtwConfig& config, int sample_rate) {
  ZtwEngine engine(config, sample_rate);
  if (static_cast<int>(segment.size()) != engine.segment_length()) {
    throw InvalidSegment("segment must cover exactly one analysis window");
  }
  RealSpectrum spectrum;
  spectrum.n_fft = config.n_fft;
  spectrum.half = false;
  spectrum.bins.resize(static_cast<size_t>(config.n_fft));
  engine.hngd(segment.data(), spectrum.bins.data());
  return spectrum;
}

EnergyProfile energy_profile(const Waveform& differenced,
                             const VoicedRegion& region,
                             const ZtwConfig& config) {
  validate(differenced);
  if (region.start_sample < 0 || region.end_sample > differenced.size() ||
      region.start_sample >= region.end_sample) {
    throw Error("region exceeds waveform bounds");
  }
  ZtwEngine engine(config, differenced.sample_rate);
  const int m = engine.segment_length();
  if (region.length() < m) {
    throw RegionTooShort("region shorter than one analysis segment");
  }

  const int64_t len = region.length();
  std::vector<double> segment(static_cast<size_t>(m));
  std::vector<double> hngd(static_cast<size_t>(engine.n_fft()));
  std::vector<double> profile(static_cast<size_t>(len));
  for (int64_t i = 0; i < len; ++i) {
    for (int n = 0; n < m; ++n) {
      const int64_t j = i + n;
      segment[n] =
          j < len
              ? differenced.samples[static_cast<size_t>(region.start_sample + j)]
              : 0.0;
    }
    engine.hngd(segment.data(), hngd.data());
    profile[static_cast<size_t>(i)] = engine.peak_sum(hngd.data(),
                                                      config.n_peaks);
  }

  EnergyProfile out;
  out.region = region;
  out.sample_rate = differenced.sample_rate;
  out.values = mean_smooth(profile, config.smooth_width);
  return out;
}

int estimate_avg_pitch(const EnergyProfile& profile) {
  const int64_t n = static_cast<int64_t>(profile.values.size());
  const int lag_min =
      static_cast<int>(llround(kMinGapMs * 1e-3 * profile.sample_rate));
  const int lag_max =
      static_cast<int>(llround(12.5e-3 * profile.sample_rate));
  if (n <= lag_max + 1) return 0;

  const double mean =
      std::accumulate(profile.values.begin(), profile.values.end(), 0.0) / n;
  std::vector<double> x(profile.values);
  for (double& v : x) v -= mean;

  std::vector<double> r(static_cast<size_t>(lag_max + 2), 0.0);
  double r0 = 0.0;
  for (int64_t i = 0; i < n; ++i) r0 += x[i] * x[i];
  if (r0 <= 0.0) return 0;
  for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
    double acc = 0.0;
    for (int64_t i = 0; i + lag < n; ++i) acc += x[i] * x[i + lag];
    r[static_cast<size_t>(lag)] = acc;
  }

  // A qualified peak must stand clearly above chance: strict local
  // maximum with normalized correlation >= 0.3. Without the bar, any
  // noise profile would produce some positive wiggle and the fallback
  // kernel would never engage.
  int best_lag = 0;
  double best = 0.0;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    const double v = r[static_cast<size_t>(lag)];
    if (v <= 0.0 || v / r0 < 0.3) continue;
    if (v <= r[static_cast<size_t>(lag - 1)] ||
        v <= r[static_cast<size_t>(lag + 1)]) {
      continue;
    }
    if (v > best) {
      best = v;
      best_lag = lag;
    }
  }
  return best_lag;
}

EpochEvidence epoch_evidence(const EnergyProfile& profile,
                             int avg_pitch_samples) {
  const int fs = profile.sample_rate;
  const int min_len = static_cast<int>(llround(kMinPitchMs * 1e-3 * fs));
  const int max_len = static_cast<int>(llround(kMaxPitchMs * 1e-3 * fs));

  EpochEvidence out;
  out.kernel_length = avg_pitch_samples;
  if (avg_pitch_samples < min_len || avg_pitch_samples > max_len) {
    out.kernel_length = static_cast<int>(llround(kFallbackMs * 1e-3 * fs));
    out.used_fallback = true;
  }

  int norm_window = static_cast<int>(llround(kNormWindowMs * 1e-3 * fs));
  if (norm_window % 2 == 0) ++norm_window;
  const std::vector<double> local_mean =
      mean_smooth(profile.values, norm_window);
  std::vector<double> normalized(profile.values.size());
  for (size_t i = 0; i < normalized.size(); ++i) {
    normalized[i] = profile.values[i] / std::max(local_mean[i], kMeanFloor);
  }

  out.values = gaussian_smooth_renormalized(normalized,
                                            gaussian_kernel(out.kernel_length));
  return out;
}

EpochTrain pick_epochs(const std::vector<double>& evidence,
                       const VoicedRegion& region, int sample_rate) {
  if (static_cast<int64_t>(evidence.size()) != region.length()) {
    throw InvalidLength("evidence length must match region length");
  }
  const int64_t min_gap = llround(kMinGapMs * 1e-3 * sample_rate);

  // The evidence is nonnegative by construction, so positivity of a peak
  // is judged on the mean-removed signal. A local maximum sitting below
  // the baseline is overlap residue, not an excitation event.
  const double mean =
      evidence.empty()
          ? 0.0
          : std::accumulate(evidence.begin(), evidence.end(), 0.0) /
                static_cast<double>(evidence.size());

  struct Candidate {
    int64_t index;
    double value;
  };
  std::vector<Candidate> cand;
  for (size_t i = 1; i + 1 < evidence.size(); ++i) {
    if (evidence[i] - mean > 0.0 && evidence[i] > evidence[i - 1] &&
        evidence[i] > evidence[i + 1]) {
      cand.push_back({static_cast<int64_t>(i), evidence[i]});
    }
  }

  // Rule (a): no two epochs closer than the 2 ms floor; the weaker of a
  // violating pair goes (the later one on exact ties).
  auto drop_smaller = [&cand](size_t i) {
    const size_t victim = cand[i].value < cand[i + 1].value ? i : i + 1;
    cand.erase(cand.begin() + static_cast<int64_t>(victim));
  };
  for (size_t i = 0; i + 1 < cand.size();) {
    if (cand[i + 1].index - cand[i].index < min_gap) {
      drop_smaller(i);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }

  // Rule (b): successive epochs must bound a dip of the mean-removed
  // evidence below zero.
  for (size_t i = 0; i + 1 < cand.size();) {
    bool dips = false;
    for (int64_t j = cand[i].index + 1; j < cand[i + 1].index; ++j) {
      if (evidence[static_cast<size_t>(j)] - mean < 0.0) {
        dips = true;
        break;
      }
    }
    if (!dips) {
      drop_smaller(i);
      if (i > 0) --i;
    } else {
      ++i;
    }
  }

  EpochTrain train;
  train.region = region;
  train.locations.reserve(cand.size());
  train.strengths.reserve(cand.size());
  for (const Candidate& c : cand) {
    train.locations.push_back(region.start_sample + c.index);
    train.strengths.push_back(c.value);
  }
  return train;
}

std::vector<RegionEpochs> analyze_regions(
    const Waveform& wave, const std::vector<VoicedRegion>& regions,
    const ZtwConfig& config) {
  validate(wave);
  Waveform differenced;
  differenced.sample_rate = wave.sample_rate;
  if (!wave.samples.empty()) differenced.samples = difference(wave.samples);

  const int64_t min_region =
      llround(kMinRegionMs * 1e-3 * wave.sample_rate);
  std::vector<RegionEpochs> analyses;
  for (const VoicedRegion& region : regions) {
    if (region.length() < min_region) {
      std::cerr << "epoch: skipping region [" << region.start_sample << ", "
                << region.end_sample << ") shorter than " << kMinRegionMs
                << " ms\n";
      continue;
    }
    RegionEpochs analysis;
    analysis.profile = energy_profile(differenced, region, config);
    const int pitch = estimate_avg_pitch(analysis.profile);
    analysis.evidence = epoch_evidence(analysis.profile, pitch);
    EpochTrain& train = analysis.train;
    train = pick_epochs(analysis.evidence.values, region, wave.sample_rate);

    // Evidence is contrast-normalized and therefore scale-free; the
    // profile value at the epoch is the excitation energy itself, which
    // is what downstream strength features need.
    size_t keep = 0;
    for (size_t i = 0; i < train.locations.size(); ++i) {
      const double s = analysis.profile.values[static_cast<size_t>(
          train.locations[i] - region.start_sample)];
      if (s <= 0.0) continue;
      train.locations[keep] = train.locations[i];
      train.strengths[keep] = s;
      ++keep;
    }
    train.locations.resize(keep);
    train.strengths.resize(keep);
    analyses.push_back(std::move(analysis));
  }
  return analyses;
}

std::vector<EpochTrain> detect_epochs(const Waveform& wave,
                                      const std::vector<VoicedRegion>& regions,
                                      const ZtwConfig& config) {
  std::vector<RegionEpochs> analyses = analyze_regions(wave, regions, config);
  std::vector<EpochTrain> trains;
  trains.reserve(analyses.size());
  for (RegionEpochs& analysis : analyses) {
    trains.push_back(std::move(analysis.train));
  }
  return trains;
}

std::string epochs_to_csv(const std::vector<EpochTrain>& trains,
                          int sample_rate) {
  std::string csv = "sample_index,time_sec,strength\n";
  char row[128];
  for (const EpochTrain& train : trains) {
    for (size_t i = 0; i < train.locations.size(); ++i) {
      std::snprintf(row, sizeof(row), "%lld,%.6f,%.9g\n",
                    static_cast<long long>(train.locations[i]),
                    static_cast<double>(train.locations[i]) / sample_rate,
                    train.strengths[i]);
      csv += row;
    }
  }
  return csv;
}

}  // namespace emorec

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

#include "emorec/vad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "emorec/common.hpp"
#include "emorec/signal.hpp"

namespace emorec {
namespace {

int odd_window(double ms, int sample_rate) {
  int w = static_cast<int>(llround(ms * 1e-3 * sample_rate));
  if (w % 2 == 0) ++w;
  return std::max(w, 1);
}

struct FrameRun {
  int64_t first = 0;
  int64_t last = 0;  // inclusive
};

}  // namespace

ZffSignal zero_frequency_filter(const Waveform& wave, double trend_window_ms) {
  validate(wave);
  const int trend = odd_window(trend_window_ms, wave.sample_rate);
  if (wave.size() < 3 * static_cast<int64_t>(trend)) {
    throw SignalTooShort("signal shorter than three trend windows");
  }

  std::vector<double> d = difference(wave.samples);
  // The boundary term of the difference is a spurious impulse that would
  // integrate into an edge ramp; dropping it makes the filter exactly
  // invariant to a constant offset.
  d[0] = 0.0;

  std::vector<double> y = cumulative_sum(cumulative_sum(d));
  for (int pass = 0; pass < 2; ++pass) {
    const std::vector<double> trend_line = mean_smooth(y, trend);
    for (size_t i = 0; i < y.size(); ++i) y[i] -= trend_line[i];
  }

  // Each trend pass truncates its centered window over the first and
  // last half window, and the second pass reads the first pass's
  // corrupted zone through another half window. The residual of the
  // double integrator in that settling zone dwarfs the filtered signal,
  // so it is zeroed rather than handed downstream.
  const size_t guard =
      std::min(y.size(), static_cast<size_t>(3 * trend / 2));
  std::fill(y.begin(), y.begin() + static_cast<int64_t>(guard), 0.0);
  std::fill(y.end() - static_cast<int64_t>(guard), y.end(), 0.0);

  ZffSignal out;
  out.sample_rate = wave.sample_rate;
  out.samples = std::move(y);
  return out;
}

SphContour sph_contour(const ZffSignal& zff, const VadConfig& config) {
  const int fs = zff.sample_rate;
  const int frame = static_cast<int>(llround(config.frame_ms * 1e-3 * fs));
  const int shift = static_cast<int>(llround(config.shift_ms * 1e-3 * fs));
  const int64_t len = static_cast<int64_t>(zff.samples.size());
  if (len < frame) {
    throw SignalTooShort("signal shorter than one analysis frame");
  }
  if (config.n_fft < frame) {
    throw InvalidLength("transform size smaller than frame length");
  }

  const AnalyticSignal analytic = analytic_envelope_and_cos_phase(zff.samples);

  std::vector<double> hann(frame);
  for (int n = 0; n < frame; ++n) {
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / (frame - 1));
  }

  const int half = config.n_fft / 2;
  const int k_min = std::max(
      1, static_cast<int>(std::ceil(config.f0_min_hz * config.n_fft / fs)));
  const int k_max = std::min(
      half, static_cast<int>(std::floor(config.f0_max_hz * config.n_fft / fs)));

  Fft fft(config.n_fft);
  std::vector<std::complex<double>> buf(config.n_fft);
  std::vector<double> amp(half + 1);

  SphContour out;
  out.sample_rate = fs;
  out.frame_samples = frame;
  out.shift_samples = shift;
  out.source_samples = len;

  const int64_t n_frames = (len - frame) / shift + 1;
  out.values.reserve(static_cast<size_t>(n_frames));
  for (int64_t f = 0; f < n_frames; ++f) {
    const int64_t start = f * shift;
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    double energy = 0.0;
    for (int n = 0; n < frame; ++n) {
      const size_t i = static_cast<size_t>(start + n);
      buf[n] = analytic.cos_phase[i] * hann[n];
      energy += zff.samples[i] * zff.samples[i];
    }
    fft.forward(buf);
    for (int k = 0; k <= half; ++k) amp[k] = std::abs(buf[k]);

    int k0 = k_min;
    for (int k = k_min + 1; k <= k_max; ++k) {
      if (amp[k] > amp[k0]) k0 = k;
    }
    double sph = 0.0;
    for (int h = 1; h <= config.n_harmonics; ++h) {
      const int bin = h * k0;
      if (bin > half) break;
      sph += amp[bin];
    }
    // The cosine phase is amplitude-blind, so a quiet noise floor would
    // score as high as full voicing. Weighting by the frame RMS of the
    // ZFFS restores the contrast without touching the harmonic structure;
    // the global normalization below keeps the contour scale-free.
    out.values.push_back(std::sqrt(energy / frame) * sph);
  }

  double peak = 0.0;
  for (double v : out.values) peak = std::max(peak, v);
  if (peak > 0.0) {
    for (double& v : out.values) v /= peak;
  }
  return out;
}

std::vector<VoicedRegion> segment_voiced(const SphContour& contour,
                                         const VadConfig& config) {
  const double shift_ms = 1e3 * contour.shift_samples / contour.sample_rate;
  const int64_t min_frames = static_cast<int64_t>(
      std::ceil(config.min_region_ms / shift_ms));

  std::vector<FrameRun> runs;
  const int64_t n = static_cast<int64_t>(contour.values.size());
  for (int64_t f = 0; f < n; ++f) {
    if (contour.values[static_cast<size_t>(f)] < config.threshold) continue;
    if (!runs.empty() && runs.back().last == f - 1) {
      runs.back().last = f;
    } else {
      runs.push_back({f, f});
    }
  }

  std::vector<FrameRun> kept;
  for (const FrameRun& r : runs) {
    if (r.last - r.first + 1 >= min_frames) kept.push_back(r);
  }

  std::vector<FrameRun> bridged;
  for (const FrameRun& r : kept) {
    if (!bridged.empty() &&
        (r.first - bridged.back().last - 1) * shift_ms < config.bridge_ms) {
      bridged.back().last = r.last;
    } else {
      bridged.push_back(r);
    }
  }

  std::vector<VoicedRegion> regions;
  for (const FrameRun& r : bridged) {
    VoicedRegion v;
    v.start_sample = r.first * contour.shift_samples;
    v.end_sample = std::min<int64_t>(
        r.last * contour.shift_samples + contour.frame_samples,
        contour.source_samples);
    if (r.last == n - 1) v.end_sample = contour.source_samples;
    // Neighboring frames overlap by frame - shift samples, so runs that
    // are distinct on the frame grid can still touch in sample space.
    if (!regions.empty() && v.start_sample <= regions.back().end_sample) {
      regions.back().end_sample = std::max(regions.back().end_sample,
                                           v.end_sample);
    } else {
      regions.push_back(v);
    }
  }
  return regions;
}

std::vector<VoicedRegion> detect_voiced_regions(const Waveform& wave,
                                                const VadConfig& config) {
  const ZffSignal zff = zero_frequency_filter(wave, config.trend_window_ms);
  const SphContour contour = sph_contour(zff, config);
  return segment_voiced(contour, config);
}

std::string regions_to_csv(const std::vector<VoicedRegion>& regions,
                           int sample_rate) {
  std::string csv = "start_sample,end_sample,start_sec,end_sec\n";
  char row[128];
  for (const VoicedRegion& r : regions) {
    std::snprintf(row, sizeof(row), "%lld,%lld,%.6f,%.6f\n",
                  static_cast<long long>(r.start_sample),
                  static_cast<long long>(r.end_sample),
                  static_cast<double>(r.start_sample) / sample_rate,
                  static_cast<double>(r.end_sample) / sample_rate);
    csv += row;
  }
  return csv;
}

}  // namespace emorec

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
// Numeric kernels shared by the analysis front end: differencing, the two
// zero-time windows, DFT, analytic signal / Hilbert envelope, smoothing and
// Gaussian convolution.

#ifndef EMOREC_SIGNAL_HPP_
#define EMOREC_SIGNAL_HPP_

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "emorec/common.hpp"
#include "emorec/waveform.hpp"

namespace emorec {

/// Finite impulse response with an explicit center tap.
struct Kernel {
  std::vector<double> coefficients;
  int center = 0;  // index of the tap aligned with the output sample

  int length() const { return static_cast<int>(coefficients.size()); }
};

/// One real-valued plane (real or imaginary part, or a derived magnitude)
/// of a length-n_fft transform.
struct RealSpectrum {
  std::vector<double> bins;
  int n_fft = 0;
  bool half = false;  // true when bins holds only 0..n_fft/2

  double bin_resolution(int sample_rate) const {
    return static_cast<double>(sample_rate) / n_fft;
  }
};

// Complex FFT of any length n >= 1. Power-of-two sizes run on an iterative
// radix-2 kernel with precomputed tables; other sizes go through Bluestein's
// chirp-z reduction onto a padded power-of-two transform, so forward/inverse
// stay exact DFTs for every length.
class Fft {
 public:
  explicit Fft(int n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  int size() const;
  void forward(std::vector<std::complex<double>>& a) const;
  void inverse(std::vector<std::complex<double>>& a) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// First difference, out[0] = x[0] (x[-1] treated as zero). Length preserved.
std::vector<double> difference(const std::vector<double>& x);
Waveform difference(const Waveform& w);

/// Running sum; inverse of difference up to the boundary sample.
std::vector<double> cumulative_sum(const std::vector<double>& x);

/// h1[0] = 0, h1[n] = 1 / (4 sin^2(pi n / N)) for n = 1..N-1.
/// Callers square it before applying.
Kernel window_h1(int n);

/// h2[n] = 4 cos^2(pi n / (2M)) for n = 0..M-1; strictly decreasing.
Kernel window_h2(int m);

/// Full-length DFT of a real sequence zero-padded to n_fft.
/// Returns (real part, imaginary part).
std::pair<RealSpectrum, RealSpectrum> dft_real(const std::vector<double>& x,
                                               int n_fft);

struct AnalyticSignal {
  std::vector<double> envelope;
  std::vector<double> cos_phase;
};

/// Hilbert envelope and cosine-phase of a real sequence. The Hilbert
/// transform is applied in the frequency domain over the whole segment with
/// DC and Nyquist bins zeroed; cos_phase is 0 wherever the envelope falls
/// below 1e-12.
AnalyticSignal analytic_envelope_and_cos_phase(const std::vector<double>& x);

/// Frequency-domain Hilbert transform (the imaginary part of the analytic
/// signal) of a real sequence.
std::vector<double> hilbert_transform(const std::vector<double>& x);

/// Centered moving average with the window truncated at the edges.
std::vector<double> mean_smooth(const std::vector<double>& x, int width);

/// Unit-sum Gaussian kernel, sigma = L/4, symmetric support
/// [-floor(L/2), +floor(L/2)] around the center tap.
Kernel gaussian_kernel(int length);

/// Linear convolution cropped to the input length, aligned on the kernel
/// center, zero-padded boundaries.
std::vector<double> convolve_same(const std::vector<double>& x,
                                  const Kernel& k);

}  // namespace emorec

#endif  // EMOREC_SIGNAL_HPP_

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

#include "emorec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace emorec {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

struct Fft::Impl {
  int n = 0;
  // radix-2 tables
  std::vector<int> rev;
  std::vector<std::complex<double>> twiddle;  // exp(-2 pi i j / n), j < n/2
  // Bluestein state (non-power-of-two sizes)
  std::unique_ptr<Fft> inner;                   // power-of-two helper
  std::vector<std::complex<double>> chirp;      // exp(-i pi k^2 / n)
  std::vector<std::complex<double>> bspectrum;  // FFT of the wrapped chirp

  explicit Impl(int size) : n(size) {
    if (n <= 0) throw InvalidLength("fft size must be positive");
    if (is_pow2(n)) {
      init_pow2();
    } else {
      init_bluestein();
    }
  }

  void init_pow2() {
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    rev.resize(n);
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < log2n; ++b) r |= ((i >> b) & 1) << (log2n - 1 - b);
      rev[i] = r;
    }
    twiddle.resize(std::max(1, n / 2));
    for (int j = 0; j < n / 2; ++j) {
      double ang = -2.0 * M_PI * j / n;
      twiddle[j] = {std::cos(ang), std::sin(ang)};
    }
  }

  void init_bluestein() {
    chirp.resize(n);
    for (int k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the phase argument small and exact.
      int64_t q = (static_cast<int64_t>(k) * k) % (2LL * n);
      double ang = -M_PI * static_cast<double>(q) / n;
      chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    int m = next_pow2(2 * n - 1);
    inner = std::make_unique<Fft>(m);
    std::vector<std::complex<double>> b(m, {0.0, 0.0});
    b[0] = std::conj(chirp[0]);
    for (int k = 1; k < n; ++k) {
      b[k] = std::conj(chirp[k]);
      b[m - k] = std::conj(chirp[k]);
    }
    inner->forward(b);
    bspectrum = std::move(b);
  }

  void run_pow2(std::vector<std::complex<double>>& a, bool inv) const {
    for (int i = 0; i < n; ++i) {
      if (rev[i] > i) std::swap(a[i], a[rev[i]]);
    }
    for (int len = 2; len <= n; len <<= 1) {
      int half = len >> 1;
      int step = n / len;
      for (int i = 0; i < n; i += len) {
        for (int j = 0; j < half; ++j) {
          std::complex<double> w = twiddle[j * step];
          if (inv) w = std::conj(w);
          std::complex<double> u = a[i + j];
          std::complex<double> v = a[i + j + half] * w;
          a[i + j] = u + v;
          a[i + j + half] = u - v;
        }
      }
    }
    if (inv) {
      double scale = 1.0 / n;
      for (auto& v : a) v *= scale;
    }
  }

  void run_bluestein(std::vector<std::complex<double>>& a) const {
    int m = inner->size();
    std::vector<std::complex<double>> y(m, {0.0, 0.0});
    for (int k = 0; k < n; ++k) y[k] = a[k] * chirp[k];
    inner->forward(y);
    for (int k = 0; k < m; ++k) y[k] *= bspectrum[k];
    inner->inverse(y);
    for (int k = 0; k < n; ++k) a[k] = y[k] * chirp[k];
  }
};

Fft::Fft(int n) : impl_(std::make_unique<Impl>(n)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

int Fft::size() const { return impl_->n; }

void Fft::forward(std::vector<std::complex<double>>& a) const {
  if (static_cast<int>(a.size()) != impl_->n)
    throw InvalidLength("fft buffer size mismatch");
  if (impl_->inner) {
    impl_->run_bluestein(a);
  } else {
    impl_->run_pow2(a, false);
  }
}

void Fft::inverse(std::vector<std::complex<double>>& a) const {
  if (static_cast<int>(a.size()) != impl_->n)
    throw InvalidLength("fft buffer size mismatch");
  if (impl_->inner) {
    // inverse via conjugation; the chirp tables encode the forward sign
    for (auto& v : a) v = std::conj(v);
    impl_->run_bluestein(a);
    double scale = 1.0 / impl_->n;
    for (auto& v : a) v = std::conj(v) * scale;
  } else {
    impl_->run_pow2(a, true);
  }
}

std::vector<double> difference(const std::vector<double>& x) {
  if (x.empty()) throw EmptySignal("difference: empty input");
  std::vector<double> out(x.size());
  out[0] = x[0];
  for (size_t i = 1; i < x.size(); ++i) out[i] = x[i] - x[i - 1];
  return out;
}

Waveform difference(const Waveform& w) {
  return Waveform{difference(w.samples), w.sample_rate};
}

std::vector<double> cumulative_sum(const std::vector<double>& x) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    acc += x[i];
    out[i] = acc;
  }
  return out;
}

Kernel window_h1(int n) {
  if (n < 2) throw InvalidLength("window_h1: N must be >= 2");
  Kernel k;
  k.coefficients.resize(n);
  k.coefficients[0] = 0.0;
  // mirrored assignment keeps h1[i] == h1[N-i] exact in floating point
  for (int i = 1; i <= n / 2; ++i) {
    double s = std::sin(M_PI * i / n);
    double v = 1.0 / (4.0 * s * s);
    k.coefficients[i] = v;
    k.coefficients[n - i] = v;
  }
  return k;
}

Kernel window_h2(int m) {
  if (m < 1) throw InvalidLength("window_h2: M must be >= 1");
  Kernel k;
  k.coefficients.resize(m);
  for (int i = 0; i < m; ++i) {
    double c = std::cos(M_PI * i / (2.0 * m));
    k.coefficients[i] = 4.0 * c * c;
  }
  return k;
}

std::pair<RealSpectrum, RealSpectrum> dft_real(const std::vector<double>& x,
                                               int n_fft) {
  if (n_fft <= 0 || n_fft < static_cast<int>(x.size()))
    throw InvalidLength("dft_real: n_fft must cover the input");
  Fft fft(n_fft);
  std::vector<std::complex<double>> a(n_fft, {0.0, 0.0});
  for (size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
  fft.forward(a);
  RealSpectrum re, im;
  re.n_fft = im.n_fft = n_fft;
  re.bins.resize(n_fft);
  im.bins.resize(n_fft);
  for (int k = 0; k < n_fft; ++k) {
    re.bins[k] = a[k].real();
    im.bins[k] = a[k].imag();
  }
  return {std::move(re), std::move(im)};
}

std::vector<double> hilbert_transform(const std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  if (n < 2) throw InvalidLength("hilbert_transform: need length >= 2");
  Fft fft(n);
  std::vector<std::complex<double>> a(n);
  for (int i = 0; i < n; ++i) a[i] = {x[i], 0.0};
  fft.forward(a);
  // multiply by -j for positive frequencies, +j for negative; DC and
  // Nyquist are zeroed
  a[0] = {0.0, 0.0};
  int half = n / 2;
  if (n % 2 == 0) a[half] = {0.0, 0.0};
  for (int k = 1; k < (n + 1) / 2; ++k) a[k] *= std::complex<double>(0.0, -1.0);
  for (int k = half + 1; k < n; ++k) a[k] *= std::complex<double>(0.0, 1.0);
  fft.inverse(a);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a[i].real();
  return out;
}

AnalyticSignal analytic_envelope_and_cos_phase(const std::vector<double>& x) {
  constexpr double kEnvelopeEps = 1e-12;
  std::vector<double> xh = hilbert_transform(x);
  AnalyticSignal out;
  out.envelope.resize(x.size());
  out.cos_phase.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    double env = std::hypot(x[i], xh[i]);
    out.envelope[i] = env;
    out.cos_phase[i] = env < kEnvelopeEps ? 0.0 : x[i] / env;
  }
  return out;
}

std::vector<double> mean_smooth(const std::vector<double>& x, int width) {
  if (width < 1 || width % 2 == 0)
    throw InvalidWidth("mean_smooth: width must be odd and >= 1");
  int n = static_cast<int>(x.size());
  int half = width / 2;
  std::vector<double> prefix(n + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - half);
    int hi = std::min(n - 1, i + half);
    out[i] = (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
  }
  return out;
}

Kernel gaussian_kernel(int length) {
  if (length < 1) throw InvalidLength("gaussian_kernel: L must be >= 1");
  int half = length / 2;
  double sigma = length / 4.0;
  Kernel k;
  k.center = half;
  k.coefficients.resize(2 * half + 1);
  double sum = 0.0;
  for (int i = -half; i <= half; ++i) {
    double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    k.coefficients[i + half] = v;
    sum += v;
  }
  for (auto& c : k.coefficients) c /= sum;
  return k;
}

std::vector<double> convolve_same(const std::vector<double>& x,
                                  const Kernel& k) {
  int n = static_cast<int>(x.size());
  int len = k.length();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int m = 0; m < len; ++m) {
      int j = i - (m - k.center);
      if (j >= 0 && j < n) acc += k.coefficients[m] * x[j];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace emorec

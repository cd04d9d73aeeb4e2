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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "emorec/common.hpp"
#include "emorec/epoch.hpp"
#include "emorec/rng.hpp"
#include "emorec/signal.hpp"
#include "emorec/synth.hpp"
#include "emorec/vad.hpp"

using namespace emorec;

namespace {

Waveform differenced(const Waveform& w) {
  Waveform d;
  d.sample_rate = w.sample_rate;
  d.samples = difference(w.samples);
  return d;
}

std::vector<int64_t> local_maxima(const std::vector<double>& v) {
  std::vector<int64_t> out;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) {
      out.push_back(static_cast<int64_t>(i));
    }
  }
  return out;
}

int64_t nearest_distance(const std::vector<int64_t>& sorted, int64_t x) {
  int64_t best = INT64_MAX;
  for (int64_t v : sorted) best = std::min(best, std::abs(v - x));
  return best;
}

// Fraction of interior ground-truth GCIs matched by a detected epoch
// within tol samples.
double identification_rate(const std::vector<int64_t>& detected,
                           const std::vector<int64_t>& truth, int64_t tol) {
  int matched = 0;
  int total = 0;
  for (size_t g = 2; g + 2 < truth.size(); ++g) {
    ++total;
    if (nearest_distance(detected, truth[g]) <= tol) ++matched;
  }
  return total > 0 ? static_cast<double>(matched) / total : 0.0;
}

}  // namespace

TEST_CASE("hngd_spectrum of a zero segment is zero") {
  const RealSpectrum s = hngd_spectrum(std::vector<double>(48, 0.0));
  CHECK(s.bins.size() == 2048);
  CHECK_FALSE(s.half);
  for (double v : s.bins) CHECK(v == 0.0);
}

TEST_CASE("hngd_spectrum kills an impulse at segment start") {
  std::vector<double> seg(48, 0.0);
  seg[0] = 1.0;
  const RealSpectrum s = hngd_spectrum(seg);
  for (double v : s.bins) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("hngd_spectrum rejects wrong segment lengths") {
  CHECK_THROWS_AS(hngd_spectrum(std::vector<double>(47, 0.0)),
                  InvalidSegment);
  CHECK_THROWS_AS(hngd_spectrum(std::vector<double>(0)), InvalidSegment);
}

TEST_CASE("hngd_spectrum resolves a damped resonance") {
  // A 3 ms window sees only 2.4 cycles of an 800 Hz resonance, so the
  // peak location carries a phase-dependent bias of a few bins in either
  // direction. The pi/6 starting phase sits on the wide central plateau
  // of that bias curve; the damping only sharpens or flattens the peak.
  std::vector<double> seg(48);
  for (int n = 0; n < 48; ++n) {
    seg[n] = std::exp(-n / 64.0) *
             std::sin(2.0 * M_PI * 800.0 * n / 16000.0 + M_PI / 6.0);
  }
  const RealSpectrum s = hngd_spectrum(seg);
  int64_t argmax = 0;
  for (int64_t k = 1; k <= 1024; ++k) {
    if (s.bins[k] > s.bins[argmax]) argmax = k;
  }
  const double target_bin = 800.0 * 2048.0 / 16000.0;
  CHECK(std::abs(argmax - target_bin) <= 2.0);
  for (double v : s.bins) CHECK(v >= 0.0);
}

TEST_CASE("energy_profile of silence is zero") {
  Waveform w;
  w.samples.assign(4000, 0.0);
  const EnergyProfile p = energy_profile(w, {1000, 3000});
  CHECK(p.values.size() == 2000);
  for (double v : p.values) CHECK(v == 0.0);
}

TEST_CASE("energy_profile rejects bad regions") {
  Waveform w;
  w.samples.assign(4000, 0.0);
  CHECK_THROWS_AS(energy_profile(w, {1000, 1040}), RegionTooShort);
  CHECK_THROWS_AS(energy_profile(w, {3900, 4100}), Error);
}

TEST_CASE("energy_profile peaks at glottal closures") {
  SyntheticSpec spec;
  spec.f0_start_hz = 120.0;
  spec.duration_sec = 0.5;
  spec.gain = 0.5;
  spec.seed = 4;
  const SyntheticUtterance utt = synthesize(spec);

  const EnergyProfile p =
      energy_profile(differenced(utt.wave), {0, utt.wave.size()});
  const std::vector<int64_t> maxima = local_maxima(p.values);

  int hit = 0;
  int total = 0;
  for (size_t g = 2; g + 2 < utt.gci_samples.size(); ++g) {
    ++total;
    if (nearest_distance(maxima, utt.gci_samples[g]) <= 8) ++hit;
  }
  REQUIRE(total > 20);
  CHECK(hit >= (total * 95) / 100);
}

TEST_CASE("energy_profile is quadratic in amplitude") {
  SyntheticSpec spec;
  spec.f0_start_hz = 140.0;
  spec.duration_sec = 0.2;
  spec.seed = 6;
  const SyntheticUtterance utt = synthesize(spec);
  Waveform doubled = utt.wave;
  for (double& v : doubled.samples) v *= 2.0;

  const VoicedRegion region{0, utt.wave.size()};
  const EnergyProfile p1 = energy_profile(differenced(utt.wave), region);
  const EnergyProfile p2 = energy_profile(differenced(doubled), region);
  REQUIRE(p1.values.size() == p2.values.size());
  double peak = 0.0;
  for (double v : p1.values) peak = std::max(peak, v);
  for (size_t i = 0; i < p1.values.size(); ++i) {
    CHECK(std::abs(p2.values[i] - 4.0 * p1.values[i]) <= 4e-9 * peak);
  }
}

TEST_CASE("estimate_avg_pitch finds a 160-sample period") {
  EnergyProfile p;
  p.values.resize(4000);
  for (size_t i = 0; i < p.values.size(); ++i) {
    p.values[i] = 10.0 + 5.0 * std::sin(2.0 * M_PI * i / 160.0);
  }
  const int lag = estimate_avg_pitch(p);
  CHECK(std::abs(lag - 160) <= 2);
}

TEST_CASE("estimate_avg_pitch returns zero without structure") {
  EnergyProfile flat;
  flat.values.assign(2000, 7.0);
  CHECK(estimate_avg_pitch(flat) == 0);

  int zeros = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    EnergyProfile noise;
    noise.values.resize(2000);
    for (double& v : noise.values) v = std::abs(rng.gaussian());
    if (estimate_avg_pitch(noise) == 0) ++zeros;
  }
  CHECK(zeros >= 8);
}

TEST_CASE("epoch_evidence keeps a constant profile constant") {
  EnergyProfile p;
  p.values.assign(2000, 5.0);
  const EpochEvidence e = epoch_evidence(p, 160);
  CHECK_FALSE(e.used_fallback);
  CHECK(e.kernel_length == 160);
  REQUIRE(e.values.size() == 2000);
  for (double v : e.values) CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("epoch_evidence preserves isolated peak locations") {
  EnergyProfile p;
  p.values.assign(4000, 0.0);
  std::vector<int64_t> pulses;
  for (int64_t i = 200; i < 3900; i += 160) {
    p.values[static_cast<size_t>(i)] = 1.0;
    pulses.push_back(i);
  }
  const EpochEvidence e = epoch_evidence(p, 160);
  for (size_t k = 1; k + 1 < pulses.size(); ++k) {
    const int64_t loc = pulses[k];
    int64_t argmax = loc - 80;
    for (int64_t j = loc - 80; j <= loc + 80; ++j) {
      if (e.values[static_cast<size_t>(j)] >
          e.values[static_cast<size_t>(argmax)]) {
        argmax = j;
      }
    }
    CHECK(std::abs(argmax - loc) <= 1);
  }
}

TEST_CASE("epoch_evidence falls back to the 2 ms kernel") {
  EnergyProfile p;
  p.values.assign(1000, 1.0);
  for (int pitch : {0, 8, 500, -5}) {
    const EpochEvidence e = epoch_evidence(p, pitch);
    CHECK(e.used_fallback);
    CHECK(e.kernel_length == 32);
  }
  const EpochEvidence e = epoch_evidence(p, 16);
  CHECK_FALSE(e.used_fallback);
  CHECK(e.kernel_length == 16);
}

TEST_CASE("pick_epochs applies the 2 ms rule") {
  std::vector<double> ev(1000, 0.0);
  ev[499] = 1.0;
  ev[500] = 2.0;
  ev[501] = 1.0;
  ev[515] = 0.5;
  ev[516] = 1.0;
  ev[517] = 0.5;
  const EpochTrain t = pick_epochs(ev, {0, 1000});
  REQUIRE(t.locations.size() == 1);
  CHECK(t.locations[0] == 500);
  CHECK(t.strengths[0] == 2.0);
}

TEST_CASE("pick_epochs on monotone evidence is empty") {
  std::vector<double> ev(1000);
  for (size_t i = 0; i < ev.size(); ++i) ev[i] = static_cast<double>(i);
  CHECK(pick_epochs(ev, {0, 1000}).locations.empty());
}

TEST_CASE("pick_epochs requires a negative dip between epochs") {
  // Separated peaks with silence between them: the dip exists and both
  // survive.
  std::vector<double> dipped(1000, 0.0);
  dipped[299] = 0.5;
  dipped[300] = 1.0;
  dipped[301] = 0.5;
  dipped[399] = 0.45;
  dipped[400] = 0.9;
  dipped[401] = 0.45;
  const EpochTrain both = pick_epochs(dipped, {0, 1000});
  REQUIRE(both.locations.size() == 2);
  CHECK(both.locations[0] == 300);
  CHECK(both.locations[1] == 400);

  // Same peaks riding a raised bridge: no dip, the smaller one goes.
  std::vector<double> bridged(1000, 0.0);
  for (int i = 290; i <= 410; ++i) bridged[i] = 0.85;
  bridged[300] = 1.0;
  bridged[400] = 0.9;
  const EpochTrain one = pick_epochs(bridged, {0, 1000});
  REQUIRE(one.locations.size() == 1);
  CHECK(one.locations[0] == 300);
}

TEST_CASE("pick_epochs validates the evidence length") {
  CHECK_THROWS_AS(pick_epochs(std::vector<double>(999, 0.0), {0, 1000}),
                  InvalidLength);
}

TEST_CASE("detect_epochs without regions is empty") {
  Waveform w;
  w.samples.assign(8000, 0.0);
  CHECK(detect_epochs(w, {}).empty());
}

TEST_CASE("detect_epochs recovers vowel glottal closures") {
  SyntheticSpec spec;
  spec.f0_start_hz = 120.0;
  spec.duration_sec = 0.8;
  spec.silence_lead_sec = 0.1;
  spec.silence_tail_sec = 0.1;
  spec.gain = 0.5;
  spec.seed = 8;
  const SyntheticUtterance utt = synthesize(spec);

  const std::vector<VoicedRegion> regions = {{1600, 14400}};
  const auto trains = detect_epochs(utt.wave, regions);
  REQUIRE(trains.size() == 1);

  CHECK(identification_rate(trains[0].locations, utt.gci_samples, 4) >= 0.95);
  const double truth = static_cast<double>(utt.gci_samples.size());
  const double got = static_cast<double>(trains[0].locations.size());
  CHECK(std::abs(got - truth) <= 0.05 * truth);
}

TEST_CASE("detect_epochs handles two regions") {
  SyntheticSpec a;
  a.f0_start_hz = 110.0;
  a.duration_sec = 0.4;
  a.silence_lead_sec = 0.15;
  a.silence_tail_sec = 0.15;
  a.gain = 0.5;
  a.seed = 12;
  SyntheticSpec b = a;
  b.f0_start_hz = 180.0;
  b.seed = 13;
  const SyntheticUtterance ua = synthesize(a);
  const SyntheticUtterance ub = synthesize(b);

  Waveform w = ua.wave;
  const int64_t offset = ua.wave.size();
  w.samples.insert(w.samples.end(), ub.wave.samples.begin(),
                   ub.wave.samples.end());

  const std::vector<VoicedRegion> regions = {{2400, 8800},
                                             {offset + 2400, offset + 8800}};
  const auto trains = detect_epochs(w, regions);
  REQUIRE(trains.size() == 2);
  const double na = static_cast<double>(ua.gci_samples.size());
  const double nb = static_cast<double>(ub.gci_samples.size());
  CHECK(std::abs(trains[0].locations.size() - na) <= 0.05 * na);
  CHECK(std::abs(trains[1].locations.size() - nb) <= 0.05 * nb);
}

TEST_CASE("detect_epochs skips undersized regions") {
  Waveform w;
  w.samples.assign(8000, 0.0);
  const auto trains = detect_epochs(w, {{1000, 1500}});
  CHECK(trains.empty());  // 500 samples is below the 40 ms floor
}

TEST_CASE("detect_epochs locations are amplitude invariant") {
  SyntheticSpec spec;
  spec.f0_start_hz = 140.0;
  spec.duration_sec = 0.4;
  spec.gain = 0.5;
  spec.seed = 17;
  const SyntheticUtterance utt = synthesize(spec);
  const std::vector<VoicedRegion> regions = {{0, utt.wave.size()}};

  const auto base = detect_epochs(utt.wave, regions);
  REQUIRE(base.size() == 1);

  Waveform doubled = utt.wave;
  for (double& v : doubled.samples) v *= 2.0;
  const auto scaled = detect_epochs(doubled, regions);
  REQUIRE(scaled.size() == 1);
  REQUIRE(scaled[0].locations.size() == base[0].locations.size());
  for (size_t i = 0; i < base[0].locations.size(); ++i) {
    CHECK(scaled[0].locations[i] == base[0].locations[i]);
    CHECK(scaled[0].strengths[i] ==
          doctest::Approx(4.0 * base[0].strengths[i]).epsilon(1e-9));
  }
}

TEST_CASE("detect_epochs tracks a pitch sweep") {
  SyntheticSpec spec;
  spec.f0_start_hz = 100.0;
  spec.f0_end_hz = 400.0;
  spec.contour = SyntheticSpec::Contour::kLinear;
  spec.duration_sec = 1.0;
  spec.gain = 0.6;
  spec.seed = 19;
  const SyntheticUtterance utt = synthesize(spec);

  const auto trains = detect_epochs(utt.wave, {{0, utt.wave.size()}});
  REQUIRE(trains.size() == 1);
  CHECK(identification_rate(trains[0].locations, utt.gci_samples, 16) >= 0.90);
}

TEST_CASE("detect_epochs invariants on complex material") {
  SyntheticSpec spec = emotion_preset("happy", 23);
  spec.jitter_pct = 4.0;
  spec.shimmer_pct = 10.0;
  spec.noise_level = 0.02;
  const SyntheticUtterance utt = synthesize(spec);

  const auto regions = detect_voiced_regions(utt.wave);
  const auto trains = detect_epochs(utt.wave, regions);
  for (const EpochTrain& t : trains) {
    for (size_t i = 0; i < t.locations.size(); ++i) {
      CHECK(t.strengths[i] > 0.0);
      CHECK(t.locations[i] >= t.region.start_sample);
      CHECK(t.locations[i] < t.region.end_sample);
      if (i > 0) CHECK(t.locations[i] - t.locations[i - 1] >= 32);
    }
  }
}

TEST_CASE("epochs_to_csv formats rows") {
  EpochTrain t;
  t.locations = {1600, 1760};
  t.strengths = {2.0, 1.5};
  const std::string csv = epochs_to_csv({t}, 16000);
  CHECK(csv ==
        "sample_index,time_sec,strength\n"
        "1600,0.100000,2\n"
        "1760,0.110000,1.5\n");
}

// Copyright 2026 The fcwr Authors.
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


#include <cmath>
#include <random>

#include "doctest.h"
#include "fcwr/dsp.hpp"
#include "fcwr/noise.hpp"
#include "test_util.hpp"

namespace {

fcwr::AudioBuffer buf(std::vector<double> x) {
  fcwr::AudioBuffer a;
  a.samples = std::move(x);
  return a;
}

// Averaged periodogram over non-overlapping 1024-sample rectangular segments.
std::vector<double> averaged_power(const std::vector<double>& x) {
  fcwr::FrameConfig cfg;
  cfg.fft_size = 1024;
  std::vector<double> acc(513, 0.0);
  std::size_t segs = 0;
  for (std::size_t start = 0; start + 1024 <= x.size(); start += 1024, ++segs) {
    const auto s = fcwr::spectrum(std::span(x).subspan(start, 1024), cfg, 16000);
    for (std::size_t b = 0; b < acc.size(); ++b) acc[b] += s.power[b];
  }
  for (auto& v : acc) v /= static_cast<double>(segs);
  return acc;
}

double band_fraction(const std::vector<double>& p, double lo_hz, double hi_hz) {
  double in = 0.0, all = 0.0;
  for (std::size_t b = 1; b < p.size(); ++b) {
    const double f = static_cast<double>(b) * 16000.0 / 1024.0;
    all += p[b];
    if (f >= lo_hz && f < hi_hz) in += p[b];
  }
  return in / all;
}

}  // namespace

TEST_CASE("white noise determinism and seed sensitivity") {
  const auto a = fcwr::synth_white(10000, 42), b = fcwr::synth_white(10000, 42), c = fcwr::synth_white(10000, 43);
  CHECK(a.samples == b.samples);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a.samples[i] != c.samples[i];
  CHECK(differ > 9900);
}

TEST_CASE("white noise statistics") {
  const std::size_t N = 1000000;
  const auto w = fcwr::synth_white(N, 2024).samples;
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(N);
  CHECK(std::abs(mean) < 4.0 * 0.1 / std::sqrt(static_cast<double>(N)));
  CHECK(fcwr::rms(w) == doctest::Approx(0.1).epsilon(0.01));

  const auto p = averaged_power(w);
  double global = 0.0;
  for (std::size_t b = 1; b < p.size(); ++b) global += p[b];
  global /= static_cast<double>(p.size() - 1);
  for (std::size_t lo = 4; lo < 512; lo *= 2) {
    double band = 0.0;
    const std::size_t hi = std::min<std::size_t>(2 * lo, 513);
    for (std::size_t b = lo; b < hi; ++b) band += p[b];
    band /= static_cast<double>(hi - lo);
    CHECK(std::abs(band / global - 1.0) < 0.05);
  }
}

TEST_CASE("colored fixtures put their energy at opposite ends") {
  const auto low = fcwr::synth_colored(200000, 5, fcwr::ColoredNoise::lowpass).samples;
  const auto high = fcwr::synth_colored(200000, 5, fcwr::ColoredNoise::highpass).samples;
  CHECK(band_fraction(averaged_power(low), 0.0, 1000.0) > 0.7);
  CHECK(band_fraction(averaged_power(high), 3000.0, 8001.0) > 0.7);
}

TEST_CASE("mixing scales noise to the requested SNR") {
  // A sine of amplitude 0.1*sqrt(2) over whole periods has RMS 0.1.
  const auto clean = buf(testutil::sine(16000, 250.0, 16000.0, 0.1 * std::sqrt(2.0)));
  CHECK(fcwr::rms(clean.samples) == doctest::Approx(0.1).epsilon(1e-12));
  const auto noise = fcwr::synth_white(16000, 9);
  CHECK(fcwr::rms(fcwr::mix_with_noise(clean, noise, 0.0, 1).added_noise.samples) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(fcwr::rms(fcwr::mix_with_noise(clean, noise, 20.0, 1).added_noise.samples) ==
        doctest::Approx(0.01).epsilon(1e-12));

  const auto r = fcwr::mix_with_noise(clean, noise, 5.0, 3);
  CHECK(std::abs(fcwr::measure_snr_db(clean.samples, r.added_noise.samples) - 5.0) < 0.01);
}

TEST_CASE("mixing is additive, seeded and wraps short noise") {
  const auto clean = buf(testutil::random_signal(5000, 1, 0.3));
  const auto noise = fcwr::synth_colored(1234, 8, fcwr::ColoredNoise::highpass);
  const auto r = fcwr::mix_with_noise(clean, noise, 10.0, 77);
  CHECK(r.offset < noise.size());
  REQUIRE(r.mixed.size() == clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    CHECK(r.added_noise.samples[i] == r.gain * noise.samples[(r.offset + i) % noise.size()]);
    CHECK(r.mixed.samples[i] == clean.samples[i] + r.added_noise.samples[i]);
  }
  const auto again = fcwr::mix_with_noise(clean, noise, 10.0, 77);
  CHECK(again.mixed.samples == r.mixed.samples);
  CHECK(fcwr::mix_with_noise(clean, noise, 10.0, 78).offset != r.offset);

  const auto spec = fcwr::make_noise_spec("white", 3.0, 5);
  CHECK(fcwr::mix_at_snr(clean, spec).samples == fcwr::mix_at_snr(clean, spec).samples);
  CHECK(spec.label() == "white");
}

TEST_CASE("mixing does not clip") {
  const auto clean = buf(std::vector<double>(1000, 0.9));
  const auto mixed = fcwr::mix_at_snr(clean, fcwr::make_noise_spec("white", -5.0, 1));
  double peak = 0.0;
  for (double v : mixed.samples) peak = std::max(peak, std::abs(v));
  CHECK(peak > 1.0);
}

TEST_CASE("mixing errors") {
  const auto noise = fcwr::synth_white(100, 1);
  CHECK_ERROR_CODE(fcwr::mix_with_noise(buf(std::vector<double>(50, 0.0)), noise, 0.0, 1), SilentClean);
  CHECK_ERROR_CODE(fcwr::mix_with_noise(buf({0.1, 0.2}), buf(std::vector<double>(10, 0.0)), 0.0, 1), SilentNoise);
  CHECK_ERROR_CODE(fcwr::make_noise_spec("white", std::nan(""), 1), InvalidConfig);
}

TEST_CASE("noise from a WAV file") {
  testutil::TempDir dir("noise");
  fcwr::save_wav(dir / "babble.wav", fcwr::synth_colored(8000, 2, fcwr::ColoredNoise::lowpass));
  const auto spec = fcwr::make_noise_spec((dir / "babble.wav").string(), 10.0, 4);
  CHECK(spec.label() == "babble");
  const auto clean = buf(testutil::random_signal(3000, 6, 0.2));
  const auto mixed = fcwr::mix_at_snr(clean, spec);
  std::vector<double> added(clean.size());
  for (std::size_t i = 0; i < added.size(); ++i) added[i] = mixed.samples[i] - clean.samples[i];
  CHECK(std::abs(fcwr::measure_snr_db(clean.samples, added) - 10.0) < 0.01);
  CHECK_ERROR_CODE(fcwr::mix_at_snr(clean, fcwr::make_noise_spec((dir / "nope.wav").string(), 0, 0)), MissingFile);
}

TEST_CASE("calibration over random cases") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> snr(-5.0, 30.0);
  std::uniform_int_distribution<int> len(400, 20000);
  for (int i = 0; i < 50; ++i) {
    const auto clean = buf(testutil::random_signal(static_cast<std::size_t>(len(gen)), 1000 + i, 0.05 + 0.01 * i));
    const auto noise = i % 3 == 0   ? fcwr::synth_white(static_cast<std::size_t>(len(gen)), i)
                       : i % 3 == 1 ? fcwr::synth_colored(static_cast<std::size_t>(len(gen)), i, fcwr::ColoredNoise::lowpass)
                                    : fcwr::synth_colored(static_cast<std::size_t>(len(gen)), i, fcwr::ColoredNoise::highpass);
    const double target = snr(gen);
    const auto r = fcwr::mix_with_noise(clean, noise, target, static_cast<std::uint64_t>(i));
    CHECK(std::abs(fcwr::measure_snr_db(clean.samples, r.added_noise.samples) - target) < 0.01);
  }
}
